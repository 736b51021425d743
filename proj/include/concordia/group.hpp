#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace concordia {

// Element of the bivariate hyperoctahedral group: the eight symmetries of the
// unit square generated by the coordinate swap and the two reflections
// u_i -> 1 - u_i.  The point action applies the reflections first, then the
// swap; this fixed order makes the (swap, flip1, flip2) encoding canonical.
struct GroupElement {
    bool swap = false;
    bool flip1 = false;
    bool flip2 = false;

    // Action on a point of the unit square.
    std::pair<double, double> apply(double u1, double u2) const {
        double v1 = flip1 ? 1.0 - u1 : u1;
        double v2 = flip2 ? 1.0 - u2 : u2;
        return swap ? std::pair{v2, v1} : std::pair{v1, v2};
    }

    bool is_identity() const { return !swap && !flip1 && !flip2; }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

namespace group {

inline constexpr GroupElement identity{false, false, false};
inline constexpr GroupElement pi{true, false, false};
inline constexpr GroupElement nu1{false, true, false};
inline constexpr GroupElement nu2{false, false, true};
inline constexpr GroupElement tau{false, true, true};

// g∘h: first h, then g (composition of point actions in the same order).
GroupElement compose(const GroupElement& g, const GroupElement& h);

GroupElement inverse(const GroupElement& g);

// All eight elements in a fixed enumeration order.
const std::array<GroupElement, 8>& all_elements();

// Canonical names: "id", "pi", "nu1", "nu2", "tau", "pi.nu1", "pi.nu2", "pi.tau".
std::string name_of(const GroupElement& g);
std::optional<GroupElement> from_name(std::string_view name);

}  // namespace group

// One of the five subgroups of the bivariate group that the theory singles
// out: the full group, the permutations, the reflections, the survival pair
// and the permutation/survival combination.
struct Subgroup {
    enum class Id { Gamma, GammaPi, GammaNu, GammaTau, GammaPiTau };

    Id id;
    std::vector<GroupElement> elements;

    static const Subgroup& gamma();
    static const Subgroup& gamma_pi();
    static const Subgroup& gamma_nu();
    static const Subgroup& gamma_tau();
    static const Subgroup& gamma_pi_tau();

    static std::optional<Subgroup> by_name(std::string_view name);
    std::string name() const;
};

}  // namespace concordia
