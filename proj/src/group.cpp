#include "concordia/group.hpp"

namespace concordia {
namespace group {

GroupElement compose(const GroupElement& g, const GroupElement& h) {
    // Normalize S^{sg} F(g) S^{sh} F(h) into S^{s} F(f) using
    // F(f1,f2) ∘ S = S ∘ F(f2,f1).
    GroupElement out;
    out.swap = g.swap != h.swap;
    bool gf1 = h.swap ? g.flip2 : g.flip1;
    bool gf2 = h.swap ? g.flip1 : g.flip2;
    out.flip1 = gf1 != h.flip1;
    out.flip2 = gf2 != h.flip2;
    return out;
}

GroupElement inverse(const GroupElement& g) {
    GroupElement out;
    out.swap = g.swap;
    out.flip1 = g.swap ? g.flip2 : g.flip1;
    out.flip2 = g.swap ? g.flip1 : g.flip2;
    return out;
}

const std::array<GroupElement, 8>& all_elements() {
    static const std::array<GroupElement, 8> elems = {
        identity,
        pi,
        nu1,
        nu2,
        tau,
        compose(pi, nu1),
        compose(pi, nu2),
        compose(pi, tau),
    };
    return elems;
}

std::string name_of(const GroupElement& g) {
    if (!g.swap) {
        if (!g.flip1 && !g.flip2) return "id";
        if (g.flip1 && !g.flip2) return "nu1";
        if (!g.flip1 && g.flip2) return "nu2";
        return "tau";
    }
    // swap components: pi ∘ reflection
    GroupElement refl = compose(inverse(pi), g);
    if (refl.is_identity()) return "pi";
    return "pi." + name_of(refl);
}

std::optional<GroupElement> from_name(std::string_view name) {
    for (const auto& g : all_elements())
        if (name_of(g) == name) return g;
    return std::nullopt;
}

}  // namespace group

namespace {

Subgroup make_subgroup(Subgroup::Id id, std::vector<GroupElement> elems) {
    return Subgroup{id, std::move(elems)};
}

}  // namespace

const Subgroup& Subgroup::gamma() {
    static const Subgroup s = make_subgroup(
        Id::Gamma, {group::all_elements().begin(), group::all_elements().end()});
    return s;
}

const Subgroup& Subgroup::gamma_pi() {
    static const Subgroup s = make_subgroup(Id::GammaPi, {group::identity, group::pi});
    return s;
}

const Subgroup& Subgroup::gamma_nu() {
    static const Subgroup s =
        make_subgroup(Id::GammaNu, {group::identity, group::nu1, group::nu2, group::tau});
    return s;
}

const Subgroup& Subgroup::gamma_tau() {
    static const Subgroup s = make_subgroup(Id::GammaTau, {group::identity, group::tau});
    return s;
}

const Subgroup& Subgroup::gamma_pi_tau() {
    static const Subgroup s = make_subgroup(
        Id::GammaPiTau, {group::identity, group::pi, group::tau,
                         group::compose(group::pi, group::tau)});
    return s;
}

std::optional<Subgroup> Subgroup::by_name(std::string_view name) {
    if (name == "Gamma") return gamma();
    if (name == "GammaPi") return gamma_pi();
    if (name == "GammaNu") return gamma_nu();
    if (name == "GammaTau") return gamma_tau();
    if (name == "GammaPiTau") return gamma_pi_tau();
    return std::nullopt;
}

std::string Subgroup::name() const {
    switch (id) {
        case Id::Gamma: return "Gamma";
        case Id::GammaPi: return "GammaPi";
        case Id::GammaNu: return "GammaNu";
        case Id::GammaTau: return "GammaTau";
        case Id::GammaPiTau: return "GammaPiTau";
    }
    return "Gamma";
}

}  // namespace concordia
