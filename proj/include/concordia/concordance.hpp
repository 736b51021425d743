#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "concordia/biconvex.hpp"
#include "concordia/copula.hpp"
#include "concordia/group.hpp"

namespace concordia {

// Raised when a candidate generator fails the Gamma-invariance check and the
// resulting kappa would violate the concordance axioms.
struct NotGammaInvariant : std::runtime_error {
    NotGammaInvariant(double max_deviation, const GroupElement& witness, double u1, double u2);
    double max_deviation;
    GroupElement witness;
    double u1, u2;
};

// A verified Gamma-invariant copula A together with the cached constants the
// measure kappa_A needs: [M,A] and the minimal valid sample size n_A.
class ConcordanceGenerator {
public:
    const Copula& generator_copula() const { return a_; }
    const std::string& name() const { return name_; }
    double m_constant() const { return m_a_; }  // [M, A], always > 1/4
    int minimal_n() const { return n_a_; }
    bool invariance_checked() const { return true; }

private:
    friend ConcordanceGenerator make_generator(Copula a, std::string name, double tol);
    ConcordanceGenerator(Copula a, std::string name, double m_a, int n_a)
        : a_(std::move(a)), name_(std::move(name)), m_a_(m_a), n_a_(n_a) {}

    Copula a_;
    std::string name_;
    double m_a_;
    int n_a_;
};

// Verifies Gamma-invariance (throws NotGammaInvariant otherwise), computes
// [M,A] and n_A.
ConcordanceGenerator make_generator(Copula a, std::string name = "", double tol = 1e-10);

ConcordanceGenerator spearman_generator();  // A = Pi
ConcordanceGenerator gini_generator();      // A = (M+W)/2

// A = (1-q) Pi + q (M+W)/2 for q in [0,1].
ConcordanceGenerator interpolated_generator(double q);

// "spearman", "gini", or "eq:<q>".
std::optional<ConcordanceGenerator> parse_generator(std::string_view spec);

// kappa_A[C] = ([C,A] - 1/4) / ([M,A] - 1/4).
double kappa(const ConcordanceGenerator& g, const Copula& c);

// Worst deviations from the bivariate measure-of-concordance axioms over a
// corpus of copulas.
struct AxiomReport {
    double kappa_m = 0.0;        // kappa[M], axiom value 1
    double max_pi_dev = 0.0;     // |kappa[pi(C)] - kappa[C]|
    double max_nu1_dev = 0.0;    // |kappa[nu1(C)] + kappa[C]|
    double max_nu_sum_dev = 0.0; // |sum over Gamma^nu of kappa[nu(C)]|

    bool pass(double tol = 1e-8) const {
        return std::fabs(kappa_m - 1.0) <= tol && max_pi_dev <= tol && max_nu1_dev <= tol &&
               max_nu_sum_dev <= tol;
    }
};

AxiomReport check_moc_axioms(const ConcordanceGenerator& g, const std::vector<Copula>& corpus);

}  // namespace concordia
