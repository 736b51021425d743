#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "concordia/concordance.hpp"
#include "concordia/copula.hpp"
#include "concordia/ranks.hpp"
#include "concordia/rational.hpp"

namespace concordia {

struct SampleTooSmall : std::runtime_error {
    SampleTooSmall(int n, int n_required);
    int n;
    int n_required;
};

struct GeneratorTooSingular : std::runtime_error {
    explicit GeneratorTooSingular(int cap);
    int cap;
};

// The step function (1/n) * #{k : U_k <= u componentwise}.  Not a copula
// (it is not continuous), but the estimator's integral against Q^A reduces
// to a plain average of A over the rank pairs.
class EmpiricalCopula {
public:
    explicit EmpiricalCopula(RelativeRankMatrix u) : u_(std::move(u)) {}

    double operator()(double u1, double u2) const;
    int n() const { return u_.n; }
    const RelativeRankMatrix& ranks() const { return u_; }

private:
    RelativeRankMatrix u_;
};

// <C,A>_(n) = (1/n) sum A(U_{1,k}, U_{2,k}).
double empirical_biconvex(const RelativeRankMatrix& u, const Copula& a);

// <M,A>_(n) and <W,A>_(n): diagonal and antidiagonal rank sums.
double comonotone_form(const Copula& a, int n);
double countermonotone_form(const Copula& a, int n);

// Exact-rational counterparts.  Available when A has a rational closed form
// at rank points (M, W, Pi, E, and mixtures/transforms with dyadic weights);
// grids and irrational mixture weights fall back to floating point.
std::optional<Rat> rational_copula_value(const Copula& a, long long j, long long k, long long np1);
std::optional<Rat> empirical_biconvex_exact(const RelativeRankMatrix& u, const Copula& a);
std::optional<Rat> comonotone_form_exact(const Copula& a, int n);
std::optional<Rat> countermonotone_form_exact(const Copula& a, int n);
std::optional<Rat> kappa_hat_exact(const RelativeRankMatrix& u, const ConcordanceGenerator& g);

// Smallest n <= n_max with Q^A((1/(n+1), n/(n+1)]^2) > 0; from that size on
// the estimator's denominator is strictly positive.  Throws
// GeneratorTooSingular if no such n is found below the cap.
int minimal_sample_size(const Copula& a, int n_max = 10000);

struct EstimateReport {
    int n = 0;
    std::string generator;
    double c_form = 0.0;
    double m_form = 0.0;
    double w_form = 0.0;
    double kappa_hat = 0.0;
    int n_a = 0;
    bool valid = false;
};

// Ranks the sample and evaluates all three forms and the plug-in estimator.
// Throws SampleTooSmall when n < n_A.
EstimateReport estimate(const Sample& s, const ConcordanceGenerator& g);
EstimateReport estimate_from_ranks(const RelativeRankMatrix& u, const ConcordanceGenerator& g);

// Sample version of Spearman's rho: 1 - 6 sum (R1-R2)^2 / (n(n^2-1)).
Rat spearman_sample_form(const RelativeRankMatrix& u);

// Sample version of Gini's gamma.  Computes the relative-rank form and the
// absolute-rank form ( sum|R1+R2-(n+1)| - sum|R1-R2| ) / floor(n^2/2) and
// checks that they agree exactly before returning.
double gini_sample_form(const RelativeRankMatrix& u);
Rat gini_u_form_exact(const RelativeRankMatrix& u);
Rat gini_rank_form_exact(const RelativeRankMatrix& u);

// The swap walk that pushes a rank configuration to the comonotone one: at
// step p the pair holding second-coordinate rank n+1-p swaps first
// coordinates with the pair holding first-coordinate rank n+1-p.  Returns
// the n+1 configurations from start to comonotone; along it the average of
// any copula over the pairs is nondecreasing.
std::vector<RelativeRankMatrix> rearrange_toward_comonotone(const RelativeRankMatrix& u);

// Mirror walk (flip the first coordinate, push comonotone, flip back); ends
// at the countermonotone configuration with nonincreasing averages.
std::vector<RelativeRankMatrix> rearrange_toward_countermonotone(const RelativeRankMatrix& u);

}  // namespace concordia
