#include "concordia/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace concordia {

SampleTooSmall::SampleTooSmall(int n_, int n_required_)
    : std::runtime_error("sample size " + std::to_string(n_) + " below the minimal size n_A = " +
                         std::to_string(n_required_) + " for this generator"),
      n(n_),
      n_required(n_required_) {}

GeneratorTooSingular::GeneratorTooSingular(int cap_)
    : std::runtime_error("no n <= " + std::to_string(cap_) +
                         " gives the central square positive generator mass"),
      cap(cap_) {}

double EmpiricalCopula::operator()(double u1, double u2) const {
    const double np1 = u_.n + 1;
    int count = 0;
    for (int k = 0; k < u_.n; ++k) {
        if (u_.ranks[0][k] / np1 <= u1 && u_.ranks[1][k] / np1 <= u2) ++count;
    }
    return static_cast<double>(count) / u_.n;
}

double empirical_biconvex(const RelativeRankMatrix& u, const Copula& a) {
    const double np1 = u.n + 1;
    double sum = 0.0;
    for (int k = 0; k < u.n; ++k) sum += a(u.ranks[0][k] / np1, u.ranks[1][k] / np1);
    return sum / u.n;
}

double comonotone_form(const Copula& a, int n) {
    const double np1 = n + 1;
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += a(k / np1, k / np1);
    return sum / n;
}

double countermonotone_form(const Copula& a, int n) {
    const double np1 = n + 1;
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += a(k / np1, (n + 1 - k) / np1);
    return sum / n;
}

std::optional<Rat> rational_copula_value(const Copula& a, long long j, long long k, long long np1) {
    switch (a.kind()) {
        case Copula::Kind::M:
            return Rat(std::min(j, k), np1);
        case Copula::Kind::W:
            return Rat(std::max(j + k - np1, 0LL), np1);
        case Copula::Kind::Pi:
            return Rat(j, np1) * Rat(k, np1);
        case Copula::Kind::E: {
            // branch tests in integers: |u1-u2| > 1/2  <=>  2|j-k| > n+1
            if (2 * std::llabs(j - k) > np1) return Rat(std::min(j, k), np1);
            if (2 * std::llabs(j + k - np1) > np1) return Rat(std::max(j + k - np1, 0LL), np1);
            return Rat(j + k, 2 * np1) - Rat(1, 4);
        }
        case Copula::Kind::Grid:
            return std::nullopt;
        case Copula::Kind::Mixture: {
            Rat acc(0);
            for (const auto& [w, c] : a.parts()) {
                auto rw = rat_from_double(w);
                if (!rw) return std::nullopt;
                if (rw->num == 0) continue;
                auto rv = rational_copula_value(c, j, k, np1);
                if (!rv) return std::nullopt;
                acc = acc + *rw * *rv;
            }
            return acc;
        }
        case Copula::Kind::Transformed: {
            const GroupElement& g = a.transform_element();
            long long w1 = g.swap ? k : j;
            long long w2 = g.swap ? j : k;
            const Copula& base = a.transform_base();
            if (!g.flip1 && !g.flip2) return rational_copula_value(base, w1, w2, np1);
            if (g.flip1 && !g.flip2) {
                auto v = rational_copula_value(base, np1 - w1, w2, np1);
                if (!v) return std::nullopt;
                return Rat(w2, np1) - *v;
            }
            if (!g.flip1 && g.flip2) {
                auto v = rational_copula_value(base, w1, np1 - w2, np1);
                if (!v) return std::nullopt;
                return Rat(w1, np1) - *v;
            }
            auto v = rational_copula_value(base, np1 - w1, np1 - w2, np1);
            if (!v) return std::nullopt;
            return Rat(w1 + w2 - np1, np1) + *v;
        }
    }
    return std::nullopt;
}

std::optional<Rat> empirical_biconvex_exact(const RelativeRankMatrix& u, const Copula& a) {
    const long long np1 = u.n + 1;
    Rat acc(0);
    for (int k = 0; k < u.n; ++k) {
        auto v = rational_copula_value(a, u.ranks[0][k], u.ranks[1][k], np1);
        if (!v) return std::nullopt;
        acc = acc + *v;
    }
    return acc / Rat(u.n);
}

std::optional<Rat> comonotone_form_exact(const Copula& a, int n) {
    const long long np1 = n + 1;
    Rat acc(0);
    for (long long k = 1; k <= n; ++k) {
        auto v = rational_copula_value(a, k, k, np1);
        if (!v) return std::nullopt;
        acc = acc + *v;
    }
    return acc / Rat(n);
}

std::optional<Rat> countermonotone_form_exact(const Copula& a, int n) {
    const long long np1 = n + 1;
    Rat acc(0);
    for (long long k = 1; k <= n; ++k) {
        auto v = rational_copula_value(a, k, np1 - k, np1);
        if (!v) return std::nullopt;
        acc = acc + *v;
    }
    return acc / Rat(n);
}

std::optional<Rat> kappa_hat_exact(const RelativeRankMatrix& u, const ConcordanceGenerator& g) {
    auto c = empirical_biconvex_exact(u, g.generator_copula());
    if (!c) return std::nullopt;
    auto m = comonotone_form_exact(g.generator_copula(), u.n);
    if (!m) return std::nullopt;
    Rat quarter(1, 4);
    if (!(*m > quarter)) throw SampleTooSmall(u.n, g.minimal_n());
    return (*c - quarter) / (*m - quarter);
}

int minimal_sample_size(const Copula& a, int n_max) {
    for (int n = 2; n <= n_max; ++n) {
        double lo = 1.0 / (n + 1);
        double hi = static_cast<double>(n) / (n + 1);
        if (a.rect_mass(lo, hi, lo, hi) > 1e-12) return n;
    }
    throw GeneratorTooSingular(n_max);
}

EstimateReport estimate_from_ranks(const RelativeRankMatrix& u, const ConcordanceGenerator& g) {
    EstimateReport rep;
    rep.n = u.n;
    rep.generator = g.name();
    rep.n_a = g.minimal_n();
    if (u.n < rep.n_a) throw SampleTooSmall(u.n, rep.n_a);
    rep.valid = true;

    const Copula& a = g.generator_copula();
    // The exact path's worst intermediate products grow like n^5; keep a
    // wide margin below the 64-bit limit and fall back to doubles beyond.
    std::optional<Rat> c_exact;
    if (u.n <= 1000) c_exact = empirical_biconvex_exact(u, a);
    if (c_exact) {
        Rat m = *comonotone_form_exact(a, u.n);
        Rat w = *countermonotone_form_exact(a, u.n);
        Rat quarter(1, 4);
        if (!(m > quarter)) throw SampleTooSmall(u.n, rep.n_a);
        rep.c_form = c_exact->to_double();
        rep.m_form = m.to_double();
        rep.w_form = w.to_double();
        rep.kappa_hat = ((*c_exact - quarter) / (m - quarter)).to_double();
        return rep;
    }

    rep.c_form = empirical_biconvex(u, a);
    rep.m_form = comonotone_form(a, u.n);
    rep.w_form = countermonotone_form(a, u.n);
    if (!(rep.m_form > 0.25)) throw SampleTooSmall(u.n, rep.n_a);
    rep.kappa_hat = (rep.c_form - 0.25) / (rep.m_form - 0.25);
    return rep;
}

EstimateReport estimate(const Sample& s, const ConcordanceGenerator& g) {
    return estimate_from_ranks(relative_ranks(s), g);
}

Rat spearman_sample_form(const RelativeRankMatrix& u) {
    const long long n = u.n;
    long long sum_sq = 0;
    for (int k = 0; k < u.n; ++k) {
        long long d = u.ranks[0][k] - u.ranks[1][k];
        sum_sq += d * d;
    }
    return Rat(1) - Rat(6 * sum_sq, n * (n * n - 1));
}

Rat gini_u_form_exact(const RelativeRankMatrix& u) {
    // (n+1)/floor(n^2/2) * ( 2 sum min(U1,U2) + 2 sum max(U1+U2-1, 0) - n )
    const long long n = u.n;
    const long long np1 = n + 1;
    long long acc = 0;  // (n+1) * (2 sum min U + 2 sum max(U1+U2-1,0)) is integral
    for (int k = 0; k < u.n; ++k) {
        long long r1 = u.ranks[0][k], r2 = u.ranks[1][k];
        acc += 2 * std::min(r1, r2) + 2 * std::max(r1 + r2 - np1, 0LL);
    }
    return Rat(acc - n * np1, (n * n) / 2);
}

Rat gini_rank_form_exact(const RelativeRankMatrix& u) {
    const long long n = u.n;
    const long long np1 = n + 1;
    long long acc = 0;
    for (int k = 0; k < u.n; ++k) {
        long long r1 = u.ranks[0][k], r2 = u.ranks[1][k];
        acc += std::llabs(r1 + r2 - np1) - std::llabs(r1 - r2);
    }
    return Rat(acc, (n * n) / 2);
}

double gini_sample_form(const RelativeRankMatrix& u) {
    Rat a = gini_u_form_exact(u);
    Rat b = gini_rank_form_exact(u);
    if (!(a == b)) throw std::logic_error("gini sample forms disagree: " + a.str() + " vs " + b.str());
    return a.to_double();
}

namespace {

// Index of the pair carrying rank value v in the given coordinate.
int find_rank(const std::vector<int>& row, int v) {
    for (size_t k = 0; k < row.size(); ++k)
        if (row[k] == v) return static_cast<int>(k);
    throw std::logic_error("rank value missing from permutation");
}

}  // namespace

std::vector<RelativeRankMatrix> rearrange_toward_comonotone(const RelativeRankMatrix& u) {
    std::vector<RelativeRankMatrix> traj;
    traj.reserve(u.n + 1);
    traj.push_back(u);
    std::vector<int> r1 = u.ranks[0];
    std::vector<int> r2 = u.ranks[1];
    for (int p = 1; p <= u.n; ++p) {
        const int v = u.n + 1 - p;
        int l = find_rank(r2, v);
        if (r1[l] != v) {
            int m = find_rank(r1, v);
            std::swap(r1[l], r1[m]);
        }
        traj.emplace_back(r1, r2);
    }
    return traj;
}

std::vector<RelativeRankMatrix> rearrange_toward_countermonotone(const RelativeRankMatrix& u) {
    const int np1 = u.n + 1;
    std::vector<int> flipped(u.ranks[0].size());
    for (size_t k = 0; k < flipped.size(); ++k) flipped[k] = np1 - u.ranks[0][k];
    auto traj = rearrange_toward_comonotone(RelativeRankMatrix(flipped, u.ranks[1]));
    for (auto& step : traj) {
        std::vector<int> unflipped(step.ranks[0].size());
        for (size_t k = 0; k < unflipped.size(); ++k) unflipped[k] = np1 - step.ranks[0][k];
        step = RelativeRankMatrix(unflipped, step.ranks[1]);
    }
    return traj;
}

}  // namespace concordia
