#include "concordia/concordance.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "concordia/estimator.hpp"
#include "concordia/transform.hpp"

namespace concordia {

NotGammaInvariant::NotGammaInvariant(double max_deviation_, const GroupElement& witness_, double u1_,
                                     double u2_)
    : std::runtime_error("copula is not Gamma-invariant: |" + group::name_of(witness_) +
                         "(C) - C| = " + std::to_string(max_deviation_) + " at (" +
                         std::to_string(u1_) + ", " + std::to_string(u2_) + ")"),
      max_deviation(max_deviation_),
      witness(witness_),
      u1(u1_),
      u2(u2_) {}

ConcordanceGenerator make_generator(Copula a, std::string name, double tol) {
    InvarianceReport inv = check_invariance(a, Subgroup::gamma());
    if (!inv.invariant(tol))
        throw NotGammaInvariant(inv.max_deviation, inv.worst_element, inv.worst_u1, inv.worst_u2);

    double m_a = biconvex_form(Copula::M(), a).value;
    if (!(m_a > 0.25))
        throw std::invalid_argument("generator has [M,A] = " + std::to_string(m_a) +
                                    " <= 1/4; kappa_A undefined");
    int n_a = minimal_sample_size(a);
    if (name.empty()) name = a.describe();
    return ConcordanceGenerator(std::move(a), std::move(name), m_a, n_a);
}

ConcordanceGenerator spearman_generator() {
    return make_generator(Copula::Pi(), "spearman");
}

ConcordanceGenerator gini_generator() {
    return make_generator(Copula::mixture({{0.5, Copula::M()}, {0.5, Copula::W()}}), "gini");
}

ConcordanceGenerator interpolated_generator(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("interpolation weight q outside [0,1]");
    Copula gini_base = Copula::mixture({{0.5, Copula::M()}, {0.5, Copula::W()}});
    Copula a = q == 0.0   ? Copula::Pi()
               : q == 1.0 ? gini_base
                          : Copula::mixture({{1.0 - q, Copula::Pi()}, {q, gini_base}});
    char name[32];
    std::snprintf(name, sizeof(name), "eq:%g", q);
    return make_generator(std::move(a), name);
}

std::optional<ConcordanceGenerator> parse_generator(std::string_view spec) {
    if (spec == "spearman") return spearman_generator();
    if (spec == "gini") return gini_generator();
    if (spec.rfind("eq:", 0) == 0) {
        double q = 0.0;
        auto body = spec.substr(3);
        auto res = std::from_chars(body.data(), body.data() + body.size(), q);
        if (res.ec != std::errc() || res.ptr != body.data() + body.size()) return std::nullopt;
        if (!(q >= 0.0 && q <= 1.0)) return std::nullopt;
        return interpolated_generator(q);
    }
    return std::nullopt;
}

double kappa(const ConcordanceGenerator& g, const Copula& c) {
    double ca = biconvex_form(c, g.generator_copula()).value;
    return (ca - 0.25) / (g.m_constant() - 0.25);
}

AxiomReport check_moc_axioms(const ConcordanceGenerator& g, const std::vector<Copula>& corpus) {
    AxiomReport rep;
    rep.kappa_m = kappa(g, Copula::M());
    for (const Copula& c : corpus) {
        double k = kappa(g, c);
        double k_pi = kappa(g, c.transform_by(group::pi));
        rep.max_pi_dev = std::max(rep.max_pi_dev, std::fabs(k_pi - k));
        double k_nu1 = kappa(g, c.transform_by(group::nu1));
        rep.max_nu1_dev = std::max(rep.max_nu1_dev, std::fabs(k_nu1 + k));
        double sum = 0.0;
        for (const GroupElement& nu : Subgroup::gamma_nu().elements)
            sum += kappa(g, c.transform_by(nu));
        rep.max_nu_sum_dev = std::max(rep.max_nu_sum_dev, std::fabs(sum));
    }
    return rep;
}

}  // namespace concordia
