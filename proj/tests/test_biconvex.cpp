#include <cmath>

#include "doctest.h"

#include "concordia/biconvex.hpp"
#include "concordia/copula.hpp"
#include "concordia/rng.hpp"
#include "concordia/transform.hpp"
#include "test_util.hpp"

using namespace concordia;

namespace {

Copula gini_base() { return Copula::mixture({{0.5, Copula::M()}, {0.5, Copula::W()}}); }

}  // namespace

TEST_CASE("closed-form constants on the exact paths") {
    auto mm = biconvex_form(Copula::M(), Copula::M());
    CHECK(mm.value == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mm.method == BiconvexResult::Method::Exact);
    CHECK(mm.est_error == 0.0);

    auto pp = biconvex_form(Copula::Pi(), Copula::Pi());
    CHECK(pp.value == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(pp.method == BiconvexResult::Method::ExactGrid);

    CHECK(biconvex_form(Copula::M(), Copula::Pi()).value ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(biconvex_form(Copula::M(), gini_base()).value == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(biconvex_form(Copula::W(), Copula::Pi()).value ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("the degenerate pair: [W,W] = 0") {
    // A transform-symmetry argument would suggest [W,W] = [M,M]; it is false.
    // The form is order preserving with minimum 0, attained here.
    CHECK(biconvex_form(Copula::W(), Copula::W()).value == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("grid self-form of the discretized M has the closed form 1/2 - 1/(4m)") {
    for (int m : {1, 2, 8, 32, 128}) {
        Copula g = Copula::grid(Copula::M().discretize(m));
        auto r = biconvex_form(g, g);
        CHECK(r.method == BiconvexResult::Method::ExactGrid);
        CHECK(r.value == doctest::Approx(0.5 - 0.25 / m).epsilon(1e-13));
    }
}

TEST_CASE("Monte Carlo oracle agrees with the deterministic paths") {
    auto check_oracle = [](const Copula& c, const GridCopula& d) {
        double exact = biconvex_form(c, Copula::grid(d)).value;
        auto [mc, se] = biconvex_oracle(c, d, 1000000, 12345);
        CHECK(std::fabs(mc - exact) <= 3.0 * se + 1e-9);
    };
    check_oracle(Copula::M(), Copula::Pi().discretize(1));     // ~ 1/3
    check_oracle(Copula::Pi(), Copula::M().discretize(256));   // ~ 1/3
    check_oracle(Copula::W(), Copula::W().discretize(256));    // ~ 0 + O(1/m)
    Rng rng(61);
    check_oracle(Copula::E(), test_util::random_grid(16, rng));

    // the discretized W measure against W itself is already close to the
    // exact [W,W] = 0
    CHECK(biconvex_form(Copula::W(), Copula::grid(Copula::W().discretize(256))).value <= 2e-3);
}

TEST_CASE("the form is symmetric in the bivariate case") {
    Rng rng(67);
    std::vector<Copula> corpus = {Copula::M(),  Copula::W(),
                                  Copula::Pi(), Copula::E(),
                                  gini_base(),  test_util::random_grid_copula(16, rng),
                                  test_util::random_grid_copula(9, rng)};
    for (const Copula& c : corpus)
        for (const Copula& d : corpus) {
            double cd = biconvex_form(c, d).value;
            double dc = biconvex_form(d, c).value;
            CHECK(std::fabs(cd - dc) <= 1e-6);
        }
}

TEST_CASE("biconvexity: linear in each slot under convex mixtures") {
    Rng rng(71);
    Copula c1 = test_util::random_grid_copula(8, rng);
    Copula c2 = Copula::E();
    Copula d = test_util::random_grid_copula(12, rng);
    for (double q : {0.125, 0.5, 0.73}) {
        Copula mix = Copula::mixture({{1.0 - q, c1}, {q, c2}});
        double lhs = biconvex_form(mix, d).value;
        double rhs = (1.0 - q) * biconvex_form(c1, d).value + q * biconvex_form(c2, d).value;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

        double lhs2 = biconvex_form(d, mix).value;
        double rhs2 = (1.0 - q) * biconvex_form(d, c1).value + q * biconvex_form(d, c2).value;
        CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-10));
    }
}

TEST_CASE("monotone in the function slot under pointwise order") {
    Rng rng(73);
    Copula g = test_util::random_grid_copula(10, rng);
    Copula up = Copula::mixture({{0.4, g}, {0.6, Copula::M()}});
    std::vector<std::pair<Copula, Copula>> ordered = {
        {Copula::W(), g}, {g, up}, {up, Copula::M()}, {Copula::W(), Copula::Pi()}};
    for (const Copula& d : {Copula::Pi(), gini_base(), g}) {
        for (const auto& [lo, hi] : ordered)
            CHECK(biconvex_form(lo, d).value <= biconvex_form(hi, d).value + 1e-10);
    }
}

TEST_CASE("reflection-invariant pairs integrate to 1/4") {
    Rng rng(79);
    Copula sym_grid = symmetrize(test_util::random_grid_copula(8, rng), Subgroup::gamma_nu());
    Copula e_blend = Copula::mixture({{0.5, Copula::Pi()}, {0.5, Copula::E()}});
    std::vector<Copula> invariant = {Copula::Pi(), gini_base(), Copula::E(), sym_grid, e_blend};
    for (const Copula& c : invariant)
        for (const Copula& d : invariant) {
            auto r = biconvex_form(c, d);
            CHECK(r.value == doctest::Approx(0.25).epsilon(1e-6));
        }
}

TEST_CASE("values stay inside [0, 1/2] across the corpus") {
    Rng rng(83);
    std::vector<Copula> corpus = test_util::builtin_corpus();
    corpus.push_back(test_util::random_grid_copula(16, rng));
    corpus.push_back(gini_base());
    for (const Copula& c : corpus)
        for (const Copula& d : corpus) {
            auto r = biconvex_form(c, d);
            CHECK(r.value >= -1e-12);
            CHECK(r.value <= 0.5 + 1e-12);
        }
}

TEST_CASE("fallback path reports its resolution and error estimate") {
    auto r = biconvex_form(Copula::E(), Copula::E());
    CHECK(r.method == BiconvexResult::Method::Discretized);
    CHECK(r.resolution_used >= 64);
    CHECK(r.value == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(r.est_error < 1e-8);

    // transformed E still lands on the fallback (support never assumed)
    auto t = biconvex_form(Copula::E().transform_by(group::pi), Copula::E());
    CHECK(t.method == BiconvexResult::Method::Discretized);
    CHECK(t.value == doctest::Approx(0.25).epsilon(1e-7));
}

TEST_CASE("the grid overlay and the decomposition route agree") {
    // Two independent exact implementations of the same integral: the
    // overlay cell sum and mass-weighted box averages of the function side.
    Rng rng(257);
    for (auto [m1, m2] : {std::pair{6, 10}, std::pair{5, 8}, std::pair{12, 12}}) {
        Copula c = test_util::random_grid_copula(m1, rng);
        Copula d = test_util::random_grid_copula(m2, rng);
        auto overlay = biconvex_form(c, d);
        REQUIRE(overlay.method == BiconvexResult::Method::ExactGrid);
        auto comps = d.measure_components();
        REQUIRE(comps.has_value());
        double decomp = 0.0;
        for (const MassComponent& mc : *comps) {
            REQUIRE(mc.kind == MassComponent::Kind::Box);
            decomp += mc.mass * box_average(c, mc.x0, mc.y0, mc.x1, mc.y1);
        }
        CHECK(overlay.value == doctest::Approx(decomp).epsilon(1e-12));
    }
}

TEST_CASE("starting the fallback at the cap leaves no room to converge") {
    // one level cannot establish convergence; the error carries the estimate
    try {
        biconvex_form(Copula::E(), Copula::E(), 4096);
        FAIL("expected BiconvexNonConvergence");
    } catch (const BiconvexNonConvergence& e) {
        CHECK(e.resolution == 4096);
        CHECK(e.best_value == doctest::Approx(0.25).epsilon(1e-6));
    }
    CHECK_THROWS_AS(biconvex_form(Copula::E(), Copula::E(), 0), std::invalid_argument);
}

TEST_CASE("piecewise integration primitives") {
    // averages along the main diagonal: Pi(t,t) = t^2, M(t,t) = t
    CHECK(segment_average(Copula::Pi(), 0, 0, 1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(segment_average(Copula::M(), 0, 0, 1, 1) == doctest::Approx(0.5).epsilon(1e-14));
    // antidiagonal: M(t,1-t) = min(t,1-t) has a kink at 1/2
    CHECK(segment_average(Copula::M(), 0, 1, 1, 0) == doctest::Approx(0.25).epsilon(1e-14));
    // area averages
    CHECK(box_average(Copula::M(), 0, 0, 1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(box_average(Copula::W(), 0, 0, 1, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(box_average(Copula::Pi(), 0.5, 0.5, 1, 1) == doctest::Approx(0.5625).epsilon(1e-14));
}
