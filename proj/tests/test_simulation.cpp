#include <cmath>

#include "doctest.h"

#include "concordia/concordance.hpp"
#include "concordia/estimator.hpp"
#include "concordia/io.hpp"
#include "concordia/simulation.hpp"
#include "concordia/transform.hpp"
#include "test_util.hpp"

using namespace concordia;

TEST_CASE("sampling is deterministic in the seed") {
    Rng rng(223);
    Copula g = test_util::random_grid_copula(16, rng);
    for (const Copula& c : {Copula::M(), Copula::Pi(), g}) {
        Sample a = sample_copula(c, 100, 42);
        Sample b = sample_copula(c, 100, 42);
        CHECK(a.rows[0] == b.rows[0]);
        CHECK(a.rows[1] == b.rows[1]);
        Sample other = sample_copula(c, 100, 43);
        CHECK(a.rows[0] != other.rows[0]);
    }
}

TEST_CASE("comonotone samples have identical rank rows") {
    Sample s = sample_copula(Copula::M(), 25, 7);
    RelativeRankMatrix u = relative_ranks(s);
    for (int k = 0; k < u.n; ++k) CHECK(u.ranks[0][k] == u.ranks[1][k]);

    Sample w = sample_copula(Copula::W(), 25, 7);
    RelativeRankMatrix uw = relative_ranks(w);
    for (int k = 0; k < uw.n; ++k) CHECK(uw.ranks[1][k] == uw.n + 1 - uw.ranks[0][k]);
}

TEST_CASE("independent samples estimate near zero") {
    Sample s = sample_copula(Copula::Pi(), 100000, 1234);
    double k = estimate(s, spearman_generator()).kappa_hat;
    CHECK(std::fabs(k) <= 0.02);
}

TEST_CASE("grid and mixture samples stay in the unit square and honor cell masses") {
    Rng rng(227);
    GridCopula g = test_util::random_grid(4, rng);
    Sample s = sample_copula(Copula::grid(g), 40000, 99);
    std::array<std::array<int, 4>, 4> counts{};
    for (int k = 0; k < 40000; ++k) {
        double u = s.rows[0][k], v = s.rows[1][k];
        REQUIRE(u >= 0.0);
        REQUIRE(u <= 1.0);
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
        counts[std::min(3, static_cast<int>(u * 4))][std::min(3, static_cast<int>(v * 4))]++;
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double freq = counts[i][j] / 40000.0;
            double p = g.cell_mass(i, j);
            CHECK(std::fabs(freq - p) <= 3.0 * std::sqrt(p * (1 - p) / 40000.0) + 1e-3);
        }

    Sample mix = sample_copula(Copula::mixture({{0.5, Copula::M()}, {0.5, Copula::W()}}), 1000, 3);
    int diag = 0, anti = 0;
    for (int k = 0; k < 1000; ++k) {
        if (mix.rows[0][k] == mix.rows[1][k]) ++diag;
        if (std::fabs(mix.rows[0][k] + mix.rows[1][k] - 1.0) < 1e-12) ++anti;
    }
    // component choice is Bernoulli(1/2); both supports must show up
    CHECK(diag + anti >= 1000);
    CHECK(diag > 400);
    CHECK(diag < 600);
}

TEST_CASE("unsupported kinds must be materialized first") {
    CHECK(!sampling_supported(Copula::E()));
    CHECK(!sampling_supported(Copula::M().transform_by(group::nu1)));
    CHECK(sampling_supported(Copula::mixture({{0.5, Copula::M()}, {0.5, Copula::Pi()}})));
    CHECK(!sampling_supported(Copula::mixture({{0.5, Copula::M()}, {0.5, Copula::E()}})));
    CHECK_THROWS_AS(sample_copula(Copula::E(), 10, 1), SamplingUnsupported);
    // materialized E samples fine
    CHECK_NOTHROW(sample_copula(Copula::grid(Copula::E().discretize(64)), 10, 1));
}

namespace {

StudyConfig small_config(const Copula& target, const nlohmann::ordered_json& echo) {
    StudyConfig cfg{spearman_generator(), "spearman", target, echo, {50, 800}, 30, 2024, 64};
    return cfg;
}

}  // namespace

TEST_CASE("study reports are reproducible and errors decay with n") {
    Copula target = Copula::grid(Copula::M().discretize(16));
    StudyConfig cfg = small_config(target, copula_to_json(target));
    nlohmann::ordered_json rep1 = run_study(cfg);
    nlohmann::ordered_json rep2 = run_study(cfg);
    CHECK(rep1.dump() == rep2.dump());  // byte-identical

    CHECK(rep1["schema"] == "concordia.study.v1");
    CHECK(rep1["sizes"].size() == 2);
    double err_small = rep1["sizes"][0]["abs_error"].get<double>();
    double err_large = rep1["sizes"][1]["abs_error"].get<double>();
    CHECK(err_large < err_small);

    double exact = rep1["exact_kappa"].get<double>();
    CHECK(exact == doctest::Approx(kappa(spearman_generator(), target)).epsilon(1e-14));
    CHECK(exact < 1.0);
    CHECK(exact > 0.9);

    // same decay for the other studied generator
    StudyConfig gcfg{gini_generator(), "gini", target, copula_to_json(target), {50, 800}, 30,
                     2024, 64};
    nlohmann::ordered_json grep = run_study(gcfg);
    CHECK(grep["sizes"][1]["abs_error"].get<double>() <
          grep["sizes"][0]["abs_error"].get<double>());
}

TEST_CASE("study round trip: recorded estimates match regenerated samples exactly") {
    Copula target = Copula::grid(Copula::M().discretize(16));
    StudyConfig cfg = small_config(target, copula_to_json(target));
    nlohmann::ordered_json rep = run_study(cfg);
    auto gen = spearman_generator();
    for (const auto& row : rep["sizes"]) {
        int n = row["n"].get<int>();
        for (size_t r = 0; r < row["kappa_hat"].size(); ++r) {
            Sample s = sample_copula(target, n, cfg.seed + r);
            double recomputed = estimate(s, gen).kappa_hat;
            CHECK(recomputed == row["kappa_hat"][r].get<double>());
        }
    }
}

TEST_CASE("study materializes unsupported targets and records per-replication errors") {
    // E requires materialization; sizes below n_A of the generator produce
    // recorded errors without aborting the run.
    StudyConfig cfg{make_generator(Copula::E(), "E"), "E", Copula::Pi(), "Pi", {3, 10}, 5, 7, 64};
    nlohmann::ordered_json rep = run_study(cfg);
    CHECK(rep["sizes"][0]["replications_ok"] == 0);
    CHECK(rep["sizes"][0]["errors"].size() == 5);
    CHECK(rep["sizes"][1]["replications_ok"] == 5);

    StudyConfig cfg2{spearman_generator(), "spearman", Copula::E(), "E", {200}, 4, 11, 64};
    nlohmann::ordered_json rep2 = run_study(cfg2);
    CHECK(rep2["materialized"] == true);
    CHECK(rep2["exact_kappa"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("reflection-symmetrized targets concentrate the estimate near zero") {
    Rng rng(229);
    Copula sym = symmetrize(test_util::random_grid_copula(8, rng), Subgroup::gamma_nu());
    StudyConfig cfg{gini_generator(), "gini", sym, "sym-grid", {400}, 40, 555, 64};
    nlohmann::ordered_json rep = run_study(cfg);
    double mean = rep["sizes"][0]["mean"].get<double>();
    double sd = rep["sizes"][0]["sd"].get<double>();
    CHECK(std::fabs(mean) <= 3.0 * sd / std::sqrt(40.0) + 0.005);
}
