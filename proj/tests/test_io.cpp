#include <cstdio>
#include <fstream>

#include "doctest.h"

#include "concordia/io.hpp"
#include "concordia/rng.hpp"
#include "concordia/transform.hpp"
#include "schema_check.hpp"
#include "test_util.hpp"

using namespace concordia;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("/tmp/concordia_io_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("CSV ingestion: plain, header, blank lines, CRLF") {
    TempFile plain("a.csv", "1,2\n3,1\n2,3\n");
    Sample s = read_sample_csv(plain.path);
    CHECK(s.n() == 3);
    CHECK(s.rows[0] == std::vector<double>{1, 3, 2});

    TempFile header("b.csv", "x,y\r\n1.5,2.5\r\n3.5,0.5\r\n\r\n");
    Sample h = read_sample_csv(header.path);
    CHECK(h.n() == 2);
    CHECK(h.rows[1] == std::vector<double>{2.5, 0.5});
}

TEST_CASE("CSV errors cite the offending line") {
    TempFile bad("c.csv", "1,2\n2,3\n4,5\n6,7\n8,9\n10,11\n12,oops\n");
    try {
        read_sample_csv(bad.path);
        FAIL("expected CsvError");
    } catch (const CsvError& e) {
        CHECK(e.line == 7);
        CHECK(std::string(e.what()).find("line 7") != std::string::npos);
        CHECK(std::string(e.what()).find("oops") != std::string::npos);
    }

    TempFile wide("d.csv", "1,2,3\n4,5,6\n");
    CHECK_THROWS_AS(read_sample_csv(wide.path), CsvError);

    TempFile tiny("e.csv", "x,y\n1,2\n");
    CHECK_THROWS_AS(read_sample_csv(tiny.path), CsvError);

    CHECK_THROWS_AS(read_sample_csv("/nonexistent/file.csv"), std::runtime_error);
}

TEST_CASE("copula specs round-trip through JSON") {
    Rng rng(233);
    Copula grid = test_util::random_grid_copula(6, rng);
    Copula mix = Copula::mixture({{0.25, Copula::M()}, {0.75, grid}});
    Copula trans = Copula::E().transform_by(group::pi);
    for (const Copula& c : {Copula::M(), Copula::W(), Copula::Pi(), Copula::E(), grid, mix, trans}) {
        nlohmann::ordered_json j = copula_to_json(c);
        Copula back = copula_from_json(j);
        for (int i = 0; i <= 20; ++i)
            for (int k = 0; k <= 20; ++k) {
                double u1 = i / 20.0, u2 = k / 20.0;
                CHECK(back(u1, u2) == doctest::Approx(c(u1, u2)).epsilon(1e-14));
            }
        std::string why;
        CHECK_MESSAGE(
            schema_check::conforms(nlohmann::json::parse(j.dump()),
                                   schema_check::load_schema("copula_spec.schema.json"), why),
            why);
    }
}

TEST_CASE("copula spec validation errors") {
    CHECK_THROWS_AS(copula_from_json(nlohmann::json{{"kind", "gaussian"}}), std::invalid_argument);
    CHECK_THROWS_AS(copula_from_json(nlohmann::json{{"kind", "grid"}}), std::invalid_argument);
    CHECK_THROWS_AS(copula_from_json(nlohmann::json::parse(
                        R"({"kind":"grid","mass":[[0.5,0.0],[0.0,0.4]]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(copula_from_json(nlohmann::json::parse(
                        R"({"kind":"transformed","element":"sigma","copula":{"kind":"M"}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_copula_spec("NotABuiltin"), std::runtime_error);
}

TEST_CASE("builtin names and spec files load") {
    CHECK(load_copula_spec("M").kind() == Copula::Kind::M);
    CHECK(load_copula_spec("E").kind() == Copula::Kind::E);
    TempFile spec("mix.json", R"({"kind":"mixture","components":[
        {"weight":0.5,"copula":{"kind":"M"}},{"weight":0.5,"copula":{"kind":"Pi"}}]})");
    Copula c = load_copula_spec(spec.path);
    CHECK(c.kind() == Copula::Kind::Mixture);
    CHECK(c(0.5, 0.5) == doctest::Approx(0.375));
}

TEST_CASE("generator resolution accepts builtin specs and invariant spec files") {
    CHECK(resolve_generator("spearman").name() == "spearman");
    CHECK(resolve_generator("eq:0.5").minimal_n() == 2);
    TempFile espec("e.json", R"({"kind":"E"})");
    auto g = resolve_generator(espec.path);
    CHECK(g.minimal_n() == 4);
    TempFile mspec("m.json", R"({"kind":"M"})");
    CHECK_THROWS_AS(resolve_generator(mspec.path), NotGammaInvariant);
}

TEST_CASE("estimate reports conform to the shipped schema") {
    Rng rng(239);
    Sample s = sample_copula(Copula::Pi(), 20, 5);
    EstimateReport rep = estimate(s, spearman_generator());
    nlohmann::ordered_json j = estimate_report_to_json(rep);
    std::string why;
    CHECK_MESSAGE(schema_check::conforms(nlohmann::json::parse(j.dump()),
                                         schema_check::load_schema("estimate_report.schema.json"),
                                         why),
                  why);
}

TEST_CASE("study config parsing and validation") {
    TempFile cfg("study.json", R"({
        "generator": "gini",
        "copula": {"kind": "grid", "mass": [[0.5, 0.0], [0.0, 0.5]]},
        "sizes": [10, 50],
        "replications": 3,
        "seed": 99
    })");
    std::ifstream in(cfg.path);
    nlohmann::json j;
    in >> j;
    StudyConfig sc = study_config_from_json(j);
    CHECK(sc.generator_spec == "gini");
    CHECK(sc.sizes == std::vector<int>{10, 50});
    CHECK(sc.replications == 3);
    CHECK(sc.seed == 99);
    CHECK(sc.materialize_resolution == 256);

    nlohmann::json missing = {{"generator", "gini"}};
    CHECK_THROWS_AS(study_config_from_json(missing), std::invalid_argument);
}

TEST_CASE("g17 formatting round-trips doubles") {
    Rng rng(241);
    for (int i = 0; i < 200; ++i) {
        double v = (rng.unif01() - 0.5) * std::pow(10.0, static_cast<int>(rng.unif01() * 6) - 3);
        std::string s = format_g17(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_g17(0.1) == "0.10000000000000001");
}
