#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "concordia/biconvex.hpp"
#include "concordia/concordance.hpp"
#include "concordia/estimator.hpp"
#include "concordia/io.hpp"
#include "concordia/simulation.hpp"
#include "concordia/transform.hpp"

namespace {

using concordia::format_g17;

void emit(const nlohmann::ordered_json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write output file: " + out_path);
    out << j.dump(2) << "\n";
}

std::string estimate_csv(const concordia::EstimateReport& rep) {
    std::string s = "n,generator,n_A,valid,c_form,m_form,w_form,kappa_hat\n";
    s += std::to_string(rep.n) + "," + rep.generator + "," + std::to_string(rep.n_a) + "," +
         (rep.valid ? "true" : "false") + "," + format_g17(rep.c_form) + "," +
         format_g17(rep.m_form) + "," + format_g17(rep.w_form) + "," + format_g17(rep.kappa_hat) +
         "\n";
    return s;
}

int cmd_estimate(const std::string& input, const std::string& generator_spec,
                 const std::string& out_path, const std::string& format) {
    concordia::Sample sample = [&] {
        try {
            return concordia::read_sample_csv(input);
        } catch (const concordia::CsvError& e) {
            std::cerr << "error: " << input << ": " << e.what() << "\n";
            std::exit(2);
        }
    }();
    auto gen = concordia::resolve_generator(generator_spec);
    concordia::EstimateReport rep = [&] {
        try {
            return concordia::estimate(sample, gen);
        } catch (const concordia::SampleTooSmall& e) {
            std::cerr << "error: " << e.what() << "\n";
            std::exit(3);
        }
    }();
    if (format == "csv") {
        if (out_path.empty()) {
            std::cout << estimate_csv(rep);
        } else {
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot write output file: " + out_path);
            out << estimate_csv(rep);
        }
    } else {
        emit(concordia::estimate_report_to_json(rep), out_path);
    }
    return 0;
}

int cmd_exact(const std::string& copula_spec, const std::string& generator_spec,
              const std::string& out_path, int resolution) {
    concordia::Copula c = concordia::load_copula_spec(copula_spec);
    auto gen = concordia::resolve_generator(generator_spec);
    concordia::BiconvexResult form = concordia::biconvex_form(c, gen.generator_copula(), resolution);
    double k = (form.value - 0.25) / (gen.m_constant() - 0.25);

    nlohmann::ordered_json j;
    j["schema"] = "concordia.exact.v1";
    j["copula"] = copula_spec;
    j["generator"] = gen.name();
    j["kappa"] = k;
    j["biconvex_value"] = form.value;
    j["m_constant"] = gen.m_constant();
    j["method"] = concordia::BiconvexResult::method_name(form.method);
    j["resolution_used"] = form.resolution_used;
    j["est_error"] = form.est_error;
    emit(j, out_path);
    return 0;
}

int cmd_check(const std::string& copula_spec, const std::string& subgroup_name,
              const std::string& out_path, int lattice, double tol) {
    concordia::Copula c = concordia::load_copula_spec(copula_spec);
    auto sg = concordia::Subgroup::by_name(subgroup_name);
    if (!sg) {
        std::cerr << "error: unknown subgroup '" << subgroup_name
                  << "' (expected Gamma, GammaPi, GammaNu, GammaTau or GammaPiTau)\n";
        return 1;
    }
    concordia::InvarianceReport rep = concordia::check_invariance(c, *sg, lattice);
    nlohmann::ordered_json j;
    j["schema"] = "concordia.check.v1";
    j["copula"] = copula_spec;
    j["subgroup"] = sg->name();
    j["invariant"] = rep.invariant(tol);
    j["max_deviation"] = rep.max_deviation;
    j["worst_element"] = concordia::group::name_of(rep.worst_element);
    j["worst_point"] = {rep.worst_u1, rep.worst_u2};
    j["grid_comparison"] = rep.grid_path;
    j["lattice"] = lattice;
    j["tol"] = tol;
    emit(j, out_path);
    return rep.invariant(tol) ? 0 : 1;
}

int cmd_na(const std::string& generator_spec, const std::string& out_path) {
    auto gen = concordia::resolve_generator(generator_spec);
    nlohmann::ordered_json j;
    j["schema"] = "concordia.na.v1";
    j["generator"] = gen.name();
    j["n_A"] = gen.minimal_n();
    emit(j, out_path);
    return 0;
}

int cmd_study(const std::string& config_path, const std::string& out_path,
              const std::uint64_t* seed_override) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open study config: " << config_path << "\n";
        return 2;
    }
    nlohmann::json cfg_json;
    try {
        in >> cfg_json;
    } catch (const std::exception& e) {
        std::cerr << "error: malformed study config: " << e.what() << "\n";
        return 2;
    }
    concordia::StudyConfig cfg = concordia::study_config_from_json(cfg_json);
    if (seed_override) cfg.seed = *seed_override;
    nlohmann::ordered_json report = concordia::run_study(cfg);
    emit(report, out_path);
    if (!out_path.empty()) {
        for (const auto& row : report["sizes"])
            std::cout << "n=" << row["n"] << " mean=" << format_g17(row["mean"].get<double>())
                      << " sd=" << format_g17(row["sd"].get<double>())
                      << " abs_error=" << format_g17(row["abs_error"].get<double>()) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concordia: copula-generated measures of concordance and their rank estimators"};
    app.require_subcommand(1);

    std::string input, generator_spec, copula_spec, subgroup_name = "Gamma";
    std::string out_path, format = "json", config_path;
    int resolution = 64;
    int lattice = 101;
    double tol = 1e-10;
    std::uint64_t seed = 0;

    auto* est = app.add_subcommand("estimate", "estimate kappa from a two-column CSV sample");
    est->add_option("--input", input, "CSV file with two numeric columns")->required();
    est->add_option("--generator", generator_spec, "spearman | gini | eq:<q> | copula spec file")
        ->required();
    est->add_option("--out", out_path, "output file (default stdout)");
    est->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    auto* exa = app.add_subcommand("exact", "exact population kappa of a copula spec");
    exa->add_option("--copula", copula_spec, "builtin name (M, W, Pi, E) or spec file")->required();
    exa->add_option("--generator", generator_spec, "spearman | gini | eq:<q> | copula spec file")
        ->required();
    exa->add_option("--out", out_path, "output file (default stdout)");
    exa->add_option("--resolution", resolution, "initial fallback resolution (default 64)");

    auto* chk = app.add_subcommand("check", "check subgroup invariance of a copula spec");
    chk->add_option("--copula", copula_spec, "builtin name or spec file")->required();
    chk->add_option("--subgroup", subgroup_name,
                    "Gamma (default) | GammaPi | GammaNu | GammaTau | GammaPiTau");
    chk->add_option("--out", out_path, "output file (default stdout)");
    chk->add_option("--lattice", lattice, "sampling lattice for non-grid copulas (default 101)");
    chk->add_option("--tol", tol, "invariance tolerance (default 1e-10)");

    auto* na = app.add_subcommand("na", "minimal valid sample size n_A of a generator");
    na->add_option("--generator", generator_spec, "spearman | gini | eq:<q> | copula spec file")
        ->required();
    na->add_option("--out", out_path, "output file (default stdout)");

    auto* study = app.add_subcommand("study", "run a Monte Carlo consistency study");
    study->add_option("--config", config_path, "study config JSON")->required();
    study->add_option("--out", out_path, "report file (default stdout)");
    auto* seed_opt = study->add_option("--seed", seed, "override the config seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) return cmd_estimate(input, generator_spec, out_path, format);
        if (exa->parsed()) return cmd_exact(copula_spec, generator_spec, out_path, resolution);
        if (chk->parsed()) return cmd_check(copula_spec, subgroup_name, out_path, lattice, tol);
        if (na->parsed()) return cmd_na(generator_spec, out_path);
        if (study->parsed())
            return cmd_study(config_path, out_path, seed_opt->count() > 0 ? &seed : nullptr);
    } catch (const concordia::CsvError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
