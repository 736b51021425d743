#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "concordia/concordance.hpp"
#include "concordia/copula.hpp"
#include "concordia/estimator.hpp"
#include "concordia/ranks.hpp"
#include "concordia/simulation.hpp"

namespace concordia {

struct CsvError : std::runtime_error {
    CsvError(int line, const std::string& message);
    int line;
};

// Two numeric comma-separated columns, '.' decimal, UTF-8, optional single
// header row detected by a non-numeric first line.  Needs at least two data
// rows.  Errors cite the offending 1-based line.
Sample read_sample_csv(const std::string& path);

nlohmann::ordered_json copula_to_json(const Copula& c);
Copula copula_from_json(const nlohmann::json& j);

// Builtin name ("M", "W", "Pi", "E") or path to a copula spec file.
Copula load_copula_spec(const std::string& name_or_path);

// "spearman" | "gini" | "eq:<q>" | path to a copula spec file (the loaded
// copula is verified Gamma-invariant).
ConcordanceGenerator resolve_generator(const std::string& spec);

nlohmann::ordered_json estimate_report_to_json(const EstimateReport& rep);

StudyConfig study_config_from_json(const nlohmann::json& j);

// Shortest decimal that round-trips would also do; 17 significant digits is
// the fixed-width convention used for CSV output.
std::string format_g17(double v);

}  // namespace concordia
