#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "concordia/concordance.hpp"
#include "concordia/copula.hpp"
#include "concordia/ranks.hpp"

namespace concordia {

struct SamplingUnsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// True when the copula can be sampled directly (M, W, Pi, grids and mixtures
// thereof).  E and transformed wrappers must be materialized to a grid first.
bool sampling_supported(const Copula& c);

// n i.i.d. pairs with uniform marginals and copula C, deterministic in the
// seed (bit-identical across platforms).
Sample sample_copula(const Copula& c, int n, std::uint64_t seed);

struct StudyConfig {
    ConcordanceGenerator generator;
    std::string generator_spec;
    Copula target;
    nlohmann::ordered_json target_json;  // echoed into the report
    std::vector<int> sizes;
    int replications = 1;
    std::uint64_t seed = 1;
    int materialize_resolution = 256;
};

// Monte Carlo consistency study: for each size and replication, sample the
// target, estimate kappa, and compare per-size means against the exactly
// computed population value.  Replication r uses seed + r; the report is a
// pure function of the config.
nlohmann::ordered_json run_study(const StudyConfig& cfg);

// Thread cap: min(hardware, CONCORDIA_THREADS if set), at least 1.
int max_threads();

}  // namespace concordia
