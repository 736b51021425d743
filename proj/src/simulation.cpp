#include "concordia/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <thread>

#include "concordia/estimator.hpp"
#include "concordia/rng.hpp"

namespace concordia {

namespace {

// Per-node sampling plan prepared once so that repeated draws are O(log m).
struct PreparedSampler {
    Copula::Kind kind;
    const GridCopula* grid = nullptr;
    std::vector<double> cum;                // grid: cumulative cell masses
    std::vector<double> weight_cum;         // mixture
    std::vector<PreparedSampler> children;  // mixture

    explicit PreparedSampler(const Copula& c) : kind(c.kind()) {
        switch (kind) {
            case Copula::Kind::M:
            case Copula::Kind::W:
            case Copula::Kind::Pi:
                break;
            case Copula::Kind::Grid: {
                grid = &c.as_grid();
                const int m = grid->resolution();
                cum.reserve(static_cast<size_t>(m) * m);
                double run = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        run += grid->cell_mass(i, j);
                        cum.push_back(run);
                    }
                break;
            }
            case Copula::Kind::Mixture: {
                double run = 0.0;
                for (const auto& [w, sub] : c.parts()) {
                    run += w;
                    weight_cum.push_back(run);
                    children.emplace_back(sub);
                }
                break;
            }
            default:
                throw SamplingUnsupported("cannot sample from " + c.describe() +
                                          "; materialize it to a grid first");
        }
    }

    std::pair<double, double> draw(Rng& rng) const {
        switch (kind) {
            case Copula::Kind::M: {
                double u = rng.unif01();
                return {u, u};
            }
            case Copula::Kind::W: {
                double u = rng.unif01();
                return {u, 1.0 - u};
            }
            case Copula::Kind::Pi: {
                double u = rng.unif01();
                double v = rng.unif01();
                return {u, v};
            }
            case Copula::Kind::Grid: {
                const int m = grid->resolution();
                double r = rng.unif01() * cum.back();
                size_t idx = std::lower_bound(cum.begin(), cum.end(), r) - cum.begin();
                if (idx >= cum.size()) idx = cum.size() - 1;
                int i = static_cast<int>(idx) / m;
                int j = static_cast<int>(idx) % m;
                double u = (i + rng.unif01()) / m;
                double v = (j + rng.unif01()) / m;
                return {u, v};
            }
            default: {  // Mixture
                double r = rng.unif01() * weight_cum.back();
                size_t idx =
                    std::lower_bound(weight_cum.begin(), weight_cum.end(), r) - weight_cum.begin();
                if (idx >= children.size()) idx = children.size() - 1;
                return children[idx].draw(rng);
            }
        }
    }
};

}  // namespace

bool sampling_supported(const Copula& c) {
    switch (c.kind()) {
        case Copula::Kind::M:
        case Copula::Kind::W:
        case Copula::Kind::Pi:
        case Copula::Kind::Grid:
            return true;
        case Copula::Kind::Mixture:
            return std::all_of(c.parts().begin(), c.parts().end(),
                               [](const auto& p) { return sampling_supported(p.second); });
        default:
            return false;
    }
}

Sample sample_copula(const Copula& c, int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sample_copula: n must be >= 2");
    PreparedSampler plan(c);
    Rng rng(seed);
    std::vector<double> x1(n), x2(n);
    for (int k = 0; k < n; ++k) {
        auto [u, v] = plan.draw(rng);
        x1[k] = u;
        x2[k] = v;
    }
    return Sample(std::move(x1), std::move(x2));
}

int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("CONCORDIA_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

nlohmann::ordered_json run_study(const StudyConfig& cfg) {
    if (cfg.replications < 1) throw std::invalid_argument("study: replications must be >= 1");
    for (int n : cfg.sizes)
        if (n < 2) throw std::invalid_argument("study: sample sizes must be >= 2");

    Copula target = cfg.target;
    bool materialized = false;
    if (!sampling_supported(target)) {
        target = Copula::grid(cfg.target.discretize(cfg.materialize_resolution));
        materialized = true;
    }
    const double exact = kappa(cfg.generator, target);

    nlohmann::ordered_json report;
    report["schema"] = "concordia.study.v1";
    report["generator"] = cfg.generator_spec;
    report["copula"] = cfg.target_json;
    report["seed"] = cfg.seed;
    report["replications"] = cfg.replications;
    report["materialized"] = materialized;
    report["materialize_resolution"] = cfg.materialize_resolution;
    report["exact_kappa"] = exact;
    report["sizes"] = nlohmann::ordered_json::array();

    struct RepResult {
        double kappa_hat = 0.0;
        std::string error;
    };

    const int threads = std::max(1, std::min(max_threads(), cfg.replications));
    for (int n : cfg.sizes) {
        std::vector<RepResult> results(cfg.replications);
        auto worker = [&](int lo, int hi) {
            for (int r = lo; r < hi; ++r) {
                try {
                    Sample s = sample_copula(target, n, cfg.seed + static_cast<std::uint64_t>(r));
                    results[r].kappa_hat = estimate(s, cfg.generator).kappa_hat;
                } catch (const std::exception& e) {
                    results[r].error = e.what();
                }
            }
        };
        if (threads == 1) {
            worker(0, cfg.replications);
        } else {
            std::vector<std::future<void>> futs;
            int chunk = (cfg.replications + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                int lo = t * chunk;
                int hi = std::min(cfg.replications, lo + chunk);
                if (lo >= hi) break;
                futs.push_back(std::async(std::launch::async, worker, lo, hi));
            }
            for (auto& f : futs) f.get();
        }

        nlohmann::ordered_json row;
        row["n"] = n;
        nlohmann::ordered_json values = nlohmann::ordered_json::array();
        nlohmann::ordered_json errors = nlohmann::ordered_json::array();
        double sum = 0.0;
        int ok = 0;
        for (int r = 0; r < cfg.replications; ++r) {
            if (!results[r].error.empty()) {
                errors.push_back({{"replication", r}, {"message", results[r].error}});
                continue;
            }
            values.push_back(results[r].kappa_hat);
            sum += results[r].kappa_hat;
            ++ok;
        }
        double mean = ok > 0 ? sum / ok : 0.0;
        double ss = 0.0;
        for (int r = 0; r < cfg.replications; ++r)
            if (results[r].error.empty()) ss += (results[r].kappa_hat - mean) * (results[r].kappa_hat - mean);
        double sd = ok > 1 ? std::sqrt(ss / (ok - 1)) : 0.0;
        row["replications_ok"] = ok;
        row["mean"] = mean;
        row["sd"] = sd;
        row["abs_error"] = std::fabs(mean - exact);
        row["kappa_hat"] = values;
        row["errors"] = errors;
        report["sizes"].push_back(row);
    }
    return report;
}

}  // namespace concordia
