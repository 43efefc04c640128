#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdf/fit.hpp"
#include "fdf/sim.hpp"

namespace fdf::sim {

struct SimConfig {
    int model_id = 1;
    int n = 300;
    int m = 101;
    int reps = 100;
    std::uint64_t master_seed = 1;
    double noise_scale = 1.0;
    bool run_fdf = true;
    bool run_pca = true;
    int k0 = 8;
    int workers = 0;  // 0: FDF_WORKERS env var, else hardware concurrency
};

/// One replication row. ISE vectors are indexed by true loading; factor-count
/// estimates are recorded for both rules (-1 where not applicable). A failed
/// replication carries its message in `error` and empty metrics.
struct RepRecord {
    int rep_index = 0;
    std::uint64_t seed = 0;
    std::vector<double> fdf_ise;
    std::vector<double> pca_ise;
    int k_ratio = -1;
    int k_scree = -1;
    int r_ratio = -1;
    int r_scree = -1;
    int kmr_ratio = -1;
    int kmr_scree = -1;
    double wall_ms = 0.0;
    std::string error;
};

struct SimResult {
    SimConfig config;
    std::vector<RepRecord> rows;  // sorted by rep_index
};

/// Greedy matching of estimated to true loadings by largest |inner product|;
/// returns est index for each true loading. One-to-one by construction.
std::vector<int> match_loadings(const LoadingSet& estimated, const Eigen::MatrixXd& truth,
                                const Grid& grid);

/// Runs the replication study: simulate, fit both estimators with the true
/// factor counts pinned, score per-loading ISE, and record what the ratio and
/// scree rules would have chosen. Deterministic for a fixed master seed
/// regardless of worker count.
SimResult run_monte_carlo(const SimConfig& config);

}  // namespace fdf::sim
