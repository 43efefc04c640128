#include "fdf/monte_carlo.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "fdf/errors.hpp"
#include "fdf/rng.hpp"

namespace fdf::sim {

namespace {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FDF_WORKERS")) {
        int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct RuleCounts {
    int k_ratio = -1;
    int k_scree = -1;
    int r_ratio = -1;
    int r_scree = -1;
    int kmr_ratio = -1;
    int kmr_scree = -1;
};

// What the ratio/scree rules would have chosen, read off the candidate
// spectra stored in the fit.
RuleCounts read_rules(const FdfFit& fit, double alpha_gate) {
    RuleCounts out;
    if (fit.mode == FitMode::stationary) {
        Eigen::VectorXd alphas = sorted_by_magnitude(fit.alphas_stat);
        out.k_ratio = estimate_count(alphas, static_cast<int>(alphas.size()), KRule::ratio);
        out.k_scree = estimate_count(alphas, static_cast<int>(alphas.size()), KRule::scree);
        return out;
    }
    Eigen::VectorXd diff_alphas = sorted_by_magnitude(fit.alphas_nonstat);
    out.r_ratio = estimate_count(diff_alphas, static_cast<int>(diff_alphas.size()), KRule::ratio);
    out.r_scree = estimate_count(diff_alphas, static_cast<int>(diff_alphas.size()), KRule::scree);
    const bool rejected = fit.diagnostics.independence &&
                          fit.diagnostics.independence->p_value < alpha_gate;
    if (!rejected) {
        out.kmr_ratio = 0;
        out.kmr_scree = 0;
    } else if (fit.alphas_stat.size() > 0) {
        Eigen::VectorXd z_alphas = sorted_by_magnitude(fit.alphas_stat);
        out.kmr_ratio = estimate_count(z_alphas, static_cast<int>(z_alphas.size()), KRule::ratio);
        out.kmr_scree = estimate_count(z_alphas, static_cast<int>(z_alphas.size()), KRule::scree);
    }
    if (out.kmr_ratio >= 0) out.k_ratio = out.r_ratio + out.kmr_ratio;
    if (out.kmr_scree >= 0) out.k_scree = out.r_scree + out.kmr_scree;
    return out;
}

std::vector<double> score_ise(const FdfFit& fit, const ModelTruth& truth, const Grid& grid) {
    std::vector<int> assignment = match_loadings(fit.loadings, truth.loadings, grid);
    std::vector<double> out(truth.K, -1.0);
    for (int j = 0; j < truth.K; ++j) {
        if (assignment[j] >= 0) {
            out[j] = ise(truth.loadings.row(j).transpose(),
                         fit.loadings.curve(assignment[j]), grid);
        }
    }
    return out;
}

RepRecord run_one(const SimConfig& config, int rep) {
    RepRecord row;
    row.rep_index = rep;
    row.seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(rep));
    const auto start = std::chrono::steady_clock::now();
    try {
        auto [sample, truth] = simulate_model(config.model_id, config.n, config.m, row.seed,
                                              config.noise_scale);
        const bool nonstationary = truth.r > 0;

        FitOptions opts;
        opts.k0 = config.k0;
        opts.force_K = truth.K;
        if (nonstationary) opts.force_r = truth.r;

        if (config.run_fdf) {
            FdfFit fit = nonstationary ? fit_nonstationary(sample, opts)
                                       : fit_stationary(sample, opts);
            row.fdf_ise = score_ise(fit, truth, sample.grid());
            RuleCounts rules = read_rules(fit, opts.alpha_gate);
            row.k_ratio = rules.k_ratio;
            row.k_scree = rules.k_scree;
            row.r_ratio = rules.r_ratio;
            row.r_scree = rules.r_scree;
            row.kmr_ratio = rules.kmr_ratio;
            row.kmr_scree = rules.kmr_scree;
        }
        if (config.run_pca) {
            FdfFit fit = fit_pca_baseline(
                sample, nonstationary ? FitMode::nonstationary : FitMode::stationary, opts);
            row.pca_ise = score_ise(fit, truth, sample.grid());
        }
    } catch (const std::exception& err) {
        row.error = err.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    return row;
}

}  // namespace

std::vector<int> match_loadings(const LoadingSet& estimated, const Eigen::MatrixXd& truth,
                                const Grid& grid) {
    const int n_true = static_cast<int>(truth.rows());
    const int n_est = estimated.count();
    Eigen::MatrixXd overlap(n_true, n_est);
    for (int j = 0; j < n_true; ++j) {
        Eigen::VectorXd t = truth.row(j).transpose();
        double norm = l2_norm(t, grid);
        if (norm < 1e-12) throw parameter_error("match_loadings: zero-norm true loading");
        t /= norm;
        for (int i = 0; i < n_est; ++i) {
            overlap(j, i) = std::abs(inner_product(t, estimated.curve(i), grid));
        }
    }
    std::vector<int> assignment(n_true, -1);
    std::vector<bool> est_used(n_est, false);
    for (int round = 0; round < std::min(n_true, n_est); ++round) {
        double best = -1.0;
        int best_j = -1, best_i = -1;
        for (int j = 0; j < n_true; ++j) {
            if (assignment[j] >= 0) continue;
            for (int i = 0; i < n_est; ++i) {
                if (est_used[i]) continue;
                if (overlap(j, i) > best) {
                    best = overlap(j, i);
                    best_j = j;
                    best_i = i;
                }
            }
        }
        assignment[best_j] = best_i;
        est_used[best_i] = true;
    }
    return assignment;
}

SimResult run_monte_carlo(const SimConfig& config) {
    if (config.reps < 1) throw parameter_error("run_monte_carlo: need reps >= 1");
    if (config.n < 50) throw parameter_error("run_monte_carlo: need N >= 50");
    if (config.model_id < 1 || config.model_id > 4) {
        throw parameter_error("run_monte_carlo: model_id must be 1..4");
    }
    if (!config.run_fdf && !config.run_pca) {
        throw parameter_error("run_monte_carlo: at least one estimator must be enabled");
    }

    SimResult result;
    result.config = config;
    result.rows.resize(config.reps);

    const int workers = std::min(resolve_workers(config.workers), config.reps);
    if (workers <= 1) {
        for (int rep = 0; rep < config.reps; ++rep) {
            result.rows[rep] = run_one(config, rep);
        }
        return result;
    }

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int rep = next.fetch_add(1);
            if (rep >= config.reps) break;
            result.rows[rep] = run_one(config, rep);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return result;
}

}  // namespace fdf::sim
