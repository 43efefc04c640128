#include "fdf/fit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "fdf/covariance.hpp"
#include "fdf/errors.hpp"
#include "fdf/lambda.hpp"

namespace fdf {

namespace {

struct StageResult {
    double bandwidth = 0.0;
    int p = 0;
    int k0_eff = 0;
    LoadingSet candidates;
};

// Candidate extraction via the whitened long-run operator (the Algorithm-1
// machinery). The sample must already be centered.
StageResult run_lambda_stage(const FunctionalSample& centered, const FitOptions& opts,
                             BlockLabel label) {
    StageResult out;
    out.bandwidth = select_bandwidth(centered.n_curves(), opts.bandwidth);
    SpectralDecomposition spec0 = cov0_spectrum(centered);
    out.p = select_p(spec0, opts.p_share, opts.p_max);
    LambdaOperator lambda = build_lambda(longrun_minus_lag0(centered, out.bandwidth), spec0, out.p);
    out.k0_eff = std::min(opts.k0, out.p);
    // The nonstationary stage works on differenced data, whose noise floor is
    // a flat negative band; rank its candidates by signed eigenvalue.
    out.candidates = extract_loadings(lambda, out.k0_eff, label,
                                      label == BlockLabel::nonstationary
                                          ? EigenOrdering::signed_descending
                                          : EigenOrdering::magnitude);
    return out;
}

// PCA counterpart: candidates are lag-0 covariance eigenfunctions, candidate
// eigenvalues the covariance eigenvalues.
StageResult run_pca_stage(const FunctionalSample& centered, const FitOptions& opts,
                          BlockLabel label) {
    StageResult out;
    SpectralDecomposition spec0 = cov0_spectrum(centered);
    int positive = 0;
    while (positive < spec0.eigenvalues.size() && spec0.eigenvalues[positive] > 1e-10) {
        ++positive;
    }
    if (positive == 0) {
        throw estimation_error("fit_pca_baseline: degenerate covariance");
    }
    out.k0_eff = std::min(opts.k0, positive);
    out.p = out.k0_eff;
    out.candidates = LoadingSet{centered.grid(),
                                spec0.eigenfunctions.leftCols(out.k0_eff).transpose(),
                                spec0.eigenvalues.head(out.k0_eff),
                                std::vector<BlockLabel>(out.k0_eff, label)};
    return out;
}

// Loading-estimation error leaves a leftover multiple of each removed
// integrated factor inside the residual series: an O(1) component that the
// independence gate and the residual eigenstructure would otherwise pick up.
// That leftover is, by construction, the part of the residual explained by
// the removed factor trajectories over time, so a least-squares regression of
// the residual curves on those trajectories removes it. Genuinely stationary
// factors are uncorrelated with the integrated trajectories, and their
// spurious-regression coefficient vanishes with N.
FunctionalSample detrend_against_scores(const FunctionalSample& residual,
                                        const Eigen::MatrixXd& removed_scores) {
    if (removed_scores.cols() == 0) return residual;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(removed_scores);
    Eigen::MatrixXd beta = qr.solve(residual.values());
    FunctionalSample out(residual.grid(), residual.values() - removed_scores * beta);
    out.mark_centered();
    return out;
}

int clamp_forced(int forced, int available, FitDiagnostics& diag, const char* what) {
    if (forced > available) {
        diag.warnings.push_back(std::string("forced ") + what +
                                " exceeds available candidates; clamped");
        return available;
    }
    return forced;
}

LoadingSet take_block(const LoadingSet& candidates, int count) {
    return LoadingSet{candidates.grid, candidates.curves.topRows(count),
                      candidates.eigenvalues.head(count),
                      std::vector<BlockLabel>(candidates.block_labels.begin(),
                                              candidates.block_labels.begin() + count)};
}

LoadingSet concat_blocks(const LoadingSet& a, const LoadingSet& b) {
    LoadingSet out;
    out.grid = a.grid;
    out.curves.resize(a.count() + b.count(), a.grid.size());
    out.curves.topRows(a.count()) = a.curves;
    out.curves.bottomRows(b.count()) = b.curves;
    out.eigenvalues.resize(a.count() + b.count());
    out.eigenvalues.head(a.count()) = a.eigenvalues;
    out.eigenvalues.tail(b.count()) = b.eigenvalues;
    out.block_labels = a.block_labels;
    out.block_labels.insert(out.block_labels.end(), b.block_labels.begin(),
                            b.block_labels.end());
    return out;
}

template <typename StageFn>
FdfFit fit_stationary_impl(const FunctionalSample& sample, const FitOptions& opts,
                           StageFn&& stage_fn) {
    if (sample.n_curves() < 20) {
        throw insufficient_data("fit_stationary: need N >= 20");
    }
    if (opts.k0 < 2) throw parameter_error("fit_stationary: need k0 >= 2");

    FunctionalSample centered = center(sample);
    StageResult stage = stage_fn(centered, opts, BlockLabel::stationary);

    FdfFit fit;
    fit.mode = FitMode::stationary;
    fit.bandwidth = stage.bandwidth;
    fit.p = stage.p;
    fit.k0 = stage.k0_eff;
    fit.alphas_stat = stage.candidates.eigenvalues;
    fit.mean_curve = *centered.mean_curve();

    int k_rule = estimate_count(sorted_by_magnitude(stage.candidates.eigenvalues),
                                stage.k0_eff, opts.k_rule);
    fit.K_hat = opts.force_K
                    ? clamp_forced(*opts.force_K, stage.k0_eff, fit.diagnostics, "K")
                    : k_rule;
    fit.r_hat = 0;
    fit.diagnostics.k0_saturated = (k_rule == stage.k0_eff);
    fit.diagnostics.low_signal =
        stage.candidates.eigenvalues.cwiseAbs().maxCoeff() <= kLowSignalAlpha;

    fit.loadings = take_block(stage.candidates, fit.K_hat);
    fit.factors = factor_scores(centered, fit.loadings);
    return fit;
}

template <typename StageFn>
FdfFit fit_nonstationary_impl(const FunctionalSample& sample, const FitOptions& opts,
                              StageFn&& stage_fn) {
    if (sample.n_curves() < 30) {
        throw insufficient_data("fit_nonstationary: need N >= 30");
    }
    if (opts.k0 < 2) throw parameter_error("fit_nonstationary: need k0 >= 2");

    FunctionalSample centered_level = center(sample);
    FunctionalSample diff = center(difference(sample));

    StageResult stage1 = stage_fn(diff, opts, BlockLabel::nonstationary);

    FdfFit fit;
    fit.mode = FitMode::nonstationary;
    fit.bandwidth = stage1.bandwidth;
    fit.p = stage1.p;
    fit.k0 = stage1.k0_eff;
    fit.alphas_nonstat = stage1.candidates.eigenvalues;
    fit.mean_curve = *centered_level.mean_curve();

    int r_rule = estimate_count(sorted_by_magnitude(stage1.candidates.eigenvalues),
                                stage1.k0_eff, opts.k_rule);
    fit.r_hat = opts.force_r
                    ? clamp_forced(*opts.force_r, stage1.k0_eff, fit.diagnostics, "r")
                    : r_rule;
    fit.diagnostics.k0_saturated = (r_rule == stage1.k0_eff);
    // After differencing, stationary noise shows a flat negative whitened
    // spectrum, so only a large positive eigenvalue indicates genuine I(1)
    // structure.
    fit.diagnostics.low_signal = stage1.candidates.eigenvalues.maxCoeff() <= kLowSignalAlpha;

    LoadingSet nonstat_block = take_block(stage1.candidates, fit.r_hat);
    Eigen::MatrixXd level_scores = factor_scores(centered_level, nonstat_block);
    FunctionalSample residual = residual_series(centered_level, nonstat_block, level_scores);
    residual = detrend_against_scores(residual, level_scores);

    bool gate_rejected = false;
    try {
        fit.diagnostics.independence =
            independence_test(residual, opts.independence_lags, opts.proj_dim);
        gate_rejected = fit.diagnostics.independence->p_value < opts.alpha_gate;
    } catch (const estimation_error&) {
        // A degenerate residual carries no remaining structure; treat the
        // gate as not rejected.
        fit.diagnostics.warnings.push_back("independence gate skipped: degenerate residual");
    }

    int forced_stat = -1;
    if (opts.force_K) forced_stat = std::max(0, *opts.force_K - fit.r_hat);

    LoadingSet stat_block{centered_level.grid(), Eigen::MatrixXd(0, centered_level.grid().size()),
                          Eigen::VectorXd(0), {}};
    if (gate_rejected || forced_stat > 0) {
        try {
            StageResult stage2 = stage_fn(residual, opts, BlockLabel::stationary);
            fit.alphas_stat = stage2.candidates.eigenvalues;
            int kmr_rule = gate_rejected
                               ? estimate_count(sorted_by_magnitude(stage2.candidates.eigenvalues),
                                                stage2.k0_eff, opts.k_rule)
                               : 0;
            int stat_count = forced_stat >= 0
                                 ? clamp_forced(forced_stat, stage2.k0_eff, fit.diagnostics,
                                                "K - r")
                                 : kmr_rule;
            if (stat_count > 0) {
                LoadingSet block = take_block(stage2.candidates, stat_count);
                block.curves =
                    orthonormalize_rows(block.curves, block.grid, nonstat_block.curves);
                stat_block = std::move(block);
            }
        } catch (const estimation_error& err) {
            if (forced_stat > 0) throw;
            fit.diagnostics.warnings.push_back(
                std::string("residual stage abandoned: ") + err.what());
        }
    }

    fit.loadings = concat_blocks(nonstat_block, stat_block);
    fit.K_hat = fit.loadings.count();
    fit.factors = factor_scores(centered_level, fit.loadings);
    return fit;
}

}  // namespace

int estimate_count(const Eigen::VectorXd& alphas, int k0, KRule rule) {
    if (k0 < 2) return 1;
    switch (rule) {
        case KRule::ratio:
            return estimate_k_ratio(alphas, k0);
        case KRule::scree:
            return estimate_k_scree(alphas, k0, ScreeVariant::elbow);
        case KRule::scree_literal:
            return estimate_k_scree(alphas, k0, ScreeVariant::literal);
    }
    throw parameter_error("estimate_count: unknown rule");
}

FdfFit fit_stationary(const FunctionalSample& sample, const FitOptions& opts) {
    return fit_stationary_impl(sample, opts, run_lambda_stage);
}

FdfFit fit_nonstationary(const FunctionalSample& sample, const FitOptions& opts) {
    return fit_nonstationary_impl(sample, opts, run_lambda_stage);
}

FdfFit fit_auto(const FunctionalSample& sample, const FitOptions& opts) {
    TestRecord record = stationarity_test(sample, opts.proj_dim, opts.stationarity_mc_reps,
                                          opts.test_seed);
    FdfFit fit = record.p_value < opts.route_alpha ? fit_nonstationary(sample, opts)
                                                   : fit_stationary(sample, opts);
    fit.diagnostics.stationarity = record;
    return fit;
}

FdfFit fit_pca_baseline(const FunctionalSample& sample, FitMode mode, const FitOptions& opts) {
    FdfFit fit = mode == FitMode::stationary
                     ? fit_stationary_impl(sample, opts, run_pca_stage)
                     : fit_nonstationary_impl(sample, opts, run_pca_stage);
    fit.bandwidth = 0.0;  // no lag smoothing in the baseline
    return fit;
}

Eigen::VectorXd reconstruct(const FdfFit& fit, int n) {
    if (n < 0 || n >= fit.factors.rows()) {
        throw std::out_of_range("reconstruct: curve index out of range");
    }
    Eigen::VectorXd out = fit.mean_curve;
    if (fit.K_hat > 0) {
        out += fit.loadings.curves.transpose() * fit.factors.row(n).transpose();
    }
    return out;
}

}  // namespace fdf
