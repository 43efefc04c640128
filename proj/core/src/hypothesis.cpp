#include "fdf/hypothesis.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <boost/math/distributions/chi_squared.hpp>

#include "fdf/covariance.hpp"
#include "fdf/errors.hpp"
#include "fdf/factor.hpp"
#include "fdf/rng.hpp"

namespace fdf {

namespace {

constexpr double kNumericPi = 3.14159265358979323846;

// Scores of the centered sample on the leading proj_dim eigenfunctions of its
// own lag-0 covariance.
Eigen::MatrixXd projection_scores(const FunctionalSample& centered, int proj_dim) {
    SpectralDecomposition spec = cov0_spectrum(centered);
    int available = 0;
    while (available < spec.eigenvalues.size() && spec.eigenvalues[available] > 1e-10) {
        ++available;
    }
    if (available < proj_dim) {
        throw estimation_error("projection_scores: rank-deficient score covariance");
    }
    return centered.values() * centered.grid().weights().asDiagonal() *
           spec.eigenfunctions.leftCols(proj_dim);
}

Eigen::MatrixXd score_lag_cov(const Eigen::MatrixXd& scores, int h) {
    const auto n = scores.rows();
    return scores.topRows(n - h).transpose() * scores.bottomRows(n - h) / double(n);
}

// Int_0^1 B(t)^2 dt for a Brownian bridge via its Karhunen-Loeve series,
// truncated at kBridgeTerms with the deterministic tail mean added back.
constexpr int kBridgeTerms = 256;

double bridge_tail_mean() {
    double partial = 0.0;
    for (int k = 1; k <= kBridgeTerms; ++k) {
        partial += 1.0 / (double(k) * double(k) * kNumericPi * kNumericPi);
    }
    return 1.0 / 6.0 - partial;
}

double sample_bridge_integral(std::mt19937_64& engine, std::normal_distribution<double>& gauss,
                              double tail_mean) {
    double acc = tail_mean;
    for (int k = 1; k <= kBridgeTerms; ++k) {
        double z = gauss(engine);
        acc += z * z / (double(k) * double(k) * kNumericPi * kNumericPi);
    }
    return acc;
}

double monte_carlo_pvalue(double statistic, const Eigen::VectorXd& longrun_vars, int mc_reps,
                          std::uint64_t seed) {
    std::mt19937_64 engine = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double tail = bridge_tail_mean();
    int exceed = 0;
    for (int rep = 0; rep < mc_reps; ++rep) {
        double draw = 0.0;
        for (Eigen::Index i = 0; i < longrun_vars.size(); ++i) {
            draw += longrun_vars[i] * sample_bridge_integral(engine, gauss, tail);
        }
        if (draw >= statistic) ++exceed;
    }
    return double(exceed + 1) / double(mc_reps + 1);
}

}  // namespace

double longrun_variance(const Eigen::VectorXd& series) {
    const auto n = series.size();
    if (n < 4) throw insufficient_data("longrun_variance: need at least 4 observations");
    Eigen::VectorXd x = series.array() - series.mean();
    auto acov = [&](int h) { return x.head(n - h).dot(x.tail(n - h)) / double(n); };
    const double g0 = acov(0);
    if (g0 <= 0.0) return 1e-12;

    // Andrews AR(1) plug-in bandwidth for the Bartlett window, capped at
    // 4 (N/100)^(1/4) so power against integrated series survives.
    const double rho = std::clamp(acov(1) / g0, -0.97, 0.97);
    const double alpha1 =
        4.0 * rho * rho / (std::pow(1.0 - rho, 2) * std::pow(1.0 + rho, 2));
    double b = 1.1447 * std::cbrt(std::max(alpha1 * double(n), 0.0));
    b = std::clamp(b, 1.0, 4.0 * std::pow(double(n) / 100.0, 0.25));

    double v = g0;
    const int h_max = std::min<int>(static_cast<int>(n) - 1, static_cast<int>(std::floor(b)));
    for (int h = 1; h <= h_max; ++h) {
        v += 2.0 * bartlett_weight(h, b) * acov(h);
    }
    return std::max(v, 1e-12);
}

double normalized_partial_sum_statistic(const Eigen::VectorXd& series) {
    const auto n = series.size();
    if (n < 4) throw insufficient_data("normalized_partial_sum_statistic: series too short");
    Eigen::VectorXd x = series.array() - series.mean();
    double statistic = 0.0;
    double partial = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        partial += x[i];
        statistic += partial * partial;
    }
    statistic /= double(n) * double(n);
    return statistic / longrun_variance(series);
}

TestRecord independence_test(const FunctionalSample& sample, int lag_horizon, int proj_dim) {
    const int n = sample.n_curves();
    if (lag_horizon < 1 || proj_dim < 1) {
        throw parameter_error("independence_test: lag horizon and projection dimension must be >= 1");
    }
    if (n <= lag_horizon + proj_dim) {
        throw insufficient_data("independence_test: need N > H + proj_dim");
    }

    FunctionalSample centered = sample.centered() ? sample : center(sample);
    Eigen::MatrixXd scores = projection_scores(centered, proj_dim);
    Eigen::MatrixXd r0 = score_lag_cov(scores, 0);
    Eigen::LLT<Eigen::MatrixXd> llt(r0);
    if (llt.info() != Eigen::Success) {
        throw estimation_error("independence_test: score covariance not positive definite");
    }
    Eigen::MatrixXd r0_inv = llt.solve(Eigen::MatrixXd::Identity(proj_dim, proj_dim));

    double q = 0.0;
    for (int h = 1; h <= lag_horizon; ++h) {
        Eigen::MatrixXd rh = score_lag_cov(scores, h);
        q += (rh.transpose() * r0_inv * rh * r0_inv).trace();
    }
    q *= double(n);

    boost::math::chi_squared chi2(double(proj_dim) * double(proj_dim) * double(lag_horizon));
    double p = q > 0.0 ? boost::math::cdf(boost::math::complement(chi2, q)) : 1.0;
    return TestRecord{q, p, "projected-portmanteau", lag_horizon, proj_dim};
}

TestRecord stationarity_test(const FunctionalSample& sample, int proj_dim, int mc_reps,
                             std::uint64_t seed) {
    const int n = sample.n_curves();
    if (n < 50) throw insufficient_data("stationarity_test: need N >= 50");
    if (proj_dim < 1 || mc_reps < 1) {
        throw parameter_error("stationarity_test: proj_dim and mc_reps must be >= 1");
    }

    FunctionalSample centered = sample.centered() ? sample : center(sample);
    // Partial sums of centered curves equal the CUSUM bridge of the raw ones.
    const Eigen::MatrixXd& x = centered.values();
    const Eigen::VectorXd& w = centered.grid().weights();
    double statistic = 0.0;
    Eigen::VectorXd partial = Eigen::VectorXd::Zero(x.cols());
    for (int i = 0; i < n; ++i) {
        partial += x.row(i).transpose();
        statistic += (partial.array().square() * w.array()).sum();
    }
    statistic /= double(n) * double(n);

    Eigen::MatrixXd scores = projection_scores(centered, proj_dim);
    Eigen::VectorXd nus(proj_dim);
    for (int i = 0; i < proj_dim; ++i) {
        nus[i] = longrun_variance(scores.col(i));
    }

    double p = monte_carlo_pvalue(statistic, nus, mc_reps, seed);
    return TestRecord{statistic, p, "partial-sum-bridge", 0, proj_dim};
}

TestRecord scalar_stationarity_test(const Eigen::VectorXd& series, int mc_reps,
                                    std::uint64_t seed) {
    const auto n = series.size();
    if (n < 50) throw insufficient_data("scalar_stationarity_test: need N >= 50");
    Eigen::VectorXd x = series.array() - series.mean();
    double statistic = 0.0;
    double partial = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        partial += x[i];
        statistic += partial * partial;
    }
    statistic /= double(n) * double(n);

    Eigen::VectorXd nus(1);
    nus[0] = longrun_variance(series);
    double p = monte_carlo_pvalue(statistic, nus, mc_reps, seed);
    return TestRecord{statistic, p, "partial-sum-bridge-scalar", 0, 1};
}

}  // namespace fdf
