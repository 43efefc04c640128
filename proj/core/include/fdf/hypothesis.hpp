#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "fdf/sample.hpp"

namespace fdf {

struct TestRecord {
    double statistic = 0.0;
    double p_value = 1.0;
    std::string method;
    int lag_horizon = 0;
    int proj_dim = 0;
};

inline constexpr std::uint64_t kDefaultTestSeed = 0x7e57u;

/// Portmanteau test for serial independence of a functional series. Curves
/// are projected onto the leading proj_dim eigenfunctions of their own lag-0
/// covariance; the multivariate Ljung-Box-type statistic over H lags is
/// referred to a chi-square with proj_dim^2 * H degrees of freedom.
TestRecord independence_test(const FunctionalSample& sample, int lag_horizon = 10,
                             int proj_dim = 3);

/// Partial-sum stationarity test. The statistic is the integrated squared
/// norm of the CUSUM bridge of the curves; the null distribution is
/// approximated by sum_i nu_i * Int B_i^2 with nu_i the Bartlett long-run
/// variances of the leading projection scores and B_i independent Brownian
/// bridges, simulated mc_reps times. Identical seeds give identical p-values.
TestRecord stationarity_test(const FunctionalSample& sample, int proj_dim = 3,
                             int mc_reps = 5000, std::uint64_t seed = kDefaultTestSeed);

/// Scalar version of the partial-sum test, for factor trajectories.
TestRecord scalar_stationarity_test(const Eigen::VectorXd& series, int mc_reps = 5000,
                                    std::uint64_t seed = kDefaultTestSeed);

/// Bartlett (Newey-West) long-run variance of a scalar series. The bandwidth
/// is the Andrews AR(1) plug-in, capped at 12 (N/100)^(1/4); floored at a
/// small positive value.
double longrun_variance(const Eigen::VectorXd& series);

/// Scalar partial-sum bridge statistic divided by the series' long-run
/// variance. Stays O(1) for stationary series and diverges for integrated
/// ones; compare against the quantiles of Int B(t)^2 dt.
double normalized_partial_sum_statistic(const Eigen::VectorXd& series);

}  // namespace fdf
