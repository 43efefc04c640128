#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fdf/covariance.hpp"
#include "fdf/sample.hpp"

namespace fdf::sim {

/// Stationary AR(1) path: f_0 drawn from the stationary law N(0, 1/(1-a^2)),
/// standard Gaussian innovations. Deterministic for a fixed seed.
Eigen::VectorXd gen_ar1(int n, double a, std::uint64_t seed);

/// I(1) path: cumulative sum of a stationary AR(1) increment series, started
/// at zero (the first output value is the first increment).
Eigen::VectorXd gen_i1(int n, double phi, std::uint64_t seed);

/// n independent standard Brownian motions sampled on a uniform grid.
FunctionalSample gen_bm_noise(int n, const Grid& grid, std::uint64_t seed);

/// Ground truth attached to a simulated sample.
struct ModelTruth {
    Eigen::MatrixXd loadings;  // K x m, as written (not renormalized)
    Eigen::MatrixXd factors;   // n x K
    int K = 0;
    int r = 0;  // leading factors that are I(1)
};

/// The four benchmark models: sine/cosine loadings with AR(1) or I(1)
/// factors plus Brownian-motion noise.
///   1: K=1, f ~ AR(0.7)            2: K=2, f1 ~ AR(0.8), f2 ~ AR(-0.5)
///   3: K=1=r, diff(f) ~ AR(0.5)    4: K=2, r=1, diff(f1) ~ AR(0.7), f2 ~ AR(0.5)
std::pair<FunctionalSample, ModelTruth> simulate_model(int model_id, int n, int m,
                                                       std::uint64_t seed,
                                                       double noise_scale = 1.0);

/// Integrated squared error between unit-normalized loadings, minimized over
/// the sign of the estimate.
double ise(const Eigen::VectorXd& true_loading, const Eigen::VectorXd& est_loading,
           const Grid& grid);

/// One linear-process coefficient: a scaled identity plus an optional
/// integral-kernel part.
struct OperatorSpec {
    double identity = 0.0;
    std::optional<KernelMatrix> kernel;
};

struct LinearProcessSpec {
    std::vector<OperatorSpec> coefficients;  // A_0, A_1, ...
    KernelMatrix innovation_cov;
};

/// Analytic long-run kernel of the linear process: the kernel of
/// A Gamma_eps A* with A the sum of the coefficients, by discretized
/// operator composition.
KernelMatrix linear_process_longrun(const LinearProcessSpec& spec);

/// Draws a path of the linear process with Gaussian innovations sampled from
/// the spectral expansion of the innovation covariance.
FunctionalSample simulate_linear_process(const LinearProcessSpec& spec, int n,
                                         std::uint64_t seed);

}  // namespace fdf::sim
