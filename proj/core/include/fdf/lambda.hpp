#pragma once

#include <Eigen/Core>

#include "fdf/covariance.hpp"

namespace fdf {

/// The target operator (Gamma - Gamma_0) Gamma_0^{-1} restricted to the span
/// of the leading p covariance eigenfunctions, held in whitened score
/// coordinates. S = D^{-1/2} C D^{-1/2} is symmetric and similar to the
/// restriction, so it carries the same eigenvalues.
struct LambdaOperator {
    Grid grid;
    int p;
    Eigen::MatrixXd score_basis;  // m x p, column k = k-th covariance eigenfunction
    Eigen::VectorXd d;            // p leading covariance eigenvalues, all > 0
    Eigen::MatrixXd C;            // p x p projection of the lag-0-excluded long-run kernel
    Eigen::MatrixXd S;            // p x p whitened matrix
};

/// Assembles the operator from an already-estimated long-run kernel (lag 0
/// excluded) and lag-0 spectrum. This is the injection point for analytic
/// population kernels.
LambdaOperator build_lambda(const KernelMatrix& longrun_excl0,
                            const SpectralDecomposition& cov0,
                            int p);

/// Estimates both kernels from a centered sample, then assembles.
LambdaOperator build_lambda(const FunctionalSample& sample, double b, int p);

}  // namespace fdf
