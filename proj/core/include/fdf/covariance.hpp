#pragma once

#include <optional>

#include <Eigen/Core>

#include "fdf/sample.hpp"

namespace fdf {

/// Discretized bivariate kernel: values(i,j) = k(t_i, s_j) on the grid.
struct KernelMatrix {
    Grid grid;
    Eigen::MatrixXd values;

    KernelMatrix(Grid g, Eigen::MatrixXd v);
};

/// Eigenpairs of a discretized self-adjoint kernel operator. Eigenfunctions
/// are orthonormal under the grid quadrature inner product; eigenvalues are
/// sorted descending, with |value| <= 1e-12 clamped to zero.
struct SpectralDecomposition {
    Grid grid;
    Eigen::VectorXd eigenvalues;     // descending
    Eigen::MatrixXd eigenfunctions;  // column j = eigenfunction j on the grid
};

/// Empirical lag-h covariance kernel of a centered sample. Divides by N for
/// every lag. For h < 0 the mirrored sum is used, so the result equals the
/// transpose of the lag |h| kernel.
KernelMatrix lag_cov_kernel(const FunctionalSample& sample, int h);

/// Triangular lag window: max(0, 1 - |h|/b).
double bartlett_weight(int h, double b);

/// Smoothed long-run kernel with the lag-0 term excluded: the kernel of the
/// operator Gamma - Gamma_0, i.e. sum over 0 < |h| <= b of the weighted lag
/// kernels. Symmetric by construction.
KernelMatrix longrun_minus_lag0(const FunctionalSample& sample, double b);

/// Full smoothed long-run kernel (lag 0 included).
KernelMatrix longrun_kernel(const FunctionalSample& sample, double b);

/// Rule-of-thumb bandwidth ceil(N^(1/3)), unless an override is supplied.
double select_bandwidth(int n, std::optional<double> override_b = std::nullopt);

/// Quadrature-aware eigendecomposition of a symmetric kernel.
SpectralDecomposition kernel_spectrum(const KernelMatrix& kernel);

/// Spectrum of the empirical lag-0 covariance kernel.
SpectralDecomposition cov0_spectrum(const FunctionalSample& sample);

/// Smallest p whose leading eigenvalues reach the requested cumulative share,
/// capped at p_max and at the number of eigenvalues above 1e-10.
int select_p(const SpectralDecomposition& spectrum, double share = 0.90, int p_max = 12);

/// Hilbert-Schmidt norm of a kernel under the grid quadrature.
double hilbert_schmidt_norm(const KernelMatrix& kernel);

/// Quadrature integral of k(t,t) along the diagonal.
double kernel_trace(const KernelMatrix& kernel);

}  // namespace fdf
