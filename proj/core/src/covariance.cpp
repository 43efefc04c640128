#include "fdf/covariance.hpp"

#include <cmath>
#include <cstdlib>

#include <Eigen/Eigenvalues>

#include "fdf/errors.hpp"

namespace fdf {

KernelMatrix::KernelMatrix(Grid g, Eigen::MatrixXd v) : grid(std::move(g)), values(std::move(v)) {
    if (values.rows() != grid.size() || values.cols() != grid.size()) {
        throw dimension_error("KernelMatrix: values must be m x m on the grid");
    }
    if (!values.allFinite()) {
        throw estimation_error("KernelMatrix: non-finite kernel entries");
    }
}

KernelMatrix lag_cov_kernel(const FunctionalSample& sample, int h) {
    const int n = sample.n_curves();
    if (std::abs(h) >= n) {
        throw parameter_error("lag_cov_kernel: |h| must be smaller than the sample size");
    }
    const Eigen::MatrixXd& x = sample.values();
    const int ah = std::abs(h);
    // (1/N) sum_n X_n(t) X_{n+h}(s); the h<0 case is the transpose by the
    // index symmetry of the defining sums.
    Eigen::MatrixXd k = x.topRows(n - ah).transpose() * x.bottomRows(n - ah) / double(n);
    if (h < 0) k.transposeInPlace();
    return KernelMatrix(sample.grid(), std::move(k));
}

double bartlett_weight(int h, double b) {
    if (b <= 0.0) throw parameter_error("bartlett_weight: bandwidth must be positive");
    return std::max(0.0, 1.0 - std::abs(double(h)) / b);
}

namespace {

KernelMatrix weighted_lag_sum(const FunctionalSample& sample, double b, bool include_lag0) {
    const int n = sample.n_curves();
    if (b >= n) throw parameter_error("long-run kernel: bandwidth must be smaller than N");
    if (b <= 0.0) throw parameter_error("long-run kernel: bandwidth must be positive");
    const int m = sample.grid().size();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
    if (include_lag0) acc = lag_cov_kernel(sample, 0).values;
    const int h_max = std::min(n - 1, static_cast<int>(std::floor(b)));
    for (int h = 1; h <= h_max; ++h) {
        const double w = bartlett_weight(h, b);
        if (w == 0.0) continue;
        Eigen::MatrixXd g = lag_cov_kernel(sample, h).values;
        acc += w * (g + g.transpose());
    }
    return KernelMatrix(sample.grid(), std::move(acc));
}

}  // namespace

KernelMatrix longrun_minus_lag0(const FunctionalSample& sample, double b) {
    return weighted_lag_sum(sample, b, false);
}

KernelMatrix longrun_kernel(const FunctionalSample& sample, double b) {
    return weighted_lag_sum(sample, b, true);
}

double select_bandwidth(int n, std::optional<double> override_b) {
    if (override_b) {
        if (*override_b <= 0.0) throw parameter_error("select_bandwidth: override must be positive");
        return *override_b;
    }
    if (n < 4) throw insufficient_data("select_bandwidth: need N >= 4");
    // Guard against cbrt landing epsilon above an exact cube root.
    return std::ceil(std::cbrt(double(n)) - 1e-9);
}

SpectralDecomposition kernel_spectrum(const KernelMatrix& kernel) {
    const Grid& grid = kernel.grid;
    const int m = grid.size();
    // The operator matrix of kernel k under quadrature is K^T W; conjugating by
    // W^(1/2) gives the symmetric pencil whose eigenvectors, mapped back through
    // W^(-1/2), are orthonormal in the quadrature inner product.
    Eigen::VectorXd sqrt_w = grid.weights().cwiseSqrt();
    Eigen::MatrixXd sym = sqrt_w.asDiagonal() * kernel.values * sqrt_w.asDiagonal();
    sym = 0.5 * (sym + sym.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw estimation_error("kernel_spectrum: eigendecomposition failed");
    }

    SpectralDecomposition out{grid, Eigen::VectorXd(m), Eigen::MatrixXd(m, m)};
    Eigen::VectorXd inv_sqrt_w = sqrt_w.cwiseInverse();
    for (int j = 0; j < m; ++j) {
        const int src = m - 1 - j;  // solver returns ascending order
        double lambda = solver.eigenvalues()[src];
        out.eigenvalues[j] = std::abs(lambda) <= 1e-12 ? 0.0 : lambda;
        out.eigenfunctions.col(j) = inv_sqrt_w.asDiagonal() * solver.eigenvectors().col(src);
    }
    return out;
}

SpectralDecomposition cov0_spectrum(const FunctionalSample& sample) {
    return kernel_spectrum(lag_cov_kernel(sample, 0));
}

int select_p(const SpectralDecomposition& spectrum, double share, int p_max) {
    if (share <= 0.0 || share >= 1.0) {
        throw parameter_error("select_p: share must lie in (0,1)");
    }
    const double positive_tol = 1e-10;
    double total = 0.0;
    int n_positive = 0;
    for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
        if (spectrum.eigenvalues[i] > positive_tol) {
            total += spectrum.eigenvalues[i];
            ++n_positive;
        }
    }
    if (n_positive == 0) {
        throw estimation_error("select_p: degenerate covariance, no positive eigenvalues");
    }
    const int cap = std::min(p_max, n_positive);
    double cum = 0.0;
    for (int p = 1; p <= cap; ++p) {
        cum += spectrum.eigenvalues[p - 1];
        if (cum >= share * total) return p;
    }
    return cap;
}

double hilbert_schmidt_norm(const KernelMatrix& kernel) {
    const Eigen::VectorXd& w = kernel.grid.weights();
    double acc = (w.asDiagonal() * kernel.values.cwiseAbs2() * w.asDiagonal()).sum();
    return std::sqrt(acc);
}

double kernel_trace(const KernelMatrix& kernel) {
    return kernel.values.diagonal().dot(kernel.grid.weights());
}

}  // namespace fdf
