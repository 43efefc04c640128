#include "fdf/lambda.hpp"

#include <cmath>

#include "fdf/errors.hpp"

namespace fdf {

LambdaOperator build_lambda(const KernelMatrix& longrun_excl0,
                            const SpectralDecomposition& cov0,
                            int p) {
    if (!longrun_excl0.grid.same_as(cov0.grid)) {
        throw dimension_error("build_lambda: kernel and spectrum grids differ");
    }
    if (p < 1 || p > cov0.eigenvalues.size()) {
        throw parameter_error("build_lambda: p out of range");
    }
    for (int k = 0; k < p; ++k) {
        if (cov0.eigenvalues[k] <= 1e-10) {
            throw estimation_error(
                "build_lambda: ill-conditioned inverse, covariance eigenvalue too small");
        }
    }

    const Grid& grid = longrun_excl0.grid;
    Eigen::MatrixXd basis = cov0.eigenfunctions.leftCols(p);
    Eigen::VectorXd d = cov0.eigenvalues.head(p);

    // C(k,l) = <v_k, Chat v_l> under quadrature, Chat the operator with the
    // lag-0-excluded long-run kernel; symmetrize to scrub roundoff.
    Eigen::MatrixXd wb = grid.weights().asDiagonal() * basis;
    Eigen::MatrixXd c = wb.transpose() * longrun_excl0.values * wb;
    c = 0.5 * (c + c.transpose());

    Eigen::VectorXd inv_sqrt_d = d.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd s = inv_sqrt_d.asDiagonal() * c * inv_sqrt_d.asDiagonal();
    s = 0.5 * (s + s.transpose());

    return LambdaOperator{grid, p, std::move(basis), std::move(d), std::move(c), std::move(s)};
}

LambdaOperator build_lambda(const FunctionalSample& sample, double b, int p) {
    return build_lambda(longrun_minus_lag0(sample, b), cov0_spectrum(sample), p);
}

}  // namespace fdf
