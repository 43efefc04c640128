#pragma once

#include <vector>

#include <Eigen/Core>

#include "fdf/sample.hpp"

namespace fdf {

/// Clamped B-spline basis on [0,1]. n_basis = interior knots + degree + 1;
/// the basis is a partition of unity on the whole domain.
class BSplineBasis {
public:
    BSplineBasis(int degree, std::vector<double> interior_knots);

    /// Cubic basis with n_basis functions and equally spaced interior knots.
    static BSplineBasis cubic(int n_basis);

    /// Interior knots at equally spaced quantiles of the observation points.
    static BSplineBasis cubic_from_quantiles(int n_basis, const Eigen::VectorXd& obs_points);

    int degree() const { return degree_; }
    int n_basis() const { return n_basis_; }
    const std::vector<double>& interior_knots() const { return interior_; }

    /// All basis function values at s in [0,1].
    Eigen::VectorXd eval(double s) const;

    /// Design matrix: rows are points, columns are basis functions.
    Eigen::MatrixXd design(const Eigen::VectorXd& points) const;

private:
    int degree_;
    int n_basis_;
    std::vector<double> interior_;
    std::vector<double> knots_;  // clamped knot vector
};

/// Per-row least-squares B-spline fit of discrete observations, evaluated on
/// target_grid. obs_values is N x q with q >= n_basis.
FunctionalSample smooth_to_sample(const Eigen::VectorXd& obs_points,
                                  const Eigen::MatrixXd& obs_values,
                                  const BSplineBasis& basis,
                                  const Grid& target_grid);

}  // namespace fdf
