#pragma once

#include <Eigen/Core>

#include "fdf/errors.hpp"

namespace fdf {

/// Shared quadrature grid on [0,1]: sorted abscissae plus trapezoidal weights.
/// Weights sum to the domain length (1), so weighted sums approximate
/// integrals over [0,1].
class Grid {
public:
    /// Empty placeholder; every factory-made grid has at least 3 points.
    Grid() = default;

    /// Uniform grid with m points, 0 and 1 included.
    static Grid uniform(int m);

    /// Grid over arbitrary strictly increasing points spanning [0,1].
    static Grid from_points(Eigen::VectorXd points);

    int size() const { return static_cast<int>(points_.size()); }
    const Eigen::VectorXd& points() const { return points_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    double point(int i) const { return points_[i]; }
    double weight(int i) const { return weights_[i]; }

    bool same_as(const Grid& other, double tol = 1e-12) const;

private:
    Grid(Eigen::VectorXd points, Eigen::VectorXd weights);

    Eigen::VectorXd points_;
    Eigen::VectorXd weights_;
};

/// Trapezoidal approximation of the L2 inner product of f and g on the grid.
double inner_product(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const Grid& grid);

/// Quadrature L2 norm, sqrt(<f, f>).
double l2_norm(const Eigen::VectorXd& f, const Grid& grid);

}  // namespace fdf
