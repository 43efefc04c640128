#include "fdf/grid.hpp"

#include <cmath>

namespace fdf {

namespace {

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& points) {
    const auto m = points.size();
    Eigen::VectorXd w(m);
    w[0] = 0.5 * (points[1] - points[0]);
    for (Eigen::Index i = 1; i + 1 < m; ++i) {
        w[i] = 0.5 * (points[i + 1] - points[i - 1]);
    }
    w[m - 1] = 0.5 * (points[m - 1] - points[m - 2]);
    return w;
}

}  // namespace

Grid::Grid(Eigen::VectorXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {}

Grid Grid::uniform(int m) {
    if (m < 3) throw parameter_error("Grid::uniform: need at least 3 points");
    Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(m, 0.0, 1.0);
    return Grid(p, trapezoid_weights(p));
}

Grid Grid::from_points(Eigen::VectorXd points) {
    const auto m = points.size();
    if (m < 3) throw parameter_error("Grid::from_points: need at least 3 points");
    for (Eigen::Index i = 1; i < m; ++i) {
        if (!(points[i] > points[i - 1])) {
            throw parameter_error("Grid::from_points: points must be strictly increasing");
        }
    }
    if (std::abs(points[0]) > 1e-12 || std::abs(points[m - 1] - 1.0) > 1e-12) {
        throw parameter_error("Grid::from_points: points must span [0,1]");
    }
    points[0] = 0.0;
    points[m - 1] = 1.0;
    Eigen::VectorXd w = trapezoid_weights(points);
    return Grid(std::move(points), std::move(w));
}

bool Grid::same_as(const Grid& other, double tol) const {
    if (size() != other.size()) return false;
    return (points_ - other.points_).cwiseAbs().maxCoeff() <= tol;
}

double inner_product(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const Grid& grid) {
    if (f.size() != grid.size() || g.size() != grid.size()) {
        throw dimension_error("inner_product: vector length does not match grid");
    }
    return (f.array() * g.array() * grid.weights().array()).sum();
}

double l2_norm(const Eigen::VectorXd& f, const Grid& grid) {
    return std::sqrt(inner_product(f, f, grid));
}

}  // namespace fdf
