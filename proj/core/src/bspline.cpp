#include "fdf/bspline.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "fdf/errors.hpp"

namespace fdf {

BSplineBasis::BSplineBasis(int degree, std::vector<double> interior_knots)
    : degree_(degree),
      n_basis_(degree + 1 + static_cast<int>(interior_knots.size())),
      interior_(std::move(interior_knots)) {
    if (degree_ < 1) throw parameter_error("BSplineBasis: degree must be >= 1");
    for (std::size_t i = 0; i < interior_.size(); ++i) {
        if (interior_[i] <= 0.0 || interior_[i] >= 1.0) {
            throw parameter_error("BSplineBasis: interior knots must lie in (0,1)");
        }
        if (i > 0 && interior_[i] < interior_[i - 1]) {
            throw parameter_error("BSplineBasis: interior knots must be sorted");
        }
    }
    // Clamped knot vector: degree+1 copies of each boundary.
    knots_.assign(degree_ + 1, 0.0);
    knots_.insert(knots_.end(), interior_.begin(), interior_.end());
    knots_.insert(knots_.end(), degree_ + 1, 1.0);
}

BSplineBasis BSplineBasis::cubic(int n_basis) {
    if (n_basis < 4) throw parameter_error("BSplineBasis::cubic: need n_basis >= 4");
    const int k = n_basis - 4;
    std::vector<double> interior(k);
    for (int i = 0; i < k; ++i) interior[i] = double(i + 1) / double(k + 1);
    return BSplineBasis(3, std::move(interior));
}

BSplineBasis BSplineBasis::cubic_from_quantiles(int n_basis, const Eigen::VectorXd& obs_points) {
    if (n_basis < 4) throw parameter_error("BSplineBasis::cubic_from_quantiles: need n_basis >= 4");
    const int k = n_basis - 4;
    if (k == 0) return BSplineBasis(3, {});
    std::vector<double> pts(obs_points.data(), obs_points.data() + obs_points.size());
    std::sort(pts.begin(), pts.end());
    std::vector<double> interior(k);
    const double last = double(pts.size()) - 1.0;
    for (int i = 0; i < k; ++i) {
        // Linear-interpolation quantile at probability (i+1)/(k+1).
        double pos = last * double(i + 1) / double(k + 1);
        auto lo = static_cast<std::size_t>(std::floor(pos));
        auto hi = std::min(lo + 1, pts.size() - 1);
        double frac = pos - double(lo);
        double q = pts[lo] * (1.0 - frac) + pts[hi] * frac;
        interior[i] = std::clamp(q, 1e-9, 1.0 - 1e-9);
    }
    // Coincident quantiles would create degenerate spans; nudge them apart.
    for (int i = 1; i < k; ++i) {
        if (interior[i] <= interior[i - 1]) interior[i] = interior[i - 1] + 1e-9;
    }
    return BSplineBasis(3, std::move(interior));
}

Eigen::VectorXd BSplineBasis::eval(double s) const {
    if (s < 0.0 || s > 1.0) {
        throw parameter_error("BSplineBasis::eval: point outside [0,1]");
    }
    const int d = degree_;
    // Locate the knot span [knots_[k], knots_[k+1]) containing s; s=1 falls in
    // the last nonvanishing span.
    int k = d;
    const int last_span = n_basis_ - 1;
    while (k < last_span && s >= knots_[k + 1]) ++k;

    // Cox-de Boor triangle for the d+1 basis functions alive on the span.
    std::vector<double> vals(d + 1, 0.0);
    vals[0] = 1.0;
    std::vector<double> left(d + 1), right(d + 1);
    for (int j = 1; j <= d; ++j) {
        left[j] = s - knots_[k + 1 - j];
        right[j] = knots_[k + j] - s;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            double denom = right[r + 1] + left[j - r];
            double term = denom != 0.0 ? vals[r] / denom : 0.0;
            vals[r] = saved + right[r + 1] * term;
            saved = left[j - r] * term;
        }
        vals[j] = saved;
    }

    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_basis_);
    for (int j = 0; j <= d; ++j) out[k - d + j] = vals[j];
    return out;
}

Eigen::MatrixXd BSplineBasis::design(const Eigen::VectorXd& points) const {
    Eigen::MatrixXd b(points.size(), n_basis_);
    for (Eigen::Index i = 0; i < points.size(); ++i) {
        b.row(i) = eval(points[i]).transpose();
    }
    return b;
}

FunctionalSample smooth_to_sample(const Eigen::VectorXd& obs_points,
                                  const Eigen::MatrixXd& obs_values,
                                  const BSplineBasis& basis,
                                  const Grid& target_grid) {
    if (obs_values.cols() != obs_points.size()) {
        throw dimension_error("smooth_to_sample: obs_values columns must match obs_points");
    }
    if (obs_points.size() < basis.n_basis()) {
        throw insufficient_data("smooth_to_sample: underdetermined fit, need q >= n_basis");
    }
    for (Eigen::Index i = 0; i < obs_points.size(); ++i) {
        if (obs_points[i] < 0.0 || obs_points[i] > 1.0) {
            throw parameter_error("smooth_to_sample: observation points must lie in [0,1]");
        }
    }

    Eigen::MatrixXd design = basis.design(obs_points);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < basis.n_basis()) {
        throw estimation_error("smooth_to_sample: rank-deficient design matrix");
    }
    // One least-squares solve for all curves at once: coefs is n_basis x N.
    Eigen::MatrixXd coefs = qr.solve(obs_values.transpose());
    Eigen::MatrixXd eval = basis.design(target_grid.points());
    return FunctionalSample(target_grid, (eval * coefs).transpose());
}

}  // namespace fdf
