#pragma once

#include <optional>

#include <Eigen/Core>

#include "fdf/grid.hpp"

namespace fdf {

/// N curves observed on a shared grid. Row n of values() is curve n.
/// Immutable after construction; centering and differencing return new samples.
class FunctionalSample {
public:
    FunctionalSample(Grid grid, Eigen::MatrixXd values);

    int n_curves() const { return static_cast<int>(values_.rows()); }
    const Grid& grid() const { return grid_; }
    const Eigen::MatrixXd& values() const { return values_; }
    Eigen::VectorXd curve(int n) const { return values_.row(n).transpose(); }

    bool centered() const { return centered_; }
    const std::optional<Eigen::VectorXd>& mean_curve() const { return mean_curve_; }

    /// Tags a sample known to have pointwise mean zero (e.g. population draws
    /// centered by construction) without recomputing anything.
    FunctionalSample& mark_centered() {
        centered_ = true;
        return *this;
    }

private:
    Grid grid_;
    Eigen::MatrixXd values_;
    bool centered_ = false;
    std::optional<Eigen::VectorXd> mean_curve_;

    friend FunctionalSample center(const FunctionalSample&);
};

/// Subtracts the pointwise sample mean and records it. Idempotent.
FunctionalSample center(const FunctionalSample& sample);

/// First differences: returns N-1 curves, row n = X_{n+1} - X_n.
FunctionalSample difference(const FunctionalSample& sample);

/// Cumulative sums along n (inverse of difference up to the dropped first curve).
FunctionalSample cumulative_sum(const FunctionalSample& sample);

}  // namespace fdf
