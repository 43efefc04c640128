#include "fdf/sample.hpp"

#include "fdf/errors.hpp"

namespace fdf {

FunctionalSample::FunctionalSample(Grid grid, Eigen::MatrixXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.cols() != grid_.size()) {
        throw dimension_error("FunctionalSample: values columns must match grid size");
    }
    if (values_.rows() < 1) {
        throw insufficient_data("FunctionalSample: need at least one curve");
    }
    if (!values_.allFinite()) {
        throw estimation_error("FunctionalSample: non-finite curve values");
    }
}

FunctionalSample center(const FunctionalSample& sample) {
    if (sample.n_curves() < 2) {
        throw insufficient_data("center: need at least 2 curves");
    }
    Eigen::VectorXd mean = sample.values().colwise().mean().transpose();
    FunctionalSample out(sample.grid(), sample.values().rowwise() - mean.transpose());
    out.centered_ = true;
    // The mean of the original data, so reconstruction can add it back.
    out.mean_curve_ = sample.mean_curve().has_value()
                          ? Eigen::VectorXd(*sample.mean_curve() + mean)
                          : mean;
    return out;
}

FunctionalSample difference(const FunctionalSample& sample) {
    const int n = sample.n_curves();
    if (n < 2) {
        throw insufficient_data("difference: need at least 2 curves");
    }
    Eigen::MatrixXd d = sample.values().bottomRows(n - 1) - sample.values().topRows(n - 1);
    return FunctionalSample(sample.grid(), std::move(d));
}

FunctionalSample cumulative_sum(const FunctionalSample& sample) {
    Eigen::MatrixXd out = sample.values();
    for (int n = 1; n < out.rows(); ++n) {
        out.row(n) += out.row(n - 1);
    }
    return FunctionalSample(sample.grid(), std::move(out));
}

}  // namespace fdf
