#include "fdf/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "fdf/errors.hpp"

namespace fdf {

Eigen::MatrixXd orthonormalize_rows(Eigen::MatrixXd curves, const Grid& grid,
                                    const Eigen::MatrixXd& fixed) {
    const Eigen::ArrayXd w = grid.weights().transpose().array();
    for (Eigen::Index i = 0; i < curves.rows(); ++i) {
        // Two passes of modified Gram-Schmidt keep orthogonality near machine
        // precision even for nearly dependent candidates.
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < fixed.rows(); ++j) {
                double coeff =
                    (curves.row(i).transpose().array() * fixed.row(j).transpose().array() * w)
                        .sum();
                curves.row(i) -= coeff * fixed.row(j);
            }
            for (Eigen::Index j = 0; j < i; ++j) {
                double coeff =
                    (curves.row(i).transpose().array() * curves.row(j).transpose().array() * w)
                        .sum();
                curves.row(i) -= coeff * curves.row(j);
            }
        }
        double norm = std::sqrt((curves.row(i).transpose().array().square() * w).sum());
        if (norm < 1e-12) {
            throw estimation_error("orthonormalize_rows: candidate collapsed to zero");
        }
        curves.row(i) /= norm;
    }
    return curves;
}

Eigen::VectorXd sorted_by_magnitude(const Eigen::VectorXd& alphas) {
    Eigen::VectorXd out = alphas;
    std::stable_sort(out.data(), out.data() + out.size(),
                     [](double a, double b) { return std::abs(a) > std::abs(b); });
    return out;
}

LoadingSet extract_loadings(const LambdaOperator& op, int k0, BlockLabel label,
                            EigenOrdering ordering) {
    if (k0 < 1 || k0 > op.p) {
        throw parameter_error("extract_loadings: need 1 <= k0 <= p");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.S);
    if (solver.info() != Eigen::Success) {
        throw estimation_error("extract_loadings: eigendecomposition failed");
    }

    std::vector<int> order(op.p);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    if (ordering == EigenOrdering::magnitude) {
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(ev[a]) > std::abs(ev[b]);
        });
    } else {
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return ev[a] > ev[b]; });
    }

    // Whitened eigenvectors map back through D^(1/2) into score coordinates.
    Eigen::VectorXd sqrt_d = op.d.cwiseSqrt();
    Eigen::MatrixXd candidates(k0, op.grid.size());
    Eigen::VectorXd alphas(k0);
    for (int i = 0; i < k0; ++i) {
        Eigen::VectorXd u = sqrt_d.asDiagonal() * solver.eigenvectors().col(order[i]);
        candidates.row(i) = (op.score_basis * u).transpose();
        alphas[i] = ev[order[i]];
    }
    candidates = orthonormalize_rows(std::move(candidates), op.grid);

    return LoadingSet{op.grid, std::move(candidates), std::move(alphas),
                      std::vector<BlockLabel>(k0, label)};
}

int estimate_k_ratio(const Eigen::VectorXd& alphas, int k0) {
    if (k0 < 2 || k0 > alphas.size()) {
        throw parameter_error("estimate_k_ratio: need 2 <= k0 <= number of eigenvalues");
    }
    int best = 1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 1; i < k0; ++i) {
        double denom = std::max(std::abs(alphas[i - 1]), 1e-12);
        double ratio = std::max(std::abs(alphas[i]), 1e-12) / denom;
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best = i;
        }
    }
    return best;
}

int estimate_k_scree(const Eigen::VectorXd& alphas, int k0, ScreeVariant variant) {
    if (k0 < 2 || k0 > alphas.size()) {
        throw parameter_error("estimate_k_scree: need 2 <= k0 <= number of eigenvalues");
    }
    if (variant == ScreeVariant::literal) {
        int best = 1;
        double smallest = std::abs(alphas[0]);
        for (int i = 1; i < k0; ++i) {
            if (std::abs(alphas[i]) < smallest) {
                smallest = std::abs(alphas[i]);
                best = i + 1;
            }
        }
        return best;
    }
    int best = 1;
    double best_gap = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < k0; ++i) {
        double gap = std::abs(alphas[i - 1]) - std::abs(alphas[i]);
        if (gap > best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    return best;
}

Eigen::MatrixXd factor_scores(const FunctionalSample& sample, const LoadingSet& loadings) {
    if (!sample.grid().same_as(loadings.grid)) {
        throw dimension_error("factor_scores: sample and loading grids differ");
    }
    return sample.values() * sample.grid().weights().asDiagonal() * loadings.curves.transpose();
}

FunctionalSample residual_series(const FunctionalSample& sample,
                                 const LoadingSet& loadings,
                                 const Eigen::MatrixXd& scores) {
    if (!sample.grid().same_as(loadings.grid)) {
        throw dimension_error("residual_series: sample and loading grids differ");
    }
    if (loadings.count() == 0) {
        return sample;
    }
    if (scores.rows() != sample.n_curves() || scores.cols() != loadings.count()) {
        throw dimension_error("residual_series: scores shape must be N x K");
    }
    return FunctionalSample(sample.grid(), sample.values() - scores * loadings.curves);
}

}  // namespace fdf
