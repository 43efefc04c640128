#pragma once

#include <vector>

#include <Eigen/Core>

#include "fdf/lambda.hpp"
#include "fdf/sample.hpp"

namespace fdf {

enum class BlockLabel { nonstationary, stationary };

/// Estimated factor loading curves, orthonormal under the grid quadrature.
/// Rows are ordered nonstationary block first, then within each block by
/// descending eigenvalue magnitude.
struct LoadingSet {
    Grid grid;
    Eigen::MatrixXd curves;       // K x m, row k = loading curve k
    Eigen::VectorXd eigenvalues;  // signed eigenvalue attached to each curve
    std::vector<BlockLabel> block_labels;

    int count() const { return static_cast<int>(curves.rows()); }
    Eigen::VectorXd curve(int k) const { return curves.row(k).transpose(); }
};

/// Candidate ranking. Magnitude ordering suits level spectra, where signal
/// eigenvalues of either sign dwarf a near-zero noise floor. After
/// differencing, the noise floor sits near -(1 - 1/b) while integrated
/// directions carry large positive eigenvalues, so signed ordering separates
/// them where magnitudes cannot.
enum class EigenOrdering { magnitude, signed_descending };

/// Eigenpairs of the whitened operator, mapped back to curves and
/// Gram-Schmidt orthonormalized in order. Returns k0 candidates sorted by the
/// requested ordering; ties keep the score-basis order.
LoadingSet extract_loadings(const LambdaOperator& op, int k0,
                            BlockLabel label = BlockLabel::stationary,
                            EigenOrdering ordering = EigenOrdering::magnitude);

/// Copy of the eigenvalue sequence re-sorted by descending magnitude, the
/// order the counting rules expect.
Eigen::VectorXd sorted_by_magnitude(const Eigen::VectorXd& alphas);

enum class ScreeVariant { elbow, literal };

/// Ratio-based factor count: argmin over i < k0 of |a_{i+1}|/|a_i|, ties to
/// the smallest i. Magnitudes below 1e-12 are clamped before the ratio.
int estimate_k_ratio(const Eigen::VectorXd& alphas, int k0);

/// Scree-based factor count. The default elbow variant takes the largest gap
/// |a_i| - |a_{i+1}|; the literal variant takes argmin |a_i| over the k0
/// candidates (which is k0 itself whenever the input is strictly sorted).
int estimate_k_scree(const Eigen::VectorXd& alphas, int k0,
                     ScreeVariant variant = ScreeVariant::elbow);

/// Factor trajectories: entry (n,k) = <X_n, loading_k> by quadrature.
Eigen::MatrixXd factor_scores(const FunctionalSample& sample, const LoadingSet& loadings);

/// Z_n = X_n - sum_k scores(n,k) loading_k: the series left after removing
/// the given (typically nonstationary) block.
FunctionalSample residual_series(const FunctionalSample& sample,
                                 const LoadingSet& loadings,
                                 const Eigen::MatrixXd& scores);

/// Rows of `curves` Gram-Schmidt orthonormalized in order under the grid
/// inner product, after first projecting out the rows of `fixed`.
Eigen::MatrixXd orthonormalize_rows(Eigen::MatrixXd curves, const Grid& grid,
                                    const Eigen::MatrixXd& fixed = Eigen::MatrixXd());

}  // namespace fdf
