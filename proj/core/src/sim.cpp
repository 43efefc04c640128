#include "fdf/sim.hpp"

#include <cmath>

#include "fdf/errors.hpp"
#include "fdf/rng.hpp"

namespace fdf::sim {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

bool is_uniform(const Grid& grid) {
    const Eigen::VectorXd& p = grid.points();
    const double step = p[1] - p[0];
    for (Eigen::Index i = 1; i < p.size(); ++i) {
        if (std::abs(p[i] - p[i - 1] - step) > 1e-12) return false;
    }
    return true;
}

}  // namespace

Eigen::VectorXd gen_ar1(int n, double a, std::uint64_t seed) {
    if (std::abs(a) >= 1.0) throw parameter_error("gen_ar1: need |a| < 1");
    if (n < 1) throw parameter_error("gen_ar1: need n >= 1");
    std::mt19937_64 engine = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd f(n);
    double prev = gauss(engine) / std::sqrt(1.0 - a * a);
    for (int i = 0; i < n; ++i) {
        prev = a * prev + gauss(engine);
        f[i] = prev;
    }
    return f;
}

Eigen::VectorXd gen_i1(int n, double phi, std::uint64_t seed) {
    if (std::abs(phi) >= 1.0) throw parameter_error("gen_i1: need |phi| < 1");
    Eigen::VectorXd increments = gen_ar1(n, phi, seed);
    for (int i = 1; i < n; ++i) increments[i] += increments[i - 1];
    return increments;
}

FunctionalSample gen_bm_noise(int n, const Grid& grid, std::uint64_t seed) {
    if (!is_uniform(grid)) throw parameter_error("gen_bm_noise: grid must be uniform");
    if (n < 1) throw parameter_error("gen_bm_noise: need n >= 1");
    const int m = grid.size();
    const double sqrt_step = std::sqrt(1.0 / double(m - 1));
    std::mt19937_64 engine = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd values(n, m);
    for (int i = 0; i < n; ++i) {
        values(i, 0) = 0.0;
        for (int j = 1; j < m; ++j) {
            values(i, j) = values(i, j - 1) + sqrt_step * gauss(engine);
        }
    }
    return FunctionalSample(grid, std::move(values));
}

std::pair<FunctionalSample, ModelTruth> simulate_model(int model_id, int n, int m,
                                                       std::uint64_t seed,
                                                       double noise_scale) {
    if (model_id < 1 || model_id > 4) throw parameter_error("simulate_model: model_id must be 1..4");
    if (n < 2) throw parameter_error("simulate_model: need n >= 2");

    Grid grid = Grid::uniform(m);
    Eigen::VectorXd sine = (kTwoPi * grid.points().array()).sin();
    Eigen::VectorXd cosine = (kTwoPi * grid.points().array()).cos();

    ModelTruth truth;
    switch (model_id) {
        case 1:
            truth.K = 1;
            truth.r = 0;
            truth.factors = gen_ar1(n, 0.7, derive_seed(seed, 1));
            truth.loadings = sine.transpose();
            break;
        case 2:
            truth.K = 2;
            truth.r = 0;
            truth.factors.resize(n, 2);
            truth.factors.col(0) = gen_ar1(n, 0.8, derive_seed(seed, 1));
            truth.factors.col(1) = gen_ar1(n, -0.5, derive_seed(seed, 2));
            truth.loadings.resize(2, m);
            truth.loadings.row(0) = sine.transpose();
            truth.loadings.row(1) = cosine.transpose();
            break;
        case 3:
            truth.K = 1;
            truth.r = 1;
            truth.factors = gen_i1(n, 0.5, derive_seed(seed, 1));
            truth.loadings = sine.transpose();
            break;
        case 4:
            truth.K = 2;
            truth.r = 1;
            truth.factors.resize(n, 2);
            truth.factors.col(0) = gen_i1(n, 0.7, derive_seed(seed, 1));
            truth.factors.col(1) = gen_ar1(n, 0.5, derive_seed(seed, 2));
            truth.loadings.resize(2, m);
            truth.loadings.row(0) = sine.transpose();
            truth.loadings.row(1) = cosine.transpose();
            break;
    }
    Eigen::MatrixXd values = truth.factors * truth.loadings;
    if (noise_scale != 0.0) {
        values += noise_scale * gen_bm_noise(n, grid, derive_seed(seed, 3)).values();
    }
    return {FunctionalSample(grid, std::move(values)), std::move(truth)};
}

double ise(const Eigen::VectorXd& true_loading, const Eigen::VectorXd& est_loading,
           const Grid& grid) {
    double norm_true = l2_norm(true_loading, grid);
    double norm_est = l2_norm(est_loading, grid);
    if (norm_true < 1e-12 || norm_est < 1e-12) {
        throw parameter_error("ise: zero-norm loading");
    }
    Eigen::VectorXd lt = true_loading / norm_true;
    Eigen::VectorXd le = est_loading / norm_est;
    double plus = inner_product(lt - le, lt - le, grid);
    Eigen::VectorXd sum = lt + le;
    double minus = inner_product(sum, sum, grid);
    return std::min(plus, minus);
}

KernelMatrix linear_process_longrun(const LinearProcessSpec& spec) {
    const Grid& grid = spec.innovation_cov.grid;
    double ident = 0.0;
    Eigen::MatrixXd ker = Eigen::MatrixXd::Zero(grid.size(), grid.size());
    bool has_kernel = false;
    for (const OperatorSpec& op : spec.coefficients) {
        ident += op.identity;
        if (op.kernel) {
            if (!op.kernel->grid.same_as(grid)) {
                throw dimension_error("linear_process_longrun: coefficient grid mismatch");
            }
            ker += op.kernel->values;
            has_kernel = true;
        }
    }

    const Eigen::MatrixXd& gamma = spec.innovation_cov.values;
    Eigen::MatrixXd out = ident * ident * gamma;
    if (has_kernel) {
        Eigen::MatrixXd w = grid.weights().asDiagonal();
        Eigen::MatrixXd kw_gamma = ker.transpose() * w * gamma;  // kernel of Gamma after A*
        out += ident * kw_gamma + ident * kw_gamma.transpose() + kw_gamma * w * ker;
    }
    return KernelMatrix(grid, std::move(out));
}

FunctionalSample simulate_linear_process(const LinearProcessSpec& spec, int n,
                                         std::uint64_t seed) {
    if (n < 1) throw parameter_error("simulate_linear_process: need n >= 1");
    if (spec.coefficients.empty()) {
        throw parameter_error("simulate_linear_process: empty coefficient sequence");
    }
    const Grid& grid = spec.innovation_cov.grid;
    const int m = grid.size();
    const int lags = static_cast<int>(spec.coefficients.size());

    // Gaussian innovations through the spectral expansion of their covariance.
    SpectralDecomposition eps_spec = kernel_spectrum(spec.innovation_cov);
    int kept = 0;
    while (kept < eps_spec.eigenvalues.size() && eps_spec.eigenvalues[kept] > 1e-12) ++kept;
    if (kept == 0) throw estimation_error("simulate_linear_process: degenerate innovation covariance");
    Eigen::MatrixXd mix = eps_spec.eigenfunctions.leftCols(kept) *
                          eps_spec.eigenvalues.head(kept).cwiseSqrt().asDiagonal();

    std::mt19937_64 engine = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd innovations(n + lags - 1, m);
    Eigen::VectorXd xi(kept);
    for (int i = 0; i < innovations.rows(); ++i) {
        for (int k = 0; k < kept; ++k) xi[k] = gauss(engine);
        innovations.row(i) = (mix * xi).transpose();
    }

    Eigen::VectorXd w = grid.weights();
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, m);
    for (int j = 0; j < lags; ++j) {
        const OperatorSpec& op = spec.coefficients[j];
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd eps = innovations.row(i + lags - 1 - j).transpose();
            if (op.identity != 0.0) values.row(i) += op.identity * eps.transpose();
            if (op.kernel) {
                values.row(i) += (op.kernel->values.transpose() * w.asDiagonal() * eps).transpose();
            }
        }
    }
    return FunctionalSample(grid, std::move(values));
}

}  // namespace fdf::sim
