#include <cmath>
#include <random>

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "fdf/covariance.hpp"
#include "fdf/errors.hpp"
#include "fdf/factor.hpp"
#include "fdf/lambda.hpp"

using namespace fdf;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Population kernels of a noiseless one-factor model with an AR(1) factor:
// gamma_h = a^|h| / (1 - a^2) * (loading tensor loading).
struct OneFactorKernels {
    KernelMatrix cov0;
    KernelMatrix longrun_excl0;
};

OneFactorKernels one_factor_population(const Grid& g, double a) {
    Eigen::VectorXd loading = std::sqrt(2.0) * (2.0 * kPi * g.points().array()).sin();
    Eigen::MatrixXd outer = loading * loading.transpose();
    double var = 1.0 / (1.0 - a * a);
    double offdiag_sum = 2.0 * a / ((1.0 - a) * (1.0 - a * a));  // sum of a^|h|/(1-a^2), h != 0
    return {KernelMatrix(g, var * outer), KernelMatrix(g, offdiag_sum * outer)};
}

FunctionalSample random_sample(int n, int m, unsigned seed) {
    Grid g = Grid::uniform(m);
    std::mt19937 engine(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd v(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) v(i, j) = gauss(engine);
    return center(FunctionalSample(g, v));
}
}  // namespace

TEST_CASE("analytic one-factor operator has eigenvalue 2a/(1-a)") {
    Grid g = Grid::uniform(101);
    const double a = 0.7;
    OneFactorKernels pop = one_factor_population(g, a);
    SpectralDecomposition spec0 = kernel_spectrum(pop.cov0);
    LambdaOperator op = build_lambda(pop.longrun_excl0, spec0, 1);

    const double expected = 2.0 * a / (1.0 - a);  // 14/3
    CHECK(op.S(0, 0) == doctest::Approx(expected).epsilon(1e-6));

    LoadingSet loadings = extract_loadings(op, 1);
    CHECK(loadings.eigenvalues[0] == doctest::Approx(expected).epsilon(1e-6));
    Eigen::VectorXd lead = loadings.curve(0);
    Eigen::VectorXd target = std::sqrt(2.0) * (2.0 * kPi * g.points().array()).sin();
    if (inner_product(lead, target, g) < 0.0) lead = -lead;
    CHECK((lead - target).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("zero long-run kernel gives zero operator") {
    FunctionalSample sample = random_sample(40, 21, 9);
    SpectralDecomposition spec0 = cov0_spectrum(sample);
    KernelMatrix zero(sample.grid(), Eigen::MatrixXd::Zero(21, 21));
    LambdaOperator op = build_lambda(zero, spec0, 4);
    CHECK(op.C.cwiseAbs().maxCoeff() == 0.0);
    CHECK(op.S.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("whitened matrix is symmetric and similar to C D^-1") {
    FunctionalSample sample = random_sample(80, 31, 21);
    LambdaOperator op = build_lambda(sample, 4.0, 6);

    CHECK((op.S - op.S.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((op.C - op.C.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(op.d.minCoeff() > 0.0);

    // Cross-check the spectrum against the raw nonsymmetric product C D^-1.
    Eigen::MatrixXd cd_inv = op.C * op.d.cwiseInverse().asDiagonal();
    Eigen::EigenSolver<Eigen::MatrixXd> raw(cd_inv);
    Eigen::VectorXd raw_real = raw.eigenvalues().real();
    CHECK(raw.eigenvalues().imag().cwiseAbs().maxCoeff() < 1e-10);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(op.S);
    Eigen::VectorXd a = raw_real;
    Eigen::VectorXd b = sym.eigenvalues();
    std::sort(a.data(), a.data() + a.size());
    std::sort(b.data(), b.data() + b.size());
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ill-conditioned inverses are refused") {
    Grid g = Grid::uniform(51);
    Eigen::VectorXd u = (2.0 * kPi * g.points().array()).sin();
    KernelMatrix rank1(g, u * u.transpose());
    SpectralDecomposition spec = kernel_spectrum(rank1);
    CHECK_THROWS_AS(build_lambda(rank1, spec, 2), estimation_error);
    CHECK_THROWS_AS(build_lambda(rank1, spec, 0), parameter_error);
}
