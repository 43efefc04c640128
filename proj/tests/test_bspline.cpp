#include <cmath>
#include <random>

#include <doctest.h>

#include <Eigen/LU>

#include "fdf/bspline.hpp"
#include "fdf/errors.hpp"

using namespace fdf;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("basis bookkeeping") {
    BSplineBasis b = BSplineBasis::cubic(15);
    CHECK(b.degree() == 3);
    CHECK(b.n_basis() == 15);
    CHECK(int(b.interior_knots().size()) == 15 - 3 - 1);
    CHECK_THROWS_AS(BSplineBasis::cubic(3), parameter_error);
    CHECK_THROWS_AS(b.eval(-0.01), parameter_error);
    CHECK_THROWS_AS(b.eval(1.01), parameter_error);
}

TEST_CASE("partition of unity at random points") {
    BSplineBasis b = BSplineBasis::cubic(15);
    std::mt19937 engine(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Eigen::VectorXd vals = b.eval(unif(engine));
        CHECK(vals.minCoeff() >= 0.0);
        worst = std::max(worst, std::abs(vals.sum() - 1.0));
    }
    // Endpoints too.
    worst = std::max(worst, std::abs(b.eval(0.0).sum() - 1.0));
    worst = std::max(worst, std::abs(b.eval(1.0).sum() - 1.0));
    CHECK(worst <= 1e-12);
}

TEST_CASE("no interior knots gives the Bernstein basis") {
    BSplineBasis b(3, {});
    Eigen::VectorXd at0 = b.eval(0.0);
    CHECK(at0[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(at0.tail(3).cwiseAbs().maxCoeff() < 1e-14);

    Eigen::VectorXd at_half = b.eval(0.5);
    CHECK(at_half[0] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(at_half[1] == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(at_half[2] == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(at_half[3] == doctest::Approx(0.125).epsilon(1e-12));

    Eigen::VectorXd at1 = b.eval(1.0);
    CHECK(at1[3] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("smoothing reproduces curves in the basis span") {
    Grid target = Grid::uniform(101);
    Eigen::VectorXd obs = Eigen::VectorXd::LinSpaced(8, 0.0, 1.0);

    // A cubic polynomial lies in the span of any cubic basis.
    auto poly = [](double s) { return 1.0 - 2.0 * s + 0.5 * s * s + 3.0 * s * s * s; };
    Eigen::MatrixXd rows(1, 8);
    for (int j = 0; j < 8; ++j) rows(0, j) = poly(obs[j]);

    BSplineBasis basis(3, {});
    FunctionalSample fitted = smooth_to_sample(obs, rows, basis, target);
    double worst = 0.0;
    for (int j = 0; j < 101; ++j) {
        worst = std::max(worst, std::abs(fitted.values()(0, j) - poly(target.point(j))));
    }
    CHECK(worst < 1e-8);

    Eigen::MatrixXd constant_row = Eigen::MatrixXd::Constant(1, 8, 4.2);
    FunctionalSample flat = smooth_to_sample(obs, constant_row, basis, target);
    CHECK((flat.values().array() - 4.2).abs().maxCoeff() < 1e-10);

    CHECK_THROWS_AS(smooth_to_sample(obs, rows, BSplineBasis::cubic(15), target),
                    insufficient_data);

    // Coincident observation points leave the design rank-deficient.
    Eigen::VectorXd stuck = Eigen::VectorXd::Constant(8, 0.5);
    CHECK_THROWS_AS(smooth_to_sample(stuck, rows, basis, target), estimation_error);
}

TEST_CASE("richer basis fits noisy data at least as well, against a normal-equations oracle") {
    const int q = 50;
    Eigen::VectorXd obs = Eigen::VectorXd::LinSpaced(q, 0.0, 1.0);
    std::mt19937 engine(2024);
    std::normal_distribution<double> gauss(0.0, 0.1);
    Eigen::MatrixXd row(1, q);
    for (int j = 0; j < q; ++j) row(0, j) = std::sin(2.0 * kPi * obs[j]) + gauss(engine);

    Grid obs_grid = Grid::from_points(obs);

    auto fit_rss = [&](int n_basis) {
        BSplineBasis basis = BSplineBasis::cubic(n_basis);
        FunctionalSample fit = smooth_to_sample(obs, row, basis, obs_grid);
        return (fit.values().row(0) - row.row(0)).squaredNorm();
    };

    // Independent oracle: solve the normal equations directly.
    auto oracle_rss = [&](int n_basis) {
        BSplineBasis basis = BSplineBasis::cubic(n_basis);
        Eigen::MatrixXd design = basis.design(obs);
        Eigen::VectorXd coef =
            (design.transpose() * design).lu().solve(design.transpose() * row.row(0).transpose());
        return (design * coef - row.row(0).transpose()).squaredNorm();
    };

    double rss15 = fit_rss(15);
    double rss4 = fit_rss(4);
    CHECK(rss15 == doctest::Approx(oracle_rss(15)).epsilon(1e-8));
    CHECK(rss4 == doctest::Approx(oracle_rss(4)).epsilon(1e-8));
    CHECK(rss15 < rss4);
}

TEST_CASE("quantile knots stay inside the domain and sorted") {
    std::mt19937 engine(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd pts(40);
    for (int i = 0; i < 40; ++i) pts[i] = unif(engine);
    BSplineBasis b = BSplineBasis::cubic_from_quantiles(10, pts);
    REQUIRE(int(b.interior_knots().size()) == 6);
    for (std::size_t i = 0; i < b.interior_knots().size(); ++i) {
        CHECK(b.interior_knots()[i] > 0.0);
        CHECK(b.interior_knots()[i] < 1.0);
        if (i > 0) CHECK(b.interior_knots()[i] > b.interior_knots()[i - 1]);
    }
}
