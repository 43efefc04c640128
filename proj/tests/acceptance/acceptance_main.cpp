// Acceptance suite: end-to-end checks of the estimators, the Monte Carlo
// benchmark, the diagnostic tests, and the CLI pipeline. Each criterion
// prints one PASS/FAIL line; the process exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdf/bspline.hpp"
#include "fdf/fit.hpp"
#include "fdf/hypothesis.hpp"
#include "fdf/monte_carlo.hpp"
#include "fdf/rng.hpp"
#include "fdf/sim.hpp"

using namespace fdf;
using namespace fdf::sim;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Analytic one-factor operator: eigenvalue 2a/(1-a), loading sqrt(2) sin.
Outcome criterion_analytic_lambda() {
    Grid g = Grid::uniform(101);
    const double a = 0.7;
    Eigen::VectorXd loading = std::sqrt(2.0) * (2.0 * kPi * g.points().array()).sin();
    Eigen::MatrixXd outer = loading * loading.transpose();
    double var = 1.0 / (1.0 - a * a);
    double offdiag = 2.0 * a / ((1.0 - a) * (1.0 - a * a));
    SpectralDecomposition spec0 = kernel_spectrum(KernelMatrix(g, var * outer));
    LambdaOperator op = build_lambda(KernelMatrix(g, offdiag * outer), spec0, 1);

    const double expected = 2.0 * a / (1.0 - a);
    double eig_err = std::abs(op.S(0, 0) - expected);

    LoadingSet set = extract_loadings(op, 1);
    Eigen::VectorXd got = set.curve(0);
    if (inner_product(got, loading, g) < 0.0) got = -got;
    double load_err = (got - loading).cwiseAbs().maxCoeff();

    bool pass = eig_err <= 1e-6 && load_err <= 1e-3;
    return {pass, "eigenvalue err " + fmt(eig_err) + " (tol 1e-6), loading sup err " +
                      fmt(load_err) + " (tol 1e-3)"};
}

// ---------------------------------------------------------------------------
// 2. Long-run kernel of a simulated MA(1) approaches the analytic composition
//    A Gamma A*; the Hilbert-Schmidt error roughly halves from N=500 to 2000.
Outcome criterion_linear_process_identity() {
    Grid g = Grid::uniform(101);
    Eigen::VectorXd psi1 = std::sqrt(2.0) * (2.0 * kPi * g.points().array()).sin();
    Eigen::VectorXd psi2 = std::sqrt(2.0) * (2.0 * kPi * g.points().array()).cos();
    Eigen::MatrixXd a1 = 0.4 * psi1 * psi1.transpose() + 0.3 * psi2 * psi2.transpose();
    Eigen::MatrixXd bm(101, 101);
    for (int i = 0; i < 101; ++i)
        for (int j = 0; j < 101; ++j) bm(i, j) = std::min(g.point(i), g.point(j));
    LinearProcessSpec spec{{OperatorSpec{1.0, std::nullopt}, OperatorSpec{0.0, KernelMatrix(g, a1)}},
                           KernelMatrix(g, bm)};
    KernelMatrix target = linear_process_longrun(spec);

    double err_small = 0.0, err_large = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        auto hs_error = [&](int n) {
            FunctionalSample path = center(simulate_linear_process(spec, n, derive_seed(20000, s * 37 + n)));
            KernelMatrix est = longrun_kernel(path, select_bandwidth(n));
            return hilbert_schmidt_norm(KernelMatrix(g, est.values - target.values));
        };
        err_small += hs_error(500);
        err_large += hs_error(2000);
    }
    double ratio = err_large / err_small;
    bool pass = ratio >= 0.35 && ratio <= 0.65;
    return {pass, "HS error " + fmt(err_small / seeds) + " -> " + fmt(err_large / seeds) +
                      ", ratio " + fmt(ratio) + " (window [0.35, 0.65])"};
}

// Shared Monte Carlo runs for criteria 3 and 5.
std::map<int, SimResult>& n300_results() {
    static std::map<int, SimResult> cache;
    if (cache.empty()) {
        for (int model : {1, 2, 3, 4}) {
            SimConfig config;
            config.model_id = model;
            config.n = 300;
            config.reps = 200;
            config.master_seed = 20260601 + model;
            cache.emplace(model, run_monte_carlo(config));
        }
    }
    return cache;
}

// ---------------------------------------------------------------------------
// 3. Benchmark medians: the long-run estimator beats the lag-0 baseline for
//    models 1, 3, 4 on every loading; model 2's second loading stays within a
//    factor of two of the baseline.
Outcome criterion_benchmark_medians() {
    std::string detail;
    bool pass = true;
    for (int model : {1, 2, 3, 4}) {
        const SimResult& result = n300_results().at(model);
        int loadings = (model == 2 || model == 4) ? 2 : 1;
        for (int k = 0; k < loadings; ++k) {
            std::vector<double> fdf_v, pca_v;
            for (const RepRecord& row : result.rows) {
                if (!row.error.empty()) continue;
                if (row.fdf_ise[k] >= 0.0) fdf_v.push_back(row.fdf_ise[k]);
                if (row.pca_ise[k] >= 0.0) pca_v.push_back(row.pca_ise[k]);
            }
            double mf = median_of(fdf_v), mp = median_of(pca_v);
            if (!detail.empty()) detail += "; ";
            detail += "m" + std::to_string(model) + "/l" + std::to_string(k + 1) + " " +
                      fmt(mf) + " vs " + fmt(mp);
            if (model == 2 && k == 1) {
                double ratio = std::max(mf, mp) / std::min(mf, mp);
                if (!(ratio <= 2.0)) {
                    pass = false;
                    detail += " (medians differ by " + fmt(ratio) +
                              "x, outside the factor-2 equality window)";
                }
            } else if (model == 2 && k == 0) {
                // reported, not gated
            } else if (!(mf < mp)) {
                pass = false;
            }
        }
    }
    return {pass, detail};
}

// ---------------------------------------------------------------------------
// 4. Median ISE for model 1 strictly decreases over N = 200, 500, 1000.
Outcome criterion_ise_consistency() {
    std::vector<double> medians;
    for (int n : {200, 500, 1000}) {
        SimConfig config;
        config.model_id = 1;
        config.n = n;
        config.reps = 100;
        config.master_seed = 77000 + n;
        config.run_pca = false;
        SimResult result = run_monte_carlo(config);
        std::vector<double> v;
        for (const RepRecord& row : result.rows) {
            if (row.error.empty() && row.fdf_ise[0] >= 0.0) v.push_back(row.fdf_ise[0]);
        }
        medians.push_back(median_of(v));
    }
    bool pass = medians[0] > medians[1] && medians[1] > medians[2];
    return {pass, "medians " + fmt(medians[0]) + " > " + fmt(medians[1]) + " > " +
                      fmt(medians[2]) + " at N = 200, 500, 1000"};
}

// ---------------------------------------------------------------------------
// 5. Factor-count recovery at N = 300 by the ratio rule.
Outcome criterion_factor_counts() {
    auto proportion = [](const SimResult& result, const std::function<bool(const RepRecord&)>& ok) {
        int hits = 0, total = 0;
        for (const RepRecord& row : result.rows) {
            if (!row.error.empty()) continue;
            ++total;
            if (ok(row)) ++hits;
        }
        return double(hits) / double(total);
    };
    double p1 = proportion(n300_results().at(1),
                           [](const RepRecord& r) { return r.k_ratio == 1; });
    double p3 = proportion(n300_results().at(3),
                           [](const RepRecord& r) { return r.k_ratio == 1; });
    double p4 = proportion(n300_results().at(4),
                           [](const RepRecord& r) { return r.r_ratio == 1 && r.kmr_ratio == 1; });
    bool pass = p1 >= 0.95 && p3 >= 0.90 && p4 >= 0.80;
    return {pass, "model1 K=1: " + fmt(p1) + " (>=0.95); model3 K=1: " + fmt(p3) +
                      " (>=0.90); model4 (r,K-r)=(1,1): " + fmt(p4) + " (>=0.80)"};
}

// ---------------------------------------------------------------------------
// 6. Recovered nonstationary factor trajectories behave like I(1) paths.
Outcome criterion_i1_recovery() {
    int reject_level = 0, reject_diff = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
        auto [sample, truth] = simulate_model(3, 500, 101, derive_seed(6001, rep));
        FitOptions opts;
        opts.force_r = 1;
        opts.force_K = 1;
        FdfFit fit = fit_nonstationary(sample, opts);
        Eigen::VectorXd f = fit.factors.col(0);
        if (scalar_stationarity_test(f).p_value < 0.05) ++reject_level;
        Eigen::VectorXd df = f.tail(f.size() - 1) - f.head(f.size() - 1);
        if (scalar_stationarity_test(df).p_value < 0.05) ++reject_diff;
    }
    bool pass = reject_level >= 90 && reject_diff <= 10;
    return {pass, "level rejections " + std::to_string(reject_level) + "/100 (>=90), " +
                      "difference rejections " + std::to_string(reject_diff) + "/100 (<=10)"};
}

// ---------------------------------------------------------------------------
// 7. Size of the diagnostic tests under their nulls.
Outcome criterion_test_calibration() {
    int reject_stat = 0, reject_ind = 0;
    const int reps = 500;
    for (int rep = 0; rep < reps; ++rep) {
        FunctionalSample noise = gen_bm_noise(500, Grid::uniform(101), derive_seed(7001, rep));
        if (stationarity_test(noise).p_value < 0.05) ++reject_stat;
        if (independence_test(noise).p_value < 0.05) ++reject_ind;
    }
    double size_stat = reject_stat / double(reps);
    double size_ind = reject_ind / double(reps);
    bool pass = size_stat >= 0.02 && size_stat <= 0.09 && size_ind >= 0.02 && size_ind <= 0.09;
    return {pass, "stationarity size " + fmt(size_stat) + ", independence size " + fmt(size_ind) +
                      " (window [0.02, 0.09])"};
}

// ---------------------------------------------------------------------------
// 8. Structural invariants.
Outcome criterion_invariants() {
    std::string failures;

    // Orthonormality of a mixed-block loading set.
    auto [m4, t4] = simulate_model(4, 300, 101, 12);
    FitOptions opts;
    opts.force_K = 2;
    opts.force_r = 1;
    FdfFit fit = fit_nonstationary(m4, opts);
    double ortho_err = 0.0;
    for (int i = 0; i < fit.K_hat; ++i) {
        for (int j = 0; j <= i; ++j) {
            double ip = inner_product(fit.loadings.curve(i), fit.loadings.curve(j),
                                      fit.loadings.grid);
            ortho_err = std::max(ortho_err, std::abs(ip - (i == j ? 1.0 : 0.0)));
        }
    }
    if (ortho_err > 1e-8) failures += "orthonormality " + fmt(ortho_err) + "; ";

    // Long-run kernel symmetry.
    FunctionalSample centered = center(m4);
    KernelMatrix cb = longrun_minus_lag0(centered, 7.0);
    double sym_err = (cb.values - cb.values.transpose()).cwiseAbs().maxCoeff();
    if (sym_err > 1e-12) failures += "cb symmetry " + fmt(sym_err) + "; ";

    // Lag-0 kernel positive semidefinite.
    SpectralDecomposition spec0 = cov0_spectrum(centered);
    if (spec0.eigenvalues.minCoeff() < -1e-10 * spec0.eigenvalues.maxCoeff()) {
        failures += "cov0 not PSD; ";
    }

    // B-spline partition of unity at 1000 points.
    BSplineBasis basis = BSplineBasis::cubic(15);
    std::mt19937_64 engine = make_engine(55);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double unity_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        unity_err = std::max(unity_err, std::abs(basis.eval(unif(engine)).sum() - 1.0));
    }
    if (unity_err > 1e-12) failures += "partition of unity " + fmt(unity_err) + "; ";

    // Reconstruction residuals are quadrature-orthogonal to the loadings.
    double resid_err = 0.0;
    for (int n : {0, 150, 299}) {
        Eigen::VectorXd resid = m4.curve(n) - reconstruct(fit, n);
        for (int k = 0; k < fit.K_hat; ++k) {
            resid_err = std::max(resid_err, std::abs(inner_product(
                                                resid, fit.loadings.curve(k), m4.grid())));
        }
    }
    if (resid_err > 1e-10) failures += "residual orthogonality " + fmt(resid_err) + "; ";

    // Monte Carlo determinism under repeated seeds and different worker counts.
    SimConfig config;
    config.model_id = 1;
    config.n = 120;
    config.m = 51;
    config.reps = 3;
    config.master_seed = 99;
    SimResult a = run_monte_carlo(config);
    config.workers = 3;
    SimResult b = run_monte_carlo(config);
    for (int i = 0; i < 3; ++i) {
        if (a.rows[i].fdf_ise[0] != b.rows[i].fdf_ise[0] ||
            a.rows[i].pca_ise[0] != b.rows[i].pca_ise[0] ||
            a.rows[i].k_ratio != b.rows[i].k_ratio) {
            failures += "monte carlo determinism; ";
            break;
        }
    }

    return {failures.empty(), failures.empty() ? "orthonormality, symmetry, PSD, partition of "
                                                 "unity, residual orthogonality, determinism"
                                               : failures};
}

// ---------------------------------------------------------------------------
// 9. Yield-curve style pipeline through the CLI, on a synthetic level/slope/
//    curvature fixture (the published data set is not redistributed; point
//    FDF_YIELD_CSV at a real export to run the same checks against it).
int sign_changes(const std::vector<double>& curve) {
    double peak = 0.0;
    for (double v : curve) peak = std::max(peak, std::abs(v));
    int changes = 0, last = 0;
    for (double v : curve) {
        if (std::abs(v) < 0.05 * peak) continue;
        int sign = v > 0 ? 1 : -1;
        if (last != 0 && sign != last) ++changes;
        last = sign;
    }
    return changes;
}

void write_synthetic_yields(const std::string& path) {
    const int n = 366;
    const double maturities[8] = {0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0};
    Eigen::VectorXd x(8);
    for (int j = 0; j < 8; ++j) x[j] = (maturities[j] - 0.25) / (10.0 - 0.25);

    // Orthonormal level/slope/curvature shapes (shifted Legendre).
    Eigen::MatrixXd shapes(3, 8);
    for (int j = 0; j < 8; ++j) {
        shapes(0, j) = 1.0;
        shapes(1, j) = std::sqrt(3.0) * (2.0 * x[j] - 1.0);
        shapes(2, j) = std::sqrt(5.0) * (6.0 * x[j] * x[j] - 6.0 * x[j] + 1.0);
    }

    Eigen::MatrixXd factors(n, 3);
    factors.col(0) = 5.0 + 0.6 * gen_i1(n, 0.35, 101).array();  // integrated level
    factors.col(1) = 0.5 * gen_ar1(n, 0.8, 102);
    factors.col(2) = 0.25 * gen_ar1(n, 0.7, 103);

    std::mt19937_64 engine = make_engine(104);
    std::normal_distribution<double> gauss(0.0, 0.05);
    std::ofstream out(path, std::ios::binary);
    out << "s";
    for (double m : maturities) out << ',' << m;
    out << '\n';
    for (int i = 0; i < n; ++i) {
        out << (i + 1);
        for (int j = 0; j < 8; ++j) {
            double v = factors.row(i).dot(shapes.col(j)) + gauss(engine);
            char cell[32];
            std::snprintf(cell, sizeof(cell), "%.10g", v);
            out << ',' << cell;
        }
        out << '\n';
    }
}

Outcome run_yield_pipeline(const std::string& binary, const std::string& csv,
                           const std::string& out_dir) {
    std::string cmd = binary + " fit --input " + csv +
                      " --mode auto --k0 8 --force-k 3 --force-r 1 --out " + out_dir +
                      " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (code != 0) return {false, "fit exited with code " + std::to_string(code)};

    std::ifstream in(fs::path(out_dir) / "report.json");
    if (!in) return {false, "missing report.json"};
    json report = json::parse(in);

    if (report["mode"] != "nonstationary") return {false, "auto mode did not route to Algorithm 2"};
    double p_stat = report["tests"]["stationarity"]["p_value"].get<double>();
    if (!(p_stat < 0.05)) return {false, "stationarity p = " + fmt(p_stat) + " not < 0.05"};
    if (report["K_hat"] != 3 || report["r_hat"] != 1) {
        return {false, "unexpected (r, K) = (" + std::to_string(int(report["r_hat"])) + ", " +
                           std::to_string(int(report["K_hat"])) + ")"};
    }

    std::vector<int> changes;
    for (const auto& curve : report["loadings"]["curves"]) {
        changes.push_back(sign_changes(curve.get<std::vector<double>>()));
    }
    bool shapes_ok = changes.size() == 3 && changes[0] == 0 && changes[1] == 1 && changes[2] == 2;
    std::string detail = "stationarity p " + fmt(p_stat) + "; sign changes " +
                         std::to_string(changes[0]) + "/" + std::to_string(changes[1]) + "/" +
                         std::to_string(changes[2]) + " (want 0/1/2)";
    return {shapes_ok, detail};
}

Outcome criterion_yield_pipeline() {
    const char* binary = std::getenv("FDF_BIN");
    if (!binary) return {true, "SKIPPED: FDF_BIN not set (optional criterion)"};

    fs::path dir = fs::temp_directory_path() / "fdf_acceptance_yields";
    fs::create_directories(dir);
    write_synthetic_yields((dir / "synthetic.csv").string());
    Outcome synthetic = run_yield_pipeline(binary, (dir / "synthetic.csv").string(),
                                           (dir / "fit").string());
    synthetic.detail = "synthetic fixture: " + synthetic.detail;

    if (const char* real_csv = std::getenv("FDF_YIELD_CSV")) {
        Outcome real = run_yield_pipeline(binary, real_csv, (dir / "fit_real").string());
        synthetic.pass = synthetic.pass && real.pass;
        synthetic.detail += " | user data: " + real.detail;
    }
    return synthetic;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {1, "analytic one-factor operator", criterion_analytic_lambda},
        {2, "linear-process long-run identity", criterion_linear_process_identity},
        {3, "benchmark medians vs PCA baseline", criterion_benchmark_medians},
        {4, "ISE consistency in N", criterion_ise_consistency},
        {5, "factor-count recovery", criterion_factor_counts},
        {6, "I(1) factor trajectory recovery", criterion_i1_recovery},
        {7, "diagnostic test calibration", criterion_test_calibration},
        {8, "structural invariants", criterion_invariants},
        {9, "yield-curve pipeline (synthetic fixture)", criterion_yield_pipeline},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = entry.fn();
        } catch (const std::exception& err) {
            outcome = {false, std::string("exception: ") + err.what()};
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d (%s): %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL",
                    entry.id, entry.name, outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
