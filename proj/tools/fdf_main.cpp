#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fdf/errors.hpp"
#include "fdf/version.hpp"
#include "io_csv.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Nonparametric functional dynamic factor model toolkit"};
    app.set_version_flag("--version", fdf::kVersion);
    app.require_subcommand(1);

    fdf::cli::FitCommandConfig fit_config;
    CLI::App* fit = app.add_subcommand("fit", "Fit a model to a wide-format CSV of curves");
    fit->add_option("--input", fit_config.input, "Input CSV path")->required();
    fit->add_option("--out", fit_config.out_dir, "Output directory")->required();
    fit->add_option("--mode", fit_config.mode, "auto | stationary | nonstationary")
        ->check(CLI::IsMember({"auto", "stationary", "nonstationary"}));
    fit->add_option("--k0", fit_config.k0, "Candidate loading count")->check(CLI::Range(2, 64));
    fit->add_option("--nbasis", fit_config.nbasis, "B-spline basis size for ingestion")
        ->check(CLI::Range(4, 256));
    fit->add_option("--grid", fit_config.grid_size, "Working grid size")
        ->check(CLI::Range(11, 4096));
    fit->add_option("--k-rule", fit_config.k_rule, "ratio | scree | scree-literal")
        ->check(CLI::IsMember({"ratio", "scree", "scree-literal"}));
    fit->add_option("--p-share", fit_config.p_share, "Cumulative eigenvalue share for p")
        ->check(CLI::Range(0.01, 0.9999));
    double bandwidth = 0.0;
    CLI::Option* bw = fit->add_option("--bandwidth", bandwidth, "Bartlett bandwidth override");
    int force_k = 0, force_r = 0;
    CLI::Option* fk = fit->add_option("--force-k", force_k, "Pin the total factor count");
    CLI::Option* fr = fit->add_option("--force-r", force_r, "Pin the nonstationary factor count");
    fit->add_option("--seed", fit_config.seed, "Seed for Monte Carlo test null draws");
    fit->add_option("--maturity-spacing", fit_config.maturity_spacing,
                    "Rescale observation points by calendar value or by rank")
        ->check(CLI::IsMember({"calendar", "rank"}));

    fdf::cli::SimulateCommandConfig sim_config;
    CLI::App* simulate = app.add_subcommand("simulate", "Run the Monte Carlo benchmark");
    simulate->add_option("--model", sim_config.model, "Benchmark model id")
        ->required()
        ->check(CLI::Range(1, 4));
    simulate->add_option("--n", sim_config.n, "Sample size")->check(CLI::Range(50, 1000000));
    simulate->add_option("--reps", sim_config.reps, "Replication count")
        ->check(CLI::Range(1, 1000000));
    simulate->add_option("--seed", sim_config.seed, "Master seed");
    simulate->add_option("--grid", sim_config.grid_size, "Grid size")->check(CLI::Range(11, 4096));
    simulate->add_option("--k0", sim_config.k0, "Candidate loading count")
        ->check(CLI::Range(2, 64));
    simulate->add_option("--noise-scale", sim_config.noise_scale, "Noise scale");
    simulate->add_option("--estimators", sim_config.estimators, "Comma list: fdf,pca");
    simulate->add_option("--workers", sim_config.workers,
                         "Worker threads (0: FDF_WORKERS env or hardware)");
    simulate->add_option("--out", sim_config.out_dir, "Output directory")->required();

    fdf::cli::ReportCommandConfig report_config;
    CLI::App* report = app.add_subcommand("report", "Summarize a results.csv");
    report->add_option("--input", report_config.input, "results.csv path")->required();
    report->add_option("--out", report_config.out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*bw) fit_config.bandwidth = bandwidth;
    if (*fk) fit_config.force_k = force_k;
    if (*fr) fit_config.force_r = force_r;

    try {
        if (fit->parsed()) return fdf::cli::cmd_fit(fit_config);
        if (simulate->parsed()) return fdf::cli::cmd_simulate(sim_config);
        if (report->parsed()) return fdf::cli::cmd_report(report_config);
    } catch (const fdf::estimation_error& e) {
        std::cerr << "estimation error: " << e.what() << '\n';
        return 3;
    } catch (const fdf::cli::csv_parse_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
