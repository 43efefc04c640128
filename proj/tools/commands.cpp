#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <json.hpp>

#include "fdf/bspline.hpp"
#include "fdf/fit.hpp"
#include "fdf/monte_carlo.hpp"
#include "fdf/version.hpp"
#include "io_csv.hpp"
#include "svg.hpp"

namespace fdf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

KRule parse_k_rule(const std::string& rule) {
    if (rule == "ratio") return KRule::ratio;
    if (rule == "scree") return KRule::scree;
    if (rule == "scree-literal") return KRule::scree_literal;
    throw std::invalid_argument("unknown k-rule: " + rule);
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out.push_back(vector_to_json(m.row(i).transpose()));
    }
    return out;
}

json test_to_json(const std::optional<TestRecord>& record) {
    if (!record) return nullptr;
    return json{{"statistic", record->statistic},
                {"p_value", record->p_value},
                {"method", record->method},
                {"lag_horizon", record->lag_horizon},
                {"proj_dim", record->proj_dim}};
}

// Ingested functional sample plus the original observation coordinates.
struct Ingested {
    FunctionalSample sample;
    Eigen::VectorXd raw_points;
    std::vector<std::string> row_labels;
    bool smoothed = false;
    int nbasis_used = 0;
};

Ingested ingest(const FitCommandConfig& config) {
    WideTable table = read_wide_csv(config.input);
    const int q = static_cast<int>(table.points.size());

    Eigen::VectorXd rescaled(q);
    if (config.maturity_spacing == "rank") {
        for (int j = 0; j < q; ++j) rescaled[j] = q == 1 ? 0.0 : double(j) / double(q - 1);
    } else if (config.maturity_spacing == "calendar") {
        double lo = table.points[0], hi = table.points[q - 1];
        if (hi <= lo) throw std::invalid_argument("degenerate observation-point range");
        for (int j = 0; j < q; ++j) rescaled[j] = (table.points[j] - lo) / (hi - lo);
    } else {
        throw std::invalid_argument("unknown maturity spacing: " + config.maturity_spacing);
    }

    Grid target = Grid::uniform(config.grid_size);

    // Pass observations through when they already sit on the target grid.
    if (q == config.grid_size) {
        bool on_grid = true;
        for (int j = 0; j < q; ++j) {
            if (std::abs(rescaled[j] - target.point(j)) > 1e-9) {
                on_grid = false;
                break;
            }
        }
        if (on_grid) {
            return Ingested{FunctionalSample(target, table.values), table.points,
                            table.row_labels, false, 0};
        }
    }

    int nbasis = config.nbasis;
    if (nbasis > q) {
        std::cerr << "note: only " << q << " observation points per curve; reducing nbasis from "
                  << nbasis << " to " << q << "\n";
        nbasis = q;
    }
    if (nbasis < 4) {
        throw std::invalid_argument("need at least 4 observation points per curve for cubic "
                                    "B-spline ingestion");
    }
    BSplineBasis basis = BSplineBasis::cubic_from_quantiles(nbasis, rescaled);
    FunctionalSample sample = smooth_to_sample(rescaled, table.values, basis, target);
    return Ingested{std::move(sample), table.points, table.row_labels, true, nbasis};
}

json fit_to_json(const FdfFit& fit, const FitCommandConfig& config, const Ingested& data) {
    json eigenvalues;
    eigenvalues["nonstationary"] = vector_to_json(fit.alphas_nonstat);
    eigenvalues["stationary"] = vector_to_json(fit.alphas_stat);

    json labels = json::array();
    for (BlockLabel label : fit.loadings.block_labels) {
        labels.push_back(label == BlockLabel::nonstationary ? "nonstationary" : "stationary");
    }

    json config_echo{{"input", config.input},
                     {"mode", config.mode},
                     {"k0", config.k0},
                     {"nbasis", config.nbasis},
                     {"grid", config.grid_size},
                     {"k_rule", config.k_rule},
                     {"p_share", config.p_share},
                     {"seed", config.seed},
                     {"maturity_spacing", config.maturity_spacing},
                     {"smoothed", data.smoothed},
                     {"nbasis_used", data.nbasis_used}};
    if (config.bandwidth) config_echo["bandwidth_override"] = *config.bandwidth;
    if (config.force_k) config_echo["force_k"] = *config.force_k;
    if (config.force_r) config_echo["force_r"] = *config.force_r;

    return json{{"mode", fit.mode == FitMode::stationary ? "stationary" : "nonstationary"},
                {"K_hat", fit.K_hat},
                {"r_hat", fit.r_hat},
                {"bandwidth", fit.bandwidth},
                {"p", fit.p},
                {"k0", fit.k0},
                {"eigenvalues", eigenvalues},
                {"loadings",
                 {{"grid", vector_to_json(fit.loadings.grid.points())},
                  {"curves", matrix_to_json(fit.loadings.curves)},
                  {"block_labels", labels}}},
                {"factors", matrix_to_json(fit.factors)},
                {"tests",
                 {{"stationarity", test_to_json(fit.diagnostics.stationarity)},
                  {"independence", test_to_json(fit.diagnostics.independence)}}},
                {"mean_curve", vector_to_json(fit.mean_curve)},
                {"low_signal", fit.diagnostics.low_signal},
                {"warnings", fit.diagnostics.warnings},
                {"provenance",
                 {{"input_digest", file_digest(config.input)},
                  {"version", fdf::kVersion},
                  {"original_points", vector_to_json(data.raw_points)},
                  {"config", config_echo}}}};
}

std::string cell_or_empty(double value, bool present) {
    return present ? format_double(value) : std::string();
}

double median_of(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace

int cmd_fit(const FitCommandConfig& config) {
    Ingested data = ingest(config);
    fs::create_directories(config.out_dir);

    FitOptions opts;
    opts.k0 = config.k0;
    opts.bandwidth = config.bandwidth;
    opts.p_share = config.p_share;
    opts.k_rule = parse_k_rule(config.k_rule);
    opts.force_K = config.force_k;
    opts.force_r = config.force_r;
    opts.test_seed = config.seed;

    FdfFit fit;
    if (config.mode == "auto") {
        fit = fit_auto(data.sample, opts);
    } else if (config.mode == "stationary") {
        fit = fit_stationary(data.sample, opts);
    } else if (config.mode == "nonstationary") {
        fit = fit_nonstationary(data.sample, opts);
    } else {
        throw std::invalid_argument("unknown mode: " + config.mode);
    }

    // report.json
    json report = fit_to_json(fit, config, data);
    std::ofstream out(fs::path(config.out_dir) / "report.json", std::ios::binary);
    out << report.dump(2) << '\n';
    out.close();

    // loadings.csv: grid in the first column, one column per loading curve.
    {
        CsvTable table;
        table.header.push_back("s");
        for (int k = 0; k < fit.K_hat; ++k) table.header.push_back("lambda_" + std::to_string(k + 1));
        for (int i = 0; i < fit.loadings.grid.size(); ++i) {
            std::vector<std::string> row{format_double(fit.loadings.grid.point(i))};
            for (int k = 0; k < fit.K_hat; ++k) row.push_back(format_double(fit.loadings.curves(k, i)));
            table.rows.push_back(std::move(row));
        }
        write_csv((fs::path(config.out_dir) / "loadings.csv").string(), table);
    }

    // factors.csv: one row per curve, echoing the input row labels.
    {
        CsvTable table;
        table.header.push_back("n");
        for (int k = 0; k < fit.K_hat; ++k) table.header.push_back("f_" + std::to_string(k + 1));
        for (int n = 0; n < fit.factors.rows(); ++n) {
            std::vector<std::string> row{data.row_labels[n]};
            for (int k = 0; k < fit.K_hat; ++k) row.push_back(format_double(fit.factors(n, k)));
            table.rows.push_back(std::move(row));
        }
        write_csv((fs::path(config.out_dir) / "factors.csv").string(), table);
    }

    // One SVG per loading curve and per factor path.
    for (int k = 0; k < fit.K_hat; ++k) {
        write_line_svg((fs::path(config.out_dir) / ("loading_" + std::to_string(k + 1) + ".svg"))
                           .string(),
                       fit.loadings.grid.points(), fit.loadings.curve(k),
                       "loading " + std::to_string(k + 1));
        Eigen::VectorXd index = Eigen::VectorXd::LinSpaced(fit.factors.rows(), 1.0,
                                                           double(fit.factors.rows()));
        write_line_svg((fs::path(config.out_dir) / ("factor_" + std::to_string(k + 1) + ".svg"))
                           .string(),
                       index, fit.factors.col(k), "factor " + std::to_string(k + 1));
    }

    std::cout << "mode=" << (fit.mode == FitMode::stationary ? "stationary" : "nonstationary")
              << " K_hat=" << fit.K_hat << " r_hat=" << fit.r_hat
              << " bandwidth=" << fit.bandwidth << " p=" << fit.p;
    if (fit.diagnostics.stationarity) {
        std::cout << " stationarity_p=" << fit.diagnostics.stationarity->p_value;
    }
    if (fit.diagnostics.independence) {
        std::cout << " independence_p=" << fit.diagnostics.independence->p_value;
    }
    if (fit.diagnostics.low_signal) std::cout << " low_signal=1";
    std::cout << '\n';
    return 0;
}

int cmd_simulate(const SimulateCommandConfig& config) {
    sim::SimConfig sc;
    sc.model_id = config.model;
    sc.n = config.n;
    sc.m = config.grid_size;
    sc.reps = config.reps;
    sc.master_seed = config.seed;
    sc.noise_scale = config.noise_scale;
    sc.k0 = config.k0;
    sc.workers = config.workers;
    sc.run_fdf = config.estimators.find("fdf") != std::string::npos;
    sc.run_pca = config.estimators.find("pca") != std::string::npos;
    if (!sc.run_fdf && !sc.run_pca) {
        throw std::invalid_argument("estimators must include fdf and/or pca");
    }

    const auto start = std::chrono::steady_clock::now();
    sim::SimResult result = sim::run_monte_carlo(sc);
    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    fs::create_directories(config.out_dir);

    CsvTable table;
    table.header = {"model_id", "rep_index", "seed",    "fdf_ise_1", "fdf_ise_2",
                    "pca_ise_1", "pca_ise_2", "k_ratio", "k_scree",   "r_ratio",
                    "r_scree",   "kmr_ratio", "kmr_scree", "error"};
    auto count_cell = [](int v) { return v >= 0 ? std::to_string(v) : std::string(); };
    for (const sim::RepRecord& row : result.rows) {
        std::vector<std::string> cells;
        cells.push_back(std::to_string(config.model));
        cells.push_back(std::to_string(row.rep_index));
        cells.push_back(std::to_string(row.seed));
        for (const auto* ise_vec : {&row.fdf_ise, &row.pca_ise}) {
            for (int k = 0; k < 2; ++k) {
                bool present = static_cast<int>(ise_vec->size()) > k && (*ise_vec)[k] >= 0.0;
                cells.push_back(cell_or_empty(present ? (*ise_vec)[k] : 0.0, present));
            }
        }
        cells.push_back(count_cell(row.k_ratio));
        cells.push_back(count_cell(row.k_scree));
        cells.push_back(count_cell(row.r_ratio));
        cells.push_back(count_cell(row.r_scree));
        cells.push_back(count_cell(row.kmr_ratio));
        cells.push_back(count_cell(row.kmr_scree));
        cells.push_back(row.error);
        table.rows.push_back(std::move(cells));
    }
    write_csv((fs::path(config.out_dir) / "results.csv").string(), table);

    // summary.csv: per-loading ISE medians and factor-count proportions.
    CsvTable summary;
    summary.header = {"key", "value"};
    auto add = [&](const std::string& key, const std::string& value) {
        summary.rows.push_back({key, value});
    };

    int ok = 0;
    std::vector<std::vector<double>> fdf_ise(2), pca_ise(2);
    std::map<std::string, std::map<int, int>> proportions;
    for (const sim::RepRecord& row : result.rows) {
        if (!row.error.empty()) continue;
        ++ok;
        for (std::size_t k = 0; k < row.fdf_ise.size() && k < 2; ++k) {
            if (row.fdf_ise[k] >= 0.0) fdf_ise[k].push_back(row.fdf_ise[k]);
        }
        for (std::size_t k = 0; k < row.pca_ise.size() && k < 2; ++k) {
            if (row.pca_ise[k] >= 0.0) pca_ise[k].push_back(row.pca_ise[k]);
        }
        auto tally = [&](const char* key, int v) {
            if (v >= 0) proportions[key][v] += 1;
        };
        tally("k_ratio", row.k_ratio);
        tally("k_scree", row.k_scree);
        tally("r_ratio", row.r_ratio);
        tally("r_scree", row.r_scree);
        tally("kmr_ratio", row.kmr_ratio);
        tally("kmr_scree", row.kmr_scree);
    }
    add("model_id", std::to_string(config.model));
    add("reps", std::to_string(config.reps));
    add("n", std::to_string(config.n));
    add("completed", std::to_string(ok));
    for (int k = 0; k < 2; ++k) {
        if (!fdf_ise[k].empty()) {
            add("median_ise_fdf_" + std::to_string(k + 1), format_double(median_of(fdf_ise[k])));
        }
        if (!pca_ise[k].empty()) {
            add("median_ise_pca_" + std::to_string(k + 1), format_double(median_of(pca_ise[k])));
        }
    }
    for (const auto& [key, hist] : proportions) {
        for (const auto& [value, count] : hist) {
            add("prop_" + key + "_" + std::to_string(value),
                format_double(double(count) / double(ok)));
        }
    }
    write_csv((fs::path(config.out_dir) / "summary.csv").string(), summary);

    std::cerr << "simulate: " << ok << "/" << config.reps << " replications in " << wall_s
              << " s\n";
    return 0;
}

int cmd_report(const ReportCommandConfig& config) {
    CsvTable table = read_csv(config.input);
    auto column = [&](const std::string& name) {
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            if (table.header[j] == name) return static_cast<int>(j);
        }
        throw std::invalid_argument("results schema mismatch: missing column '" + name + "'");
    };
    const int col_model = column("model_id");
    const int col_error = column("error");
    struct IseColumn {
        std::string estimator;
        int loading;
        int index;
    };
    std::vector<IseColumn> ise_columns;
    for (const char* est : {"fdf", "pca"}) {
        for (int k = 1; k <= 2; ++k) {
            std::string name = std::string(est) + "_ise_" + std::to_string(k);
            for (std::size_t j = 0; j < table.header.size(); ++j) {
                if (table.header[j] == name) {
                    ise_columns.push_back({est, k, static_cast<int>(j)});
                }
            }
        }
    }
    if (ise_columns.empty()) {
        throw std::invalid_argument("results schema mismatch: no ISE columns found");
    }

    // model -> (estimator, loading) -> values
    std::map<std::string, std::map<std::pair<std::string, int>, std::vector<double>>> data;
    for (const auto& row : table.rows) {
        if (!row[col_error].empty()) continue;
        for (const IseColumn& c : ise_columns) {
            const std::string& cell = row[c.index];
            if (cell.empty()) continue;
            data[row[col_model]][{c.estimator, c.loading}].push_back(std::stod(cell));
        }
    }
    if (data.empty()) throw std::invalid_argument("results contain no usable rows");

    fs::create_directories(config.out_dir);
    CsvTable stats;
    stats.header = {"model_id", "estimator", "loading", "min", "q1", "median", "q3", "max"};
    for (const auto& [model, groups] : data) {
        std::set<int> loadings;
        for (const auto& [key, values] : groups) loadings.insert(key.second);
        for (int k : loadings) {
            std::vector<BoxStats> boxes;
            for (const char* est : {"fdf", "pca"}) {
                auto it = groups.find({est, k});
                if (it == groups.end()) continue;
                const std::vector<double>& v = it->second;
                BoxStats b{est,
                           quantile(v, 0.0),
                           quantile(v, 0.25),
                           quantile(v, 0.5),
                           quantile(v, 0.75),
                           quantile(v, 1.0)};
                boxes.push_back(b);
                stats.rows.push_back({model, est, std::to_string(k), format_double(b.min),
                                      format_double(b.q1), format_double(b.median),
                                      format_double(b.q3), format_double(b.max)});
            }
            if (!boxes.empty()) {
                write_box_svg((fs::path(config.out_dir) /
                               ("compare_model" + model + "_loading" + std::to_string(k) + ".svg"))
                                  .string(),
                              boxes, "ISE, model " + model + ", loading " + std::to_string(k));
            }
        }
    }
    write_csv((fs::path(config.out_dir) / "summary_stats.csv").string(), stats);
    return 0;
}

}  // namespace fdf::cli
