#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace fdf::cli {

struct FitCommandConfig {
    std::string input;
    std::string out_dir;
    std::string mode = "auto";  // auto | stationary | nonstationary
    int k0 = 8;
    int nbasis = 15;
    int grid_size = 101;
    std::string k_rule = "ratio";  // ratio | scree | scree-literal
    double p_share = 0.9;
    std::optional<double> bandwidth;
    std::optional<int> force_k;
    std::optional<int> force_r;
    std::uint64_t seed = 0x7e57u;
    std::string maturity_spacing = "calendar";  // calendar | rank
};

struct SimulateCommandConfig {
    int model = 1;
    int n = 300;
    int reps = 100;
    std::uint64_t seed = 1;
    int grid_size = 101;
    int k0 = 8;
    double noise_scale = 1.0;
    std::string estimators = "fdf,pca";
    int workers = 0;
    std::string out_dir;
};

struct ReportCommandConfig {
    std::string input;
    std::string out_dir;
};

int cmd_fit(const FitCommandConfig& config);
int cmd_simulate(const SimulateCommandConfig& config);
int cmd_report(const ReportCommandConfig& config);

}  // namespace fdf::cli
