#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace fdf::cli {

/// Minimal self-contained line chart: fixed 800x500 viewBox, axis ticks at
/// the quartiles of each range, one polyline.
void write_line_svg(const std::string& path, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y, const std::string& title);

/// Five-number summary of one sample.
struct BoxStats {
    std::string label;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

/// Side-by-side box glyphs for comparing estimators.
void write_box_svg(const std::string& path, const std::vector<BoxStats>& boxes,
                   const std::string& title);

/// Linear-interpolation quantile (R type 7) of an unsorted sample.
double quantile(std::vector<double> values, double prob);

}  // namespace fdf::cli
