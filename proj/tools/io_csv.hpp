#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fdf::cli {

/// Parse failure with 1-based row/column location.
struct CsvError {
    std::string message;
    int row = 0;
    int column = 0;
};

class csv_parse_error : public std::runtime_error {
public:
    explicit csv_parse_error(const CsvError& err)
        : std::runtime_error(err.message + " (row " + std::to_string(err.row) + ", column " +
                             std::to_string(err.column) + ")") {}
};

/// Wide-format functional data: header `s,<p_1>,...,<p_q>`, one row per curve
/// `<n>,<v_1>,...,<v_q>`. Decimal point '.', comma separator, LF line endings
/// (a trailing CR is tolerated on input).
struct WideTable {
    Eigen::VectorXd points;   // q observation points, as given
    Eigen::MatrixXd values;   // N x q
    std::vector<std::string> row_labels;
};

WideTable read_wide_csv(const std::string& path);

/// Generic cell table for emitted CSV files (results.csv and friends).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

/// Shortest-round-trip decimal rendering of a double.
std::string format_double(double value);

/// FNV-1a 64-bit digest of a file, for provenance records.
std::string file_digest(const std::string& path);

}  // namespace fdf::cli
