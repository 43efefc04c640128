#include "io_csv.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fdf::cli {

namespace {

std::vector<std::string> split_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& cell, int row, int column) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw csv_parse_error({"not a number: '" + cell + "'", row, column});
    }
    return value;
}

}  // namespace

WideTable read_wide_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw csv_parse_error({"cannot open file " + path, 0, 0});

    std::string line;
    if (!std::getline(in, line)) throw csv_parse_error({"empty input file", 1, 1});
    std::vector<std::string> header = split_line(line);
    if (header.size() < 2) {
        throw csv_parse_error({"header must list at least one observation point", 1, 1});
    }

    WideTable table;
    const int q = static_cast<int>(header.size()) - 1;
    table.points.resize(q);
    for (int j = 0; j < q; ++j) {
        table.points[j] = parse_number(header[j + 1], 1, j + 2);
    }
    for (int j = 1; j < q; ++j) {
        if (!(table.points[j] > table.points[j - 1])) {
            throw csv_parse_error({"observation points must be strictly increasing", 1, j + 2});
        }
    }

    std::vector<std::vector<double>> rows;
    int row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells = split_line(line);
        if (static_cast<int>(cells.size()) != q + 1) {
            throw csv_parse_error({"expected " + std::to_string(q + 1) + " cells, found " +
                                       std::to_string(cells.size()),
                                   row_no, 1});
        }
        table.row_labels.push_back(cells[0]);
        std::vector<double> row(q);
        for (int j = 0; j < q; ++j) row[j] = parse_number(cells[j + 1], row_no, j + 2);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw csv_parse_error({"no data rows", row_no, 1});

    table.values.resize(static_cast<int>(rows.size()), q);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < q; ++j) table.values(static_cast<int>(i), j) = rows[i][j];
    }
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw csv_parse_error({"cannot open file " + path, 0, 0});
    std::string line;
    if (!std::getline(in, line)) throw csv_parse_error({"empty input file", 1, 1});
    CsvTable table;
    table.header = split_line(line);
    int row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != table.header.size()) {
            throw csv_parse_error({"ragged row", row_no, 1});
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (j) out << ',';
        out << table.header[j];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            out << row[j];
        }
        out << '\n';
    }
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    double parsed = 0.0;
    std::sscanf(buf, "%lf", &parsed);
    if (parsed == value) {
        // Try shorter renderings for readability while keeping exact round-trip.
        for (int prec = 1; prec <= 16; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, value);
            std::sscanf(shorter, "%lf", &parsed);
            if (parsed == value) return shorter;
        }
    }
    return buf;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for digest: " + path);
    std::uint64_t hash = 1469598103934665603ULL;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 1099511628211ULL;
        }
        if (!in) break;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace fdf::cli
