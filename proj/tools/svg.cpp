#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "io_csv.hpp"

namespace fdf::cli {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

struct Scale {
    double lo, hi, pix0, pix1;
    double operator()(double v) const {
        double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
        return pix0 + t * (pix1 - pix0);
    }
};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

void open_svg(std::ofstream& out, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n"
        << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << esc(title) << "</text>\n";
}

void draw_axes(std::ofstream& out, const Scale& sx, const Scale& sy) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        double xv = sx.lo + q * (sx.hi - sx.lo);
        double xpix = sx(xv);
        out << "<line x1=\"" << xpix << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << xpix
            << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << xpix << "\" y=\"" << kHeight - kBottom + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(std::round(xv * 1e4) / 1e4) << "</text>\n";
        double yv = sy.lo + q * (sy.hi - sy.lo);
        double ypix = sy(yv);
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << ypix << "\" x2=\"" << kLeft
            << "\" y2=\"" << ypix << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << kLeft - 8 << "\" y=\"" << ypix + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(std::round(yv * 1e4) / 1e4) << "</text>\n";
    }
}

}  // namespace

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    double pos = prob * (double(values.size()) - 1.0);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - double(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

void write_line_svg(const std::string& path, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y, const std::string& title) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);

    double ylo = y.minCoeff(), yhi = y.maxCoeff();
    if (yhi - ylo < 1e-12) {
        ylo -= 1.0;
        yhi += 1.0;
    }
    Scale sx{x.minCoeff(), x.maxCoeff(), kLeft, kWidth - kRight};
    Scale sy{ylo, yhi, kHeight - kBottom, kTop};

    open_svg(out, title);
    draw_axes(out, sx, sy);
    out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i) out << ' ';
        out << sx(x[i]) << ',' << sy(y[i]);
    }
    out << "\"/>\n</svg>\n";
}

void write_box_svg(const std::string& path, const std::vector<BoxStats>& boxes,
                   const std::string& title) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);

    double lo = boxes.empty() ? 0.0 : boxes[0].min;
    double hi = boxes.empty() ? 1.0 : boxes[0].max;
    for (const auto& b : boxes) {
        lo = std::min(lo, b.min);
        hi = std::max(hi, b.max);
    }
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    }
    Scale sy{lo, hi, kHeight - kBottom, kTop};
    Scale sx{0.0, double(boxes.size()), kLeft, kWidth - kRight};

    open_svg(out, title);
    draw_axes(out, sx, sy);
    const double half_width = 0.18;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const BoxStats& b = boxes[i];
        double cx = sx(double(i) + 0.5);
        double wpix = sx(half_width) - sx(0.0);
        out << "<line x1=\"" << cx << "\" y1=\"" << sy(b.min) << "\" x2=\"" << cx << "\" y2=\""
            << sy(b.max) << "\" stroke=\"black\"/>\n";
        out << "<rect x=\"" << cx - wpix << "\" y=\"" << sy(b.q3) << "\" width=\"" << 2 * wpix
            << "\" height=\"" << sy(b.q1) - sy(b.q3)
            << "\" fill=\"#f5b7b1\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << cx - wpix << "\" y1=\"" << sy(b.median) << "\" x2=\""
            << cx + wpix << "\" y2=\"" << sy(b.median)
            << "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << cx << "\" y=\"" << kHeight - kBottom + 35
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << esc(b.label) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace fdf::cli
