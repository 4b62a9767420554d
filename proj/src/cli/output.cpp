#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "qtime/cli.hpp"

namespace qtime::cli {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string format_double(double x) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
    return std::string(buffer, result.ptr);
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out.push_back(',');
            out += cells[i];
        }
        out.push_back('\n');
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
    return out;
}

CsvTable two_qubit_table(const std::vector<TwoQubitRow>& rows) {
    CsvTable t{{"family", "theta", "tau", "complexity", "q_a", "q_b"}, {}};
    for (const TwoQubitRow& r : rows) {
        t.rows.push_back({to_string(r.family), format_double(r.theta), format_double(r.tau), format_double(r.complexity),
                          format_double(r.q_a), format_double(r.q_b)});
    }
    return t;
}

CsvTable ensemble_table(const EnsembleResult& result) {
    CsvTable t{{"kind", "parameter", "n_qubits", "k_samples", "k_effective", "discarded", "mean_of_ratio",
                "ratio_of_mean", "stderr_ratio"},
               {}};
    for (const EnsemblePoint& p : result.points) {
        t.rows.push_back({to_string(p.kind), format_double(p.parameter), std::to_string(result.n_qubits),
                          std::to_string(result.k_samples), std::to_string(p.estimate.k_effective),
                          std::to_string(p.estimate.discarded), format_double(p.estimate.mean_of_ratio),
                          format_double(p.estimate.ratio_of_mean), format_double(p.estimate.stderr_ratio)});
    }
    return t;
}

CsvTable tth_table(const std::vector<double>& t, const std::vector<double>& complexity, const std::vector<double>& proxy) {
    CsvTable out{{"t", "complexity", "proxy"}, {}};
    for (std::size_t i = 0; i < t.size(); ++i)
        out.rows.push_back({format_double(t[i]), format_double(complexity[i]), format_double(proxy[i])});
    return out;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

// Fixed two-decimal coordinates keep the output independent of locale.
std::string coord(double x) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, x, std::chars_format::fixed, 2);
    return std::string(buffer, result.ptr);
}

std::string tick_label(double x) {
    if (std::abs(x) < 1e-12) x = 0.0;
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, x, std::chars_format::general, 4);
    return std::string(buffer, result.ptr);
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::pair<double, double> padded_range(double lo, double hi) {
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
        const double pad = std::max(0.5, std::abs(hi) * 0.1);
        return {lo - pad, hi + pad};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

} // namespace

std::string emit_svg(const std::vector<PlotSeries>& series, const PlotAxes& axes) {
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    std::size_t points = 0;
    for (const PlotSeries& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
            ++points;
        }
    if (points == 0) throw std::invalid_argument("emit_svg: nothing to plot");
    std::tie(x_lo, x_hi) = padded_range(x_lo, x_hi);
    std::tie(y_lo, y_hi) = padded_range(y_lo, y_hi);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(kWidth) << "\" height=\"" << coord(kHeight)
        << "\" viewBox=\"0 0 " << coord(kWidth) << ' ' << coord(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"" << coord(kTop / 2 + 5)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(axes.title) << "</text>\n";
    svg << "<rect x=\"" << coord(kLeft) << "\" y=\"" << coord(kTop) << "\" width=\"" << coord(plot_w) << "\" height=\""
        << coord(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / kTicks;
        const double yv = y_lo + (y_hi - y_lo) * i / kTicks;
        svg << "<line x1=\"" << coord(px(xv)) << "\" y1=\"" << coord(kTop + plot_h) << "\" x2=\"" << coord(px(xv))
            << "\" y2=\"" << coord(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << coord(px(xv)) << "\" y=\"" << coord(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
            << tick_label(xv) << "</text>\n";
        svg << "<line x1=\"" << coord(kLeft - 5) << "\" y1=\"" << coord(py(yv)) << "\" x2=\"" << coord(kLeft)
            << "\" y2=\"" << coord(py(yv)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << coord(kLeft - 8) << "\" y=\"" << coord(py(yv) + 4) << "\" text-anchor=\"end\">"
            << tick_label(yv) << "</text>\n";
    }
    svg << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"" << coord(kHeight - 12)
        << "\" text-anchor=\"middle\">" << escape(axes.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << coord(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << coord(kTop + plot_h / 2) << ")\">" << escape(axes.y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const std::string color = kPalette[s % std::size(kPalette)];
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : series[s].points)
            if (std::isfinite(p.first) && std::isfinite(p.second)) pts.push_back(p);
        if (pts.size() == 1) {
            svg << "<circle cx=\"" << coord(px(pts[0].first)) << "\" cy=\"" << coord(py(pts[0].second))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        } else if (pts.size() > 1) {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (i > 0) svg << ' ';
                svg << coord(px(pts[i].first)) << ',' << coord(py(pts[i].second));
            }
            svg << "\"/>\n";
        }
        const double ly = kTop + 10 + 18.0 * static_cast<double>(s);
        svg << "<line x1=\"" << coord(kWidth - kRight + 15) << "\" y1=\"" << coord(ly) << "\" x2=\""
            << coord(kWidth - kRight + 35) << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << coord(kWidth - kRight + 40) << "\" y=\"" << coord(ly + 4) << "\">"
            << escape(series[s].name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace qtime::cli
