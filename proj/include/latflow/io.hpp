#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "latflow/linalg.hpp"

namespace latflow {

// shortest round-trip decimal
inline std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::filesystem::path& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path.string());
    }
    void header(const std::vector<std::string>& cols) { line(cols); }
    void line(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }
    void row(const std::vector<double>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << fmt_double(cells[i]);
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

// --- tiny SVG plotting -----------------------------------------------------

struct SvgSeries {
    std::vector<double> x, y;
    std::string color = "#1f6fb2";
    bool step = false;   // ECDF-style step curve
    bool points = false; // draw markers instead of a line
    std::string label;
};

class SvgPlot {
  public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

    void add(SvgSeries s) { series_.push_back(std::move(s)); }

    void write(const std::filesystem::path& path) const {
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const auto& s : series_)
            for (size_t i = 0; i < s.x.size(); ++i) {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        if (xmin > xmax) {
            xmin = 0;
            xmax = 1;
            ymin = 0;
            ymax = 1;
        }
        if (xmax - xmin < 1e-12) xmax = xmin + 1;
        if (ymax - ymin < 1e-12) ymax = ymin + 1;
        const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
        auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
        auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

        std::ostringstream svg;
        svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
            << "' viewBox='0 0 " << W << " " << H << "'>\n"
            << "<rect width='100%' height='100%' fill='white'/>\n"
            << "<text x='" << W / 2 << "' y='22' text-anchor='middle' font-size='15'>" << title_
            << "</text>\n";
        // axes
        svg << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
            << "' stroke='black'/>\n"
            << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='" << H - B
            << "' stroke='black'/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double fx = xmin + (xmax - xmin) * i / 4.0;
            const double fy = ymin + (ymax - ymin) * i / 4.0;
            svg << "<text x='" << px(fx) << "' y='" << H - B + 18
                << "' text-anchor='middle' font-size='11'>" << format_tick(fx) << "</text>\n"
                << "<text x='" << L - 8 << "' y='" << py(fy) + 4
                << "' text-anchor='end' font-size='11'>" << format_tick(fy) << "</text>\n";
        }
        svg << "<text x='" << (L + W - R) / 2 << "' y='" << H - 12
            << "' text-anchor='middle' font-size='12'>" << xlabel_ << "</text>\n"
            << "<text x='16' y='" << (T + H - B) / 2
            << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 " << (T + H - B) / 2
            << ")'>" << ylabel_ << "</text>\n";

        double legend_y = T + 8;
        for (const auto& s : series_) {
            if (s.points) {
                for (size_t i = 0; i < s.x.size(); ++i)
                    svg << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i])
                        << "' r='3' fill='" << s.color << "'/>\n";
            } else {
                svg << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
                double prev_y = 0;
                for (size_t i = 0; i < s.x.size(); ++i) {
                    if (s.step && i > 0) svg << px(s.x[i]) << ',' << py(prev_y) << ' ';
                    svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
                    prev_y = s.y[i];
                }
                svg << "'/>\n";
            }
            if (!s.label.empty()) {
                svg << "<rect x='" << W - R - 150 << "' y='" << legend_y - 9
                    << "' width='12' height='4' fill='" << s.color << "'/>\n"
                    << "<text x='" << W - R - 132 << "' y='" << legend_y
                    << "' font-size='11'>" << s.label << "</text>\n";
                legend_y += 16;
            }
        }
        svg << "</svg>\n";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path.string());
        out << svg.str();
    }

  private:
    static std::string format_tick(double v) {
        std::ostringstream o;
        o.precision(3);
        o << v;
        return o.str();
    }
    std::string title_, xlabel_, ylabel_;
    std::vector<SvgSeries> series_;
};

}  // namespace latflow
