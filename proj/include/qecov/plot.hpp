#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "qecov/sweep.hpp"

namespace qecov::bench {

namespace detail {

inline std::string fmt2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

inline const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#000000",
                                    "#7f7f7f", "#9467bd", "#8c564b", "#ff7f0e"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

/// One panel: parameter on x, the chosen measure on y in [0,1], one polyline
/// per code.
inline std::string svg_panel(const SweepResult& res, bool overlap_panel,
                             const std::string& x_label) {
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (const auto& r : res.rows)
        series[r.code].push_back({r.parameter, overlap_panel ? r.f_cw : r.concurrence});
    if (series.empty()) throw std::invalid_argument("svg_panel: result has no rows");
    for (auto& [code, pts] : series) {
        if (pts.empty()) throw std::invalid_argument("svg_panel: empty series " + code);
        std::sort(pts.begin(), pts.end());
    }

    double xmin = series.begin()->second.front().first, xmax = xmin;
    for (const auto& [code, pts] : series)
        for (const auto& p : pts) {
            xmin = std::min(xmin, p.first);
            xmax = std::max(xmax, p.first);
        }
    if (xmax == xmin) xmax = xmin + 1.0;

    const double w = 640, h = 420, ml = 60, mr = 150, mt = 20, mb = 45;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto sy = [&](double y) { return h - mb - y * (h - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
       << h - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = i / 5.0;
        os << "<line x1=\"" << fmt2(sx(xv)) << "\" y1=\"" << h - mb << "\" x2=\""
           << fmt2(sx(xv)) << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt2(sx(xv)) << "\" y=\"" << h - mb + 18
           << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt2(xv) << "</text>\n";
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt2(sy(yv)) << "\" x2=\"" << ml
           << "\" y2=\"" << fmt2(sy(yv)) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << fmt2(sy(yv) + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << fmt2(yv) << "</text>\n";
    }
    os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 8
       << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"14\" y=\"" << (mt + h - mb) / 2
       << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << (mt + h - mb) / 2 << ")\">" << (overlap_panel ? "codeword overlap" : "concurrence")
       << "</text>\n";
    // series + legend
    std::size_t idx = 0;
    for (const auto& [code, pts] : series) {
        os << "<polyline fill=\"none\" stroke=\"" << series_color(idx)
           << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : pts) os << fmt2(sx(p.first)) << "," << fmt2(sy(p.second)) << " ";
        os << "\"/>\n";
        const double ly = mt + 16.0 * double(idx) + 10;
        os << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << fmt2(ly) << "\" x2=\""
           << w - mr + 34 << "\" y2=\"" << fmt2(ly) << "\" stroke=\"" << series_color(idx)
           << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << w - mr + 40 << "\" y=\"" << fmt2(ly + 4)
           << "\" font-size=\"12\">" << code << "</text>\n";
        ++idx;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace detail

/// Write one SVG per measure: <prefix>_overlap.svg and <prefix>_concurrence.svg.
/// Raises if the result carries no rows. Output bytes depend only on the rows.
inline void emit_plot(const SweepResult& res, const std::string& path_prefix,
                      const std::string& x_label = "parameter") {
    if (res.rows.empty()) throw std::invalid_argument("emit_plot: result has no rows");
    for (bool overlap_panel : {true, false}) {
        const std::string path =
            path_prefix + (overlap_panel ? "_overlap.svg" : "_concurrence.svg");
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("emit_plot: cannot open " + path);
        os << detail::svg_panel(res, overlap_panel, x_label);
    }
}

}  // namespace qecov::bench
