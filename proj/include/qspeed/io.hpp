#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "qspeed/sweep.hpp"

namespace qspeed::io {

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

inline constexpr const char* csv_header = "gamma0,n_atoms,theta,ratio,nonmarkov,bound_energy,status";

inline void write_csv(std::ostream& os, const std::vector<sweep::SweepRow>& rows)
{
    os << csv_header << '\n';
    for (const auto& r : rows) {
        os << format_double(r.gamma0) << ',' << r.n_atoms << ',' << format_double(r.theta) << ','
           << format_optional(r.ratio) << ',' << format_optional(r.nonmarkov) << ','
           << format_optional(r.bound_energy) << ',' << sweep::to_string(r.status) << '\n';
    }
}

inline nlohmann::ordered_json config_json(const sweep::SweepConfig& c)
{
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(c.kind));
    j["n_atoms"] = c.n_atoms_list;
    j["theta"] = c.theta_list;
    j["gamma0_grid"] = {{"min", c.gamma0_grid.min}, {"max", c.gamma0_grid.max}, {"points", c.gamma0_grid.points}};
    j["lambda"] = c.lambda;
    j["omega0"] = c.omega0;
    j["tau"] = c.tau;
    j["outputs"] = {{"ratio", c.outputs.ratio},
                    {"nonmarkov", c.outputs.nonmarkov},
                    {"bound_energy", c.outputs.bound_energy}};
    return j;
}

/// {"schema": 1, "config": {...}, "rows": [{gamma0, n_atoms, theta, ratio, nonmarkov, bound_energy, status}]}
inline nlohmann::ordered_json sweep_json(const sweep::SweepConfig& c, const std::vector<sweep::SweepRow>& rows)
{
    const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["config"] = config_json(c);
    auto& arr = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        arr.push_back({{"gamma0", r.gamma0},
                       {"n_atoms", r.n_atoms},
                       {"theta", r.theta},
                       {"ratio", opt(r.ratio)},
                       {"nonmarkov", opt(r.nonmarkov)},
                       {"bound_energy", opt(r.bound_energy)},
                       {"status", std::string(sweep::to_string(r.status))}});
    }
    return j;
}

// ---------------------------------------------------------------------------
// SVG

struct Series
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
    bool square_marks = false;
    std::string color = "#1f77b4";
};

struct Panel
{
    std::string title;
    std::vector<Series> series;
};

inline constexpr int panel_width = 900;
inline constexpr int panel_height = 600;

namespace detail {

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

inline std::string num(double v)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

} // namespace detail

/// Static SVG 1.1 document: panels stacked vertically, linear axes, one
/// polyline per series.
inline std::string render_svg(const std::vector<Panel>& panels, const std::string& x_label)
{
    constexpr double ml = 80, mr = 30, mt = 50, mb = 70;
    const int height = panel_height * int(std::max<std::size_t>(panels.size(), 1));
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << panel_width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << panel_width << ' ' << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t k = 0; k < panels.size(); ++k) {
        const Panel& panel = panels[k];
        const double oy = double(k) * panel_height;
        double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
        bool first = true;
        for (const auto& s : panel.series)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i]))
                    continue;
                if (first) {
                    xmin = xmax = s.x[i];
                    ymin = ymax = s.y[i];
                    first = false;
                }
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        if (xmax == xmin)
            xmax = xmin + 1;
        if (ymax == ymin) {
            ymin -= 0.5;
            ymax += 0.5;
        }
        const double pw = panel_width - ml - mr;
        const double ph = panel_height - mt - mb;
        const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
        const auto py = [&](double y) { return oy + mt + (ymax - y) / (ymax - ymin) * ph; };

        os << "<g class=\"panel\">\n";
        os << "<text x=\"" << panel_width / 2 << "\" y=\"" << detail::num(oy + 30)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" << detail::escape(panel.title)
           << "</text>\n";
        // axes
        os << "<line x1=\"" << detail::num(ml) << "\" y1=\"" << detail::num(oy + mt + ph) << "\" x2=\""
           << detail::num(ml + pw) << "\" y2=\"" << detail::num(oy + mt + ph) << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << detail::num(ml) << "\" y1=\"" << detail::num(oy + mt) << "\" x2=\"" << detail::num(ml)
           << "\" y2=\"" << detail::num(oy + mt + ph) << "\" stroke=\"black\"/>\n";
        for (int t = 0; t <= 4; ++t) {
            const double xv = xmin + (xmax - xmin) * t / 4.0;
            const double yv = ymin + (ymax - ymin) * t / 4.0;
            os << "<text x=\"" << detail::num(px(xv)) << "\" y=\"" << detail::num(oy + mt + ph + 20)
               << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << format_double(xv)
               << "</text>\n";
            os << "<text x=\"" << detail::num(ml - 8) << "\" y=\"" << detail::num(py(yv) + 4)
               << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
               << detail::num(yv) << "</text>\n";
        }
        os << "<text x=\"" << detail::num(ml + pw / 2) << "\" y=\"" << detail::num(oy + panel_height - 20)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << detail::escape(x_label)
           << "</text>\n";
        // series
        double legend_y = oy + mt + 15;
        for (const auto& s : panel.series) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\""
               << (s.dashed ? " stroke-dasharray=\"8,5\"" : "") << " points=\"";
            bool sep = false;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i]))
                    continue;
                os << (sep ? " " : "") << detail::num(px(s.x[i])) << ',' << detail::num(py(s.y[i]));
                sep = true;
            }
            os << "\"/>\n";
            if (s.square_marks) {
                const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 20);
                for (std::size_t i = 0; i < s.x.size(); i += stride)
                    if (std::isfinite(s.y[i]))
                        os << "<rect x=\"" << detail::num(px(s.x[i]) - 3) << "\" y=\"" << detail::num(py(s.y[i]) - 3)
                           << "\" width=\"6\" height=\"6\" fill=\"none\" stroke=\"" << s.color << "\"/>\n";
            }
            os << "<text x=\"" << detail::num(ml + pw - 10) << "\" y=\"" << detail::num(legend_y)
               << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << s.color << "\">"
               << detail::escape(s.label) << "</text>\n";
            legend_y += 16;
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// |E_b| below this is drawn as 0 so that exponentially shallow bound states
/// do not dominate the axis. Only the plot is affected; data files keep E_b.
inline constexpr double bound_energy_display_floor = 1e-4;

/// One panel per N: ratio solid, R or E_b dashed; theta = 1 series carry square marks.
inline std::vector<Panel> sweep_panels(const sweep::SweepConfig& c, const std::vector<sweep::SweepRow>& rows)
{
    std::vector<Panel> panels;
    for (int n : c.n_atoms_list) {
        Panel panel;
        panel.title = "N = " + std::to_string(n) + " (" + std::string(to_string(c.kind)) + ", lambda = "
                    + format_double(c.lambda) + ", tau = " + format_double(c.tau) + ")";
        for (double theta : c.theta_list) {
            const bool marks = c.kind == AtomKind::ThreeLevelV && theta == 1.0;
            const std::string suffix = c.kind == AtomKind::ThreeLevelV ? " (theta=" + format_double(theta) + ")" : "";
            Series ratio{"tau_QSL/tau" + suffix, {}, {}, false, marks, "#1f77b4"};
            Series nm{"non-Markovianity" + suffix, {}, {}, true, marks, "#d62728"};
            Series eb{"bound-state energy" + suffix, {}, {}, true, marks, "#2ca02c"};
            for (const auto& r : rows) {
                if (r.n_atoms != n || r.theta != theta)
                    continue;
                if (c.outputs.ratio) {
                    ratio.x.push_back(r.gamma0);
                    ratio.y.push_back(r.ratio.value_or(NAN));
                }
                if (c.outputs.nonmarkov) {
                    nm.x.push_back(r.gamma0);
                    nm.y.push_back(r.nonmarkov.value_or(NAN));
                }
                if (c.outputs.bound_energy) {
                    double e = r.bound_energy.value_or(r.gamma0 == 0.0 ? 0.0 : NAN);
                    if (std::abs(e) < bound_energy_display_floor)
                        e = 0.0;
                    eb.x.push_back(r.gamma0);
                    eb.y.push_back(e);
                }
            }
            if (c.outputs.ratio)
                panel.series.push_back(std::move(ratio));
            if (c.outputs.nonmarkov)
                panel.series.push_back(std::move(nm));
            if (c.outputs.bound_energy)
                panel.series.push_back(std::move(eb));
        }
        panels.push_back(std::move(panel));
    }
    return panels;
}

} // namespace qspeed::io
