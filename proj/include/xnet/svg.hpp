#ifndef XNET_SVG_HPP
#define XNET_SVG_HPP

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "deformation.hpp"
#include "errors.hpp"
#include "network.hpp"

// Hand-written SVG. Coordinates are printed with a fixed format so identical
// inputs give identical bytes.

namespace xnet {

namespace detail {

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s(buf);
    if (s == "-0.000") s = "0.000";
    return s;
}

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

inline constexpr double kPanelSize = 320.0;
inline constexpr double kPanelMargin = 30.0;

/// Side-by-side drawings of planar networks: boundary vertices as filled dots
/// with their labels (1-based), interior vertices as open dots.
inline std::string network_svg(const std::vector<Network>& nets, const std::vector<std::string>& captions = {})
{
    if (nets.empty()) throw StructuralError("nothing to draw");
    double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    bool first = true;
    for (const auto& net : nets) {
        net.check();
        for (const auto& p : net.positions) {
            if (p.size() != 2) throw StructuralError("network drawings need a planar (k = 2) scene, got k = " + std::to_string(p.size()));
            if (first) {
                lo_x = hi_x = p[0];
                lo_y = hi_y = p[1];
                first = false;
            }
            lo_x = std::min(lo_x, p[0]);
            hi_x = std::max(hi_x, p[0]);
            lo_y = std::min(lo_y, p[1]);
            hi_y = std::max(hi_y, p[1]);
        }
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    const double inner = kPanelSize - 2.0 * kPanelMargin;
    auto X = [&](std::size_t panel, double x) { return static_cast<double>(panel) * kPanelSize + kPanelMargin + (x - lo_x) / span * inner; };
    auto Y = [&](double y) { return kPanelMargin + (hi_y - y) / span * inner; };

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(kPanelSize * static_cast<double>(nets.size())) +
                    "\" height=\"" + detail::fmt(kPanelSize + 20.0) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t k = 0; k < nets.size(); ++k) {
        const auto& net = nets[k];
        s += "<g id=\"panel" + std::to_string(k) + "\">\n";
        for (const auto& e : net.tree.edges) {
            const auto& a = net.positions[e.a];
            const auto& b = net.positions[e.b];
            s += "<line x1=\"" + detail::fmt(X(k, a[0])) + "\" y1=\"" + detail::fmt(Y(a[1])) + "\" x2=\"" + detail::fmt(X(k, b[0])) +
                 "\" y2=\"" + detail::fmt(Y(b[1])) + "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
        }
        for (std::size_t v = 0; v < net.tree.vertex_count(); ++v) {
            const auto& p = net.positions[v];
            const auto& vx = net.tree.vertices[v];
            if (vx.boundary) {
                s += "<circle cx=\"" + detail::fmt(X(k, p[0])) + "\" cy=\"" + detail::fmt(Y(p[1])) + "\" r=\"4\" fill=\"black\"/>\n";
                std::string label;
                for (int t : vx.tags) label += (label.empty() ? "" : ",") + std::to_string(t + 1);
                if (!label.empty())
                    s += "<text x=\"" + detail::fmt(X(k, p[0]) + 6.0) + "\" y=\"" + detail::fmt(Y(p[1]) - 6.0) +
                         "\" font-family=\"sans-serif\" font-size=\"12\">" + label + "</text>\n";
            } else {
                s += "<circle cx=\"" + detail::fmt(X(k, p[0])) + "\" cy=\"" + detail::fmt(Y(p[1])) +
                     "\" r=\"3\" fill=\"white\" stroke=\"black\"/>\n";
            }
        }
        if (k < captions.size())
            s += "<text x=\"" + detail::fmt(static_cast<double>(k) * kPanelSize + kPanelMargin) + "\" y=\"" + detail::fmt(kPanelSize + 10.0) +
                 "\" font-family=\"sans-serif\" font-size=\"12\">" + detail::escape(captions[k]) + "</text>\n";
        s += "</g>\n";
    }
    return s + "</svg>\n";
}

/// Step plot of |I_min(t)| with a red marker at every counted flip.
inline std::string timeline_svg(const TypeTimeline& tl, const StabilizationReport& rep)
{
    const double w = 640.0, h = 240.0, m = 40.0;
    const double t_lo = tl.grid.front(), t_hi = tl.grid.back();
    const double t_span = std::max(t_hi - t_lo, 1e-300);
    std::size_t top = 1;
    for (const auto& s : tl.sets) top = std::max(top, s.size());
    auto X = [&](double t) { return m + (t - t_lo) / t_span * (w - 2.0 * m); };
    auto Y = [&](double c) { return h - m - c / static_cast<double>(top) * (h - 2.0 * m); };

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(w) + "\" height=\"" + detail::fmt(h) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<line x1=\"" + detail::fmt(m) + "\" y1=\"" + detail::fmt(h - m) + "\" x2=\"" + detail::fmt(w - m) + "\" y2=\"" +
         detail::fmt(h - m) + "\" stroke=\"gray\"/>\n";
    s += "<line x1=\"" + detail::fmt(X(tl.grid[tl.base])) + "\" y1=\"" + detail::fmt(m) + "\" x2=\"" + detail::fmt(X(tl.grid[tl.base])) +
         "\" y2=\"" + detail::fmt(h - m) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto* side : {&rep.left, &rep.right})
        for (double t : side->flip_locations)
            s += "<line x1=\"" + detail::fmt(X(t)) + "\" y1=\"" + detail::fmt(m) + "\" x2=\"" + detail::fmt(X(t)) + "\" y2=\"" +
                 detail::fmt(h - m) + "\" stroke=\"red\" stroke-width=\"0.5\"/>\n";
    std::string path;
    bool started = false;
    double prev_y = 0.0;
    for (std::size_t i = 0; i < tl.grid.size(); ++i) {
        if (tl.flagged[i]) continue;
        const double x = X(tl.grid[i]), y = Y(static_cast<double>(tl.sets[i].size()));
        if (!started) path += "M" + detail::fmt(x) + " " + detail::fmt(y);
        else path += " H" + detail::fmt(x) + (y != prev_y ? " V" + detail::fmt(y) : "");
        started = true;
        prev_y = y;
    }
    s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\"/>\n";
    s += "<text x=\"" + detail::fmt(m) + "\" y=\"" + detail::fmt(m - 12.0) + "\" font-family=\"sans-serif\" font-size=\"12\">|I_min(t)|, " +
         family_name(tl.family) + " family, flips right " + std::to_string(rep.right.flip_count) + ", left " +
         std::to_string(rep.left.flip_count) + "</text>\n";
    return s + "</svg>\n";
}

} // namespace xnet

#endif
