#ifndef XNET_REPORT_HPP
#define XNET_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "deformation.hpp"
#include "filling.hpp"
#include "functional.hpp"
#include "steiner.hpp"
#include "tolerances.hpp"
#include "variation.hpp"

// Plain-text reports and CSV. Numbers carry 12 significant digits.

namespace xnet {

inline std::string num(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

inline std::string point_text(const Point& p)
{
    std::string s = "(";
    for (std::size_t a = 0; a < p.size(); ++a) s += (a ? ", " : "") + num(p[a]);
    return s + ")";
}

inline std::string id_list(const std::vector<std::size_t>& ids, const char* sep = " ")
{
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? sep : "") + std::to_string(ids[i]);
    return s;
}

inline std::string tolerance_block(const Tolerances& tol)
{
    return "tolerances: tie=" + num(tol.tie) + " angle=" + num(tol.angle) + " grad=" + num(tol.grad) +
           " degenerate=" + num(tol.degenerate) + " margin=" + num(tol.margin) + " triangle_slack=" + num(tol.triangle_slack) + "\n";
}

/// Vertex names for a network: p<label> for boundary vertices, s<k> for interior ones.
inline std::vector<std::string> vertex_names(const BoundedTree& t)
{
    std::vector<std::string> names(t.vertex_count());
    std::size_t interior = 0;
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
        const auto& vx = t.vertices[v];
        if (vx.tags.empty()) {
            names[v] = "s" + std::to_string(++interior);
            continue;
        }
        names[v] = "p";
        for (std::size_t k = 0; k < vx.tags.size(); ++k) names[v] += (k ? "," : "") + std::to_string(vx.tags[k] + 1);
    }
    return names;
}

inline std::string network_text(const Network& net, const std::string& indent)
{
    const auto names = vertex_names(net.tree);
    std::string s;
    for (std::size_t v = 0; v < net.tree.vertex_count(); ++v)
        s += indent + names[v] + (net.tree.vertices[v].boundary ? " " : " (interior) ") + point_text(net.positions[v]) + "\n";
    for (std::size_t e = 0; e < net.tree.edge_count(); ++e)
        s += indent + names[net.tree.edges[e].a] + " - " + names[net.tree.edges[e].b] + "  length " + num(net.edge_length(e)) + "\n";
    return s;
}

inline std::string mst_report(const std::vector<Point>& points, MetricKind kind, const MstResult& res, const Tolerances& tol)
{
    std::string s = "command: mst\n";
    s += "points: " + std::to_string(points.size()) + "\nmetric: p=" + num(kind.p) + "\n";
    s += "length: " + num(res.length) + "\n";
    s += "greedy length: " + num(mst_length(points, kind)) + "\n";
    s += "minimizing types: " + std::to_string(res.types.size()) + "\n";
    for (std::size_t i = 0; i < res.types.size(); ++i)
        s += "  type " + std::to_string(res.type_ids[i]) + ": " + res.types[i].label() + "\n";
    return s + tolerance_block(tol);
}

inline std::string angle_issue_name(AngleIssue a)
{
    switch (a) {
    case AngleIssue::AngleBelowThreshold: return "angle below 2pi/3";
    case AngleIssue::DegreeAboveThree: return "degree above 3";
    case AngleIssue::UnbalancedJunction: return "degree-3 angle off 2pi/3";
    }
    return "?";
}

inline std::string instability_name(InstabilityReason r)
{
    switch (r) {
    case InstabilityReason::AngleAtThreshold: return "meeting angle not above 2pi/3 + margin";
    case InstabilityReason::MeetingDegree: return "three or more components meet";
    case InstabilityReason::InvalidTrace: return "trace fails the angle certificate";
    }
    return "?";
}

inline std::string smt_report(const std::vector<Point>& points, const SmtResult& res, const Tolerances& tol)
{
    std::string s = "command: smt\n";
    s += "points: " + std::to_string(points.size()) + "\n";
    s += "length: " + num(res.length) + "\n";
    s += "binary types solved: " + std::to_string(res.type_lengths.size()) + (res.all_converged ? "" : " (some not converged)") + "\n";
    s += "minimizing types: " + std::to_string(res.types.size()) + "\n";
    const auto verdicts = classify_stability(res, tol);
    for (std::size_t i = 0; i < res.types.size(); ++i) {
        const auto& e = res.types[i];
        s += "  type " + std::to_string(e.type_id) + ": " + canonical_form(e.type.tree()) + "\n";
        s += "    parametric length " + num(e.solve.length) + ", iterations " + std::to_string(e.solve.iterations) +
             ", gradient " + num(e.solve.gradient_norm) + (e.solve.converged ? "" : " (not converged)") + "\n";
        s += "    degenerate edges: " + (e.solve.degenerate_edges.empty() ? std::string("none") : id_list(e.solve.degenerate_edges)) + "\n";
        if (e.solve.min_hessian_eigenvalue) s += "    hessian min eigenvalue: " + num(*e.solve.min_hessian_eigenvalue) + "\n";
        s += "    trace:\n" + network_text(e.trace, "      ");
        s += "    angles: " + std::string(e.angles.ok ? "ok" : "violated") + ", min " + num(e.angles.min_angle) + "\n";
        for (const auto& v : e.angles.violations)
            s += "      vertex " + std::to_string(v.vertex) + ": " + angle_issue_name(v.issue) + " (" + num(v.value) + ")\n";
        s += "    stability: " + std::string(verdicts[i].stable ? "stable" : "unstable") + "\n";
        for (const auto& r : verdicts[i].reasons)
            s += "      vertex " + std::to_string(r.vertex) + ": " + instability_name(r.reason) + " (" + num(r.value) + ")\n";
    }
    s += "hypothesis: " + hypothesis_name(classify_hypothesis(res, tol)) + "\n";
    return s + tolerance_block(tol);
}

struct FillTypeRow {
    std::size_t type_id = 0;
    std::string label;
    Rational generalized; ///< mpf_-
    Rational parametric;  ///< mpf
    std::optional<EreminReport> eremin;
};

inline std::string eremin_name(EreminVerdict v)
{
    switch (v) {
    case EreminVerdict::Equal: return "equal";
    case EreminVerdict::LpGreater: return "lp greater (k_max too small)";
    case EreminVerdict::TourGreater: return "tour greater (weak duality violated)";
    }
    return "?";
}

inline std::string fill_report(const SemimetricVector& r, const MinimalFilling& mfres, const std::vector<FillTypeRow>& rows,
                               std::size_t k_max, const Tolerances& tol)
{
    std::string s = "command: fill\n";
    s += "points: " + std::to_string(r.n()) + "\n";
    s += "mf: " + num(mfres.weight) + " (exact " + mfres.exact_weight.get_str() + ")\n";
    s += "minimizing types: " + id_list(mfres.type_ids) + "\n";
    s += "k_max: " + std::to_string(k_max) + "\n";
    for (const auto& row : rows) {
        s += "  type " + std::to_string(row.type_id) + ": " + row.label + "\n";
        s += "    mpf_-: " + num(row.generalized.get_d()) + " (exact " + row.generalized.get_str() + ")\n";
        s += "    mpf:   " + num(row.parametric.get_d()) + " (exact " + row.parametric.get_str() + ")\n";
        if (row.eremin) {
            const auto& e = *row.eremin;
            s += "    multi-tours: " + std::to_string(e.tours) + ", max multi-perimeter " + num(e.best_perimeter.get_d()) + " (exact " +
                 e.best_perimeter.get_str() + ")\n";
            s += "    minimax check: " + eremin_name(e.verdict) + ", weak duality " + (e.weak_duality ? "holds" : "violated") + "\n";
        }
    }
    return s + tolerance_block(tol);
}

inline std::string timeline_csv(const TypeTimeline& tl)
{
    std::string s = "t,L_min,I_min\n";
    for (std::size_t i = 0; i < tl.grid.size(); ++i)
        s += num(tl.grid[i]) + "," + num(tl.values[i]) + "," + (tl.flagged[i] ? std::string() : id_list(tl.sets[i], ";")) + "\n";
    return s;
}

inline std::string side_text(const char* name, const SideReport& side)
{
    std::string s = std::string(name) + " side: ";
    if (side.samples == 0) return s + "no samples\n";
    s += side.set ? "{" + id_list(*side.set) + "}" : std::string("not constant at resolution");
    s += "\n  tail core {" + id_list(side.core) + "} over |t - t0| <= " + num(side.tail_extent) + " (" +
         std::to_string(side.tail_samples) + " samples)\n";
    s += "  contained in base: " + std::string(side.contained_in_base ? "yes" : "no") + "\n";
    s += "  flips: " + std::to_string(side.flip_count) + (side.oscillation_signature ? " (oscillation signature)" : "") + "\n";
    if (!side.flip_locations.empty()) {
        s += "  flip locations:";
        const std::size_t shown = std::min<std::size_t>(side.flip_locations.size(), 12);
        for (std::size_t i = 0; i < shown; ++i) s += " " + num(side.flip_locations[i]);
        if (shown < side.flip_locations.size()) s += " ...";
        s += "\n";
    }
    return s;
}

inline std::string deform_report(const DeformationScene& scene, const TypeTimeline& tl, const StabilizationReport& rep,
                                 const std::optional<Hypothesis>& hypothesis, const Tolerances& tol)
{
    std::string s = "command: deform\n";
    s += "scene: " + (scene.name.empty() ? std::string("(unnamed)") : scene.name) + "\n";
    s += "family: " + family_name(tl.family) + "\n";
    s += "curves: " + std::string(scene.analytic() ? "analytic" : "non-analytic") + "\n";
    s += "t0: " + num(scene.t0) + ", window: " + num(scene.window) + ", uniform samples per side: " + std::to_string(scene.samples) + "\n";
    std::size_t flagged = 0;
    for (char f : tl.flagged) flagged += f ? 1 : 0;
    s += "grid: " + std::to_string(tl.grid.size()) + " samples, " + std::to_string(flagged) + " flagged\n";
    s += "types:\n";
    for (std::size_t i = 0; i < tl.labels.size(); ++i) s += "  " + std::to_string(i) + ": " + tl.labels[i] + "\n";
    s += "base set: {" + id_list(rep.base_set) + "}\n";
    s += side_text("right", rep.right);
    s += side_text("left", rep.left);
    s += "one-sided sets contained in base: " + std::string(rep.contained_in_base ? "yes" : "no") + "\n";
    s += "two-sided constancy: ";
    if (!rep.claim2_applicable) s += "not applicable\n";
    else s += std::string(rep.claim2_holds ? "holds" : "fails") + " over |t - t0| <= " + num(rep.claim2_extent) + "\n";
    if (hypothesis) s += "hypothesis: " + hypothesis_name(*hypothesis) + "\n";
    return s + tolerance_block(tol);
}

inline std::string variation_report(const SegmentDeformation& d, double t, double h)
{
    std::string s = "command: variation\n";
    s += "A " + point_text(d.a) + ", B " + point_text(d.b) + ", u " + point_text(d.u) + ", v " + point_text(d.v) + "\n";
    s += "t: " + num(t) + ", h: " + num(h) + "\n";
    const auto ld = length_derivatives_1param(d, t);
    s += "length: " + num(ld.length) + "\n";
    s += "quantity,analytic,fd_h,fd_h/2,fd_h/4,richardson_ratio,order,extrapolated\n";
    auto row = [&](const char* name, double exact, const FdEstimate& fd) {
        s += std::string(name) + "," + num(exact) + "," + num(fd.estimates[0]) + "," + num(fd.estimates[1]) + "," + num(fd.estimates[2]) +
             "," + num(fd.richardson_ratio) + "," + num(fd.empirical_order) + "," + num(fd.extrapolated) + "\n";
    };
    row("l'(t)", ld.first, fd_oracle(d, 1, h, t));
    row("l''(t)", ld.second, fd_oracle(d, 2, h, t));
    const auto p = length_partials_2param(d);
    row("d2l/dsdt(0,0)", p.dst, fd_mixed_partial(d, h));
    s += "partials at (0,0): dt=" + num(p.dt) + " ds=" + num(p.ds) + " dtt=" + num(p.dtt) + " dst=" + num(p.dst) + " dss=" + num(p.dss) + "\n";
    return s;
}

} // namespace xnet

#endif
