#ifndef XNET_DEFORMATION_HPP
#define XNET_DEFORMATION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "filling.hpp"
#include "functional.hpp"
#include "metric.hpp"
#include "steiner.hpp"
#include "tolerances.hpp"
#include "tree.hpp"

// One-parametric deformations of a boundary set and the evolution of the
// optimal network types along them.

namespace xnet {

/// curve(t) = sum_j coeffs[j] t^j.
struct PolynomialCurve {
    std::vector<Point> coeffs;
};

/// curve(t) = base + dir * exp(-(a/t)^2) sin(1/t) for t > 0, base for t <= 0.
/// Smooth everywhere, not analytic at 0. The flatness a rescales the flat
/// factor; a = 1 is the classical exp(-1/t^2).
struct OscillatoryCurve {
    Point base;
    Point dir;
    double flatness = 1.0;
};

using CurveSpec = std::variant<PolynomialCurve, OscillatoryCurve>;

inline double oscillation_profile(double t, double flatness)
{
    if (t <= 0.0) return 0.0;
    const double q = flatness / t;
    return std::exp(-q * q) * std::sin(1.0 / t);
}

inline Point eval_curve(const CurveSpec& c, double t)
{
    if (const auto* p = std::get_if<PolynomialCurve>(&c)) {
        Point out(p->coeffs.front().size(), 0.0);
        // Horner, highest degree first
        for (auto it = p->coeffs.rbegin(); it != p->coeffs.rend(); ++it)
            for (std::size_t a = 0; a < out.size(); ++a) out[a] = out[a] * t + (*it)[a];
        return out;
    }
    const auto& o = std::get<OscillatoryCurve>(c);
    const double f = oscillation_profile(t, o.flatness);
    Point out = o.base;
    for (std::size_t a = 0; a < out.size(); ++a) out[a] += f * o.dir[a];
    return out;
}

inline bool is_analytic(const CurveSpec& c) { return std::holds_alternative<PolynomialCurve>(c); }

inline std::size_t curve_dimension(const CurveSpec& c)
{
    if (const auto* p = std::get_if<PolynomialCurve>(&c)) {
        if (p->coeffs.empty()) throw StructuralError("polynomial curve needs at least one coefficient");
        for (const auto& v : p->coeffs)
            if (v.size() != p->coeffs[0].size()) throw StructuralError("polynomial coefficients differ in dimension");
        return p->coeffs[0].size();
    }
    const auto& o = std::get<OscillatoryCurve>(c);
    if (o.base.size() != o.dir.size()) throw StructuralError("oscillatory curve base and direction differ in dimension");
    if (!(o.flatness > 0.0)) throw StructuralError("oscillatory flatness must be positive");
    return o.base.size();
}

struct DeformationScene {
    std::string name;
    std::vector<CurveSpec> curves;
    MetricKind kind;
    double t0 = 0.0;
    double window = 0.1;
    std::size_t samples = 64; ///< uniform samples per side, on top of the dyadic ones

    std::size_t dimension() const { return curves.empty() ? 0 : curve_dimension(curves[0]); }

    /// Rejects mixed dimensions and boundary points that coincide at t0.
    void validate() const
    {
        if (curves.size() < 2) throw StructuralError("a scene needs at least two boundary curves");
        const std::size_t k = curve_dimension(curves[0]);
        if (k == 0) throw StructuralError("scene dimension must be positive");
        for (const auto& c : curves)
            if (curve_dimension(c) != k) throw StructuralError("scene curves differ in dimension");
        if (!(window > 0.0) || !std::isfinite(window)) throw StructuralError("scene window must be positive");
        if (samples == 0) throw StructuralError("scene needs at least one uniform sample per side");
        std::vector<Point> p;
        for (const auto& c : curves) p.push_back(eval_curve(c, t0));
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = i + 1; j < p.size(); ++j)
                if (rho_p(p[i], p[j], kind) == 0.0)
                    throw StructuralError("boundary points " + std::to_string(i) + " and " + std::to_string(j) +
                                          " coincide at t0");
    }

    bool analytic() const { return std::all_of(curves.begin(), curves.end(), is_analytic); }
};

struct SceneSample {
    std::vector<Point> points;
    SemimetricVector r;
};

inline SceneSample eval_scene(const DeformationScene& scene, double t)
{
    SceneSample s;
    for (const auto& c : scene.curves) s.points.push_back(eval_curve(c, t));
    s.r = pullback(s.points, scene.kind);
    return s;
}

inline constexpr int kDyadicLevels = 40;

/// t0, t0 +- window 2^-j for j = 0..40, and t0 +- window i / samples; sorted.
inline std::vector<double> sample_grid(const DeformationScene& scene)
{
    std::set<double> g{scene.t0};
    for (int j = 0; j <= kDyadicLevels; ++j) {
        const double d = std::ldexp(scene.window, -j);
        g.insert(scene.t0 + d);
        g.insert(scene.t0 - d);
    }
    for (std::size_t i = 1; i <= scene.samples; ++i) {
        const double d = scene.window * static_cast<double>(i) / static_cast<double>(scene.samples);
        g.insert(scene.t0 + d);
        g.insert(scene.t0 - d);
    }
    return {g.begin(), g.end()};
}

// ---------------------------------------------------------------------------
// type timelines

enum class Family { Mst, Smt, Fill };

inline std::string family_name(Family f)
{
    switch (f) {
    case Family::Mst: return "mst";
    case Family::Smt: return "smt";
    case Family::Fill: return "fill";
    }
    return "?";
}

inline Family parse_family(const std::string& s)
{
    if (s == "mst") return Family::Mst;
    if (s == "smt") return Family::Smt;
    if (s == "fill") return Family::Fill;
    throw StructuralError("unknown family '" + s + "' (expected mst, smt or fill)");
}

struct TypeTimeline {
    Family family = Family::Mst;
    std::vector<double> grid;
    std::vector<std::vector<std::size_t>> sets; ///< I_min per sample (sorted ids)
    std::vector<double> values;                 ///< L_min per sample
    std::vector<char> flagged;                  ///< sample excluded (solver failure)
    std::vector<std::string> labels;            ///< id -> type description
    std::size_t base = 0;                       ///< grid index of t0
};

namespace detail {

struct SampleTypes {
    double value = 0.0;
    std::vector<std::string> keys; // type keys tying at the minimum
    bool ok = true;
};

inline SampleTypes sample_types(const SceneSample& s, Family family, const Tolerances& tol)
{
    SampleTypes out;
    switch (family) {
    case Family::Mst: {
        const auto res = mst(s.r, tol);
        out.value = res.length;
        for (auto id : res.type_ids) out.keys.push_back(std::to_string(id));
        break;
    }
    case Family::Fill: {
        const auto res = mf(s.r, tol);
        out.value = res.weight;
        for (auto id : res.type_ids) out.keys.push_back(std::to_string(id));
        break;
    }
    case Family::Smt: {
        const auto res = smt(s.points, tol);
        out.value = res.length;
        std::set<std::string> traces;
        for (const auto& e : res.types) {
            out.ok = out.ok && e.solve.converged;
            traces.insert(canonical_form(e.trace.tree));
        }
        out.keys.assign(traces.begin(), traces.end());
        break;
    }
    }
    return out;
}

} // namespace detail

/// I_min(t) along the scene's sample grid. Spanning-tree and filling ids index
/// enumerate_spanning_trees(n) and enumerate_binary_trees(n); Steiner ids index
/// the distinct traces met along the timeline, in order of their labels.
inline TypeTimeline track_types(const DeformationScene& scene, Family family, const Tolerances& tol = {})
{
    scene.validate();
    if (family == Family::Smt && !scene.kind.euclidean()) throw StructuralError("the Steiner family needs the Euclidean metric");
    TypeTimeline tl;
    tl.family = family;
    tl.grid = sample_grid(scene);
    tl.base = static_cast<std::size_t>(std::find(tl.grid.begin(), tl.grid.end(), scene.t0) - tl.grid.begin());
    std::vector<std::vector<std::string>> keys;
    for (double t : tl.grid) {
        detail::SampleTypes st;
        try {
            st = detail::sample_types(eval_scene(scene, t), family, tol);
        } catch (const StructuralError&) {
            st.ok = false; // e.g. boundary points meet away from t0
        }
        tl.values.push_back(st.ok ? st.value : std::nan(""));
        tl.flagged.push_back(st.ok ? 0 : 1);
        keys.push_back(st.ok ? st.keys : std::vector<std::string>{});
    }

    const std::size_t n = scene.curves.size();
    if (family == Family::Smt) {
        std::set<std::string> all;
        for (const auto& k : keys) all.insert(k.begin(), k.end());
        tl.labels.assign(all.begin(), all.end());
        for (const auto& k : keys) {
            std::vector<std::size_t> ids;
            for (const auto& s : k)
                ids.push_back(static_cast<std::size_t>(std::lower_bound(tl.labels.begin(), tl.labels.end(), s) - tl.labels.begin()));
            std::sort(ids.begin(), ids.end());
            tl.sets.push_back(std::move(ids));
        }
    } else {
        if (family == Family::Mst)
            for (const auto& f : enumerate_spanning_trees(n)) tl.labels.push_back(f.label());
        else
            for (const auto& b : enumerate_binary_trees(n)) tl.labels.push_back(canonical_form(b.tree()));
        for (const auto& k : keys) {
            std::vector<std::size_t> ids;
            for (const auto& s : k) ids.push_back(std::stoul(s));
            std::sort(ids.begin(), ids.end());
            tl.sets.push_back(std::move(ids));
        }
    }
    return tl;
}

// ---------------------------------------------------------------------------
// stabilization

using TypeSet = std::vector<std::size_t>;

struct SideReport {
    std::optional<TypeSet> set;          ///< empty optional: not constant at resolution
    TypeSet core;                        ///< types optimal at every sample of the finest tail
    double tail_extent = 0.0;            ///< |t - t0| reached by the tail
    std::size_t tail_samples = 0;
    std::size_t flip_count = 0;
    std::vector<double> flip_locations;
    bool oscillation_signature = false;  ///< flips in >= 4 consecutive dyadic bands, denser toward t0
    bool contained_in_base = false;
    std::size_t samples = 0;
};

struct StabilizationReport {
    TypeSet base_set;
    SideReport right, left;
    bool contained_in_base = false;  ///< every constant side set is inside the base set
    bool claim2_applicable = false;  ///< some side's tail equals the base set
    bool claim2_holds = false;       ///< then the base set is optimal throughout the tails on both sides
    double claim2_extent = 0.0;
};

namespace detail {

inline bool disjoint(const TypeSet& a, const TypeSet& b)
{
    std::vector<std::size_t> x;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(x));
    return x.empty();
}

inline bool subset(const TypeSet& a, const TypeSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

// Indices of one side's samples ordered from t0 outward.
inline std::vector<std::size_t> side_indices(const TypeTimeline& tl, int side)
{
    std::vector<std::size_t> idx;
    if (side > 0)
        for (std::size_t i = tl.base + 1; i < tl.grid.size(); ++i) idx.push_back(i);
    else
        for (std::size_t i = tl.base; i-- > 0;) idx.push_back(i);
    std::vector<std::size_t> kept;
    for (auto i : idx)
        if (!tl.flagged[i]) kept.push_back(i);
    return kept;
}

inline SideReport side_report(const TypeTimeline& tl, int side, const TypeSet& base)
{
    SideReport rep;
    const auto idx = side_indices(tl, side);
    rep.samples = idx.size();
    if (idx.empty()) return rep;
    const double t0 = tl.grid[tl.base];
    const double window = std::abs(tl.grid[idx.back()] - t0);

    // Flips: a change counts only when the new set is disjoint from the anchor,
    // so a tie {A,B} between {A} and {B} yields one flip, not two.
    TypeSet anchor = tl.sets[idx.front()];
    std::vector<std::size_t> flip_band;
    for (std::size_t q = 1; q < idx.size(); ++q) {
        const auto& cur = tl.sets[idx[q]];
        if (disjoint(cur, anchor)) {
            ++rep.flip_count;
            rep.flip_locations.push_back(tl.grid[idx[q]]);
            anchor = cur;
        } else if (subset(cur, anchor) && cur != anchor) {
            anchor = cur;
        }
    }
    std::sort(rep.flip_locations.begin(), rep.flip_locations.end());

    // flips per dyadic band j: |t - t0| in (window 2^-(j+1), window 2^-j]
    std::vector<std::size_t> per_band(kDyadicLevels + 1, 0);
    for (double t : rep.flip_locations) {
        const double d = std::abs(t - t0);
        int j = static_cast<int>(std::floor(std::log2(window / d)));
        j = std::clamp(j, 0, kDyadicLevels);
        ++per_band[static_cast<std::size_t>(j)];
    }
    std::size_t run = 0;
    for (std::size_t j = 0; j < per_band.size(); ++j) {
        const bool grows = j > 0 && per_band[j] >= per_band[j - 1] && per_band[j - 1] > 0;
        run = per_band[j] == 0 ? 0 : (grows ? run + 1 : 1);
        if (run >= 4) rep.oscillation_signature = true;
    }

    // Finest tail: walk outward from t0 while the running intersection is non-empty.
    TypeSet core = tl.sets[idx.front()];
    rep.tail_samples = 1;
    rep.tail_extent = std::abs(tl.grid[idx.front()] - t0);
    for (std::size_t q = 1; q < idx.size(); ++q) {
        TypeSet next;
        const auto& cur = tl.sets[idx[q]];
        std::set_intersection(core.begin(), core.end(), cur.begin(), cur.end(), std::back_inserter(next));
        if (next.empty()) break;
        core = std::move(next);
        ++rep.tail_samples;
        rep.tail_extent = std::abs(tl.grid[idx[q]] - t0);
    }
    rep.core = core;
    rep.contained_in_base = subset(core, base);
    if (!rep.oscillation_signature) rep.set = core;
    return rep;
}

} // namespace detail

/// One-sided limit sets of I_min(t) at t0 and the checks of both stabilization claims.
inline StabilizationReport stabilization_report(const TypeTimeline& tl, const TypeSet& base_set)
{
    StabilizationReport rep;
    rep.base_set = base_set;
    rep.right = detail::side_report(tl, +1, base_set);
    rep.left = detail::side_report(tl, -1, base_set);
    rep.contained_in_base = true;
    for (const auto* s : {&rep.right, &rep.left})
        if (s->samples > 0 && (!s->set || !s->contained_in_base)) rep.contained_in_base = false;

    rep.claim2_applicable = (rep.right.set && *rep.right.set == base_set) || (rep.left.set && *rep.left.set == base_set);
    if (rep.claim2_applicable) {
        rep.claim2_extent = std::min(rep.right.samples ? rep.right.tail_extent : rep.left.tail_extent,
                                     rep.left.samples ? rep.left.tail_extent : rep.right.tail_extent);
        rep.claim2_holds = true;
        for (const auto* s : {&rep.right, &rep.left})
            if (s->samples > 0 && !(s->set && *s->set == base_set)) rep.claim2_holds = false;
        const double t0 = tl.grid[tl.base];
        for (std::size_t i = 0; i < tl.grid.size(); ++i) {
            if (tl.flagged[i] || std::abs(tl.grid[i] - t0) > rep.claim2_extent) continue;
            if (!detail::subset(base_set, tl.sets[i])) rep.claim2_holds = false;
        }
    }
    return rep;
}

inline StabilizationReport stabilization_report(const TypeTimeline& tl)
{
    return stabilization_report(tl, tl.sets[tl.base]);
}

/// Which stabilization hypothesis the base configuration satisfies.
enum class Hypothesis { NonDegenerate, Stable, Outside };

inline std::string hypothesis_name(Hypothesis h)
{
    switch (h) {
    case Hypothesis::NonDegenerate: return "non-degenerate";
    case Hypothesis::Stable: return "stable";
    case Hypothesis::Outside: return "outside theorem hypotheses";
    }
    return "?";
}

inline Hypothesis classify_hypothesis(const SmtResult& res, const Tolerances& tol = {})
{
    bool nondegenerate = true;
    for (const auto& e : res.types) nondegenerate = nondegenerate && e.solve.degenerate_edges.empty();
    if (nondegenerate) return Hypothesis::NonDegenerate;
    for (const auto& v : classify_stability(res, tol))
        if (!v.stable) return Hypothesis::Outside;
    return Hypothesis::Stable;
}

// ---------------------------------------------------------------------------
// named scenarios

/// Flatness used by the oscillating scenarios. With a = 1 the profile stays
/// below 1e-40 on (0, 0.1] and no oscillation is visible in double precision.
inline constexpr double kScenarioFlatness = 0.004;

inline PolynomialCurve fixed_point(Point p) { return PolynomialCurve{{std::move(p)}}; }

inline std::vector<std::string> scenario_names()
{
    return {"figure1", "figure2", "square-diagonal", "square-transversal"};
}

inline DeformationScene scenario_library(const std::string& name)
{
    DeformationScene s;
    s.name = name;
    s.t0 = 0.0;
    s.window = 0.1;
    const double c = std::cos(kTwoThirdsPi), sn = std::sin(kTwoThirdsPi);
    const double inv = 1.0 / std::numbers::sqrt2;
    if (name == "figure1") {
        // O at the origin, A on the ray at 2pi/3, B oscillating about the abscissa
        s.curves = {fixed_point({0.0, 0.0}), fixed_point({c, sn}), OscillatoryCurve{{1.0, 0.0}, {0.0, 0.25}, kScenarioFlatness}};
        s.samples = 4096;
    } else if (name == "figure2") {
        // unit square, the corner (1,1) oscillating across the diagonal through it
        s.curves = {fixed_point({0.0, 0.0}), fixed_point({1.0, 0.0}),
                    OscillatoryCurve{{1.0, 1.0}, {0.25 * inv, -0.25 * inv}, kScenarioFlatness}, fixed_point({0.0, 1.0})};
        s.samples = 4096;
    } else if (name == "square-diagonal") {
        s.curves = {fixed_point({0.0, 0.0}), fixed_point({1.0, 0.0}), PolynomialCurve{{{1.0, 1.0}, {1.0, 1.0}}},
                    fixed_point({0.0, 1.0})};
        s.samples = 64;
    } else if (name == "square-transversal") {
        s.curves = {fixed_point({0.0, 0.0}), fixed_point({1.0, 0.0}), PolynomialCurve{{{1.0, 1.0}, {inv, -inv}}},
                    fixed_point({0.0, 1.0})};
        s.samples = 64;
    } else {
        throw StructuralError("unknown scenario '" + name + "'");
    }
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Pollak's angle criterion

struct PollakCheck {
    double angle_01 = 0.0;          ///< vertical angle at O subtending sides 01 and 23
    double angle_12 = 0.0;          ///< vertical angle at O subtending sides 12 and 30
    std::array<double, 2> lengths{}; ///< mpn of the trees with moustaches on {01, 23} and on {12, 30}
    std::array<std::size_t, 2> type_ids{};
    bool both_nondegenerate = false;
    int predicted = -1;             ///< 0 or 1; -1 when the angles tie
    std::vector<int> minimizers;    ///< which of the two trees the solver finds shortest (tie band)
    bool agrees = false;
};

namespace detail {

// Leaf paired with label 0 at its interior neighbour in a 4-leaf binary tree.
inline int partner_of_zero(const BinaryTree& b)
{
    const auto& t = b.tree();
    const auto inc = t.incidence();
    const std::size_t v0 = *t.vertex_with_tag(0);
    const std::size_t hub = t.edges[inc[v0][0]].other(v0);
    for (auto e : inc[hub]) {
        const auto w = t.edges[e].other(hub);
        if (w != v0 && t.vertices[w].boundary) return t.vertices[w].tags[0];
    }
    return -1;
}

} // namespace detail

/// Quadrangle q0 q1 q2 q3 in convex position, in cyclic order.
inline PollakCheck pollak_check(std::span<const Point> quad, const Tolerances& tol = {})
{
    if (quad.size() != 4) throw StructuralError("Pollak check needs a quadrangle");
    for (const auto& p : quad)
        if (p.size() != 2) throw StructuralError("Pollak check is planar");
    // diagonal intersection q0 + s (q2 - q0) = q1 + u (q3 - q1)
    const double ax = quad[2][0] - quad[0][0], ay = quad[2][1] - quad[0][1];
    const double bx = quad[3][0] - quad[1][0], by = quad[3][1] - quad[1][1];
    const double det = ax * (-by) - ay * (-bx);
    if (det == 0.0) throw StructuralError("quadrangle diagonals are parallel");
    const double rx = quad[1][0] - quad[0][0], ry = quad[1][1] - quad[0][1];
    const double s = (rx * (-by) - ry * (-bx)) / det;
    const double u = (ax * ry - ay * rx) / det;
    if (!(s > 0.0 && s < 1.0 && u > 0.0 && u < 1.0)) throw StructuralError("quadrangle is not convex");
    const Point o{quad[0][0] + s * ax, quad[0][1] + s * ay};

    PollakCheck pc;
    pc.angle_01 = angle_between(o, quad[0], quad[1]);
    pc.angle_12 = angle_between(o, quad[1], quad[2]);
    const auto trees = enumerate_binary_trees(4);
    bool nondeg = true;
    for (std::size_t i = 0; i < trees.size(); ++i) {
        const int partner = detail::partner_of_zero(trees[i]);
        if (partner == 2) continue; // the crossing type
        const std::size_t slot = partner == 1 ? 0 : 1;
        const auto res = solve_mpn(trees[i], quad, tol);
        pc.lengths[slot] = res.length;
        pc.type_ids[slot] = i;
        nondeg = nondeg && res.degenerate_edges.empty();
    }
    pc.both_nondegenerate = nondeg;
    if (std::abs(pc.angle_01 - pc.angle_12) > tol.angle) pc.predicted = pc.angle_01 < pc.angle_12 ? 0 : 1;
    const double best = std::min(pc.lengths[0], pc.lengths[1]);
    for (int k = 0; k < 2; ++k)
        if (within_tie(pc.lengths[static_cast<std::size_t>(k)], best, tol.tie)) pc.minimizers.push_back(k);
    pc.agrees = pc.predicted < 0 ? pc.minimizers.size() == 2
                                 : pc.minimizers.size() == 1 && pc.minimizers[0] == pc.predicted;
    return pc;
}

} // namespace xnet

#endif
