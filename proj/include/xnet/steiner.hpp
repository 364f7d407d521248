#ifndef XNET_STEINER_HPP
#define XNET_STEINER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "metric.hpp"
#include "network.hpp"
#include "tolerances.hpp"
#include "tree.hpp"
#include "variation.hpp"

// Minimal parametric networks of binary types in Euclidean space and the
// Steiner minimal trees assembled from them.

namespace xnet {

struct ParametricSolveResult {
    Network network;                         ///< positions for every vertex of the binary type
    double length = 0.0;
    bool converged = false;
    std::size_t iterations = 0;              ///< Newton steps over all stages
    double gradient_norm = 0.0;              ///< at the free vertices of the contracted problem
    std::vector<std::size_t> degenerate_edges;
    std::optional<double> min_hessian_eigenvalue; ///< present for non-degenerate solves
};

inline constexpr std::size_t kMaxNewtonIterations = 10'000;

namespace detail {

// Length of a tree whose pinned vertices are fixed and whose free vertices are
// packed into one coordinate vector, optionally smoothed by delta.
struct LengthObjective {
    std::vector<TreeEdge> edges;
    std::vector<Point> pinned;          // per vertex; used when slot == npos
    std::vector<std::size_t> slot;      // per vertex; free index or npos
    std::size_t k = 0;
    std::size_t free_count = 0;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    double coord(const Eigen::VectorXd& z, std::size_t v, std::size_t a) const
    {
        return slot[v] == npos ? pinned[v][a] : z[static_cast<Eigen::Index>(slot[v] * k + a)];
    }

    Eigen::VectorXd diff(const Eigen::VectorXd& z, const TreeEdge& e) const
    {
        Eigen::VectorXd d(static_cast<Eigen::Index>(k));
        for (std::size_t a = 0; a < k; ++a) d[static_cast<Eigen::Index>(a)] = coord(z, e.a, a) - coord(z, e.b, a);
        return d;
    }

    double value(const Eigen::VectorXd& z, double delta) const
    {
        double s = 0.0;
        for (const auto& e : edges) s += std::sqrt(diff(z, e).squaredNorm() + delta * delta);
        return s;
    }

    double min_edge(const Eigen::VectorXd& z) const
    {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& e : edges) m = std::min(m, diff(z, e).norm());
        return m;
    }

    void derivatives(const Eigen::VectorXd& z, double delta, Eigen::VectorXd& g, Eigen::MatrixXd& H) const
    {
        const auto dim = static_cast<Eigen::Index>(free_count * k);
        const auto K = static_cast<Eigen::Index>(k);
        g.setZero(dim);
        H.setZero(dim, dim);
        for (const auto& e : edges) {
            const Eigen::VectorXd d = diff(z, e);
            const double s = std::sqrt(d.squaredNorm() + delta * delta);
            const Eigen::VectorXd u = d / s;
            const Eigen::MatrixXd B = (Eigen::MatrixXd::Identity(K, K) - u * u.transpose()) / s;
            const bool fa = slot[e.a] != npos, fb = slot[e.b] != npos;
            const auto ia = fa ? static_cast<Eigen::Index>(slot[e.a] * k) : 0;
            const auto ib = fb ? static_cast<Eigen::Index>(slot[e.b] * k) : 0;
            if (fa) {
                g.segment(ia, K) += u;
                H.block(ia, ia, K, K) += B;
            }
            if (fb) {
                g.segment(ib, K) -= u;
                H.block(ib, ib, K, K) += B;
            }
            if (fa && fb) {
                H.block(ia, ib, K, K) -= B;
                H.block(ib, ia, K, K) -= B;
            }
        }
    }
};

struct NewtonOutcome {
    std::size_t iterations = 0;
    double gradient_norm = 0.0;
    bool collapsed = false; // an edge fell to the collapse threshold (exact objective only)
};

// Damped Newton with Armijo backtracking. With delta = 0 it stops as soon as an
// edge shrinks to `collapse`, since the objective is not smooth there.
inline NewtonOutcome newton(const LengthObjective& obj, Eigen::VectorXd& z, double delta, double gtol, double collapse,
                            std::size_t max_iter)
{
    NewtonOutcome out;
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    if (z.size() == 0) return out;
    for (; out.iterations < max_iter; ++out.iterations) {
        obj.derivatives(z, delta, g, H);
        out.gradient_norm = g.norm();
        if (out.gradient_norm <= gtol) break;
        Eigen::VectorXd p;
        double lambda = 0.0;
        const double scale = H.diagonal().cwiseAbs().maxCoeff();
        for (int attempt = 0; attempt < 30; ++attempt) {
            Eigen::MatrixXd M = H;
            if (lambda > 0.0) M.diagonal().array() += lambda;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
            if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
                p = ldlt.solve(-g);
                if (p.allFinite() && g.dot(p) < 0.0) break;
            }
            lambda = lambda == 0.0 ? 1e-10 * std::max(scale, 1.0) : lambda * 10.0;
            p.resize(0);
        }
        if (p.size() == 0) p = -g; // steepest descent as a last resort
        const double f0 = obj.value(z, delta);
        const double slope = g.dot(p);
        // Newton decrement: predicted decrease already below what f can resolve
        if (delta > 0.0 && -slope <= 1e-15 * std::abs(f0)) break;
        double alpha = 1.0;
        bool accepted = false;
        Eigen::VectorXd trial;
        for (int halving = 0; halving < 60; ++halving, alpha *= 0.5) {
            trial = z + alpha * p;
            const double f1 = obj.value(trial, delta);
            // small absolute slack: near the optimum f is flat to rounding
            if (f1 <= f0 + 1e-4 * alpha * slope + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(f0)) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        const double moved = (trial - z).norm();
        z = trial;
        if (delta == 0.0 && obj.min_edge(z) <= collapse) {
            out.collapsed = true;
            ++out.iterations;
            obj.derivatives(z, delta, g, H);
            out.gradient_norm = g.norm();
            return out;
        }
        if (moved <= 1e-17 * std::max(1.0, z.norm())) {
            ++out.iterations;
            obj.derivatives(z, delta, g, H);
            out.gradient_norm = g.norm();
            break;
        }
    }
    return out;
}

// Boundary positions indexed by tree vertex, from per-label points.
inline std::vector<Point> anchor_positions(const BoundedTree& t, std::span<const Point> points)
{
    std::vector<Point> pos(t.vertex_count());
    std::size_t k = points.empty() ? 0 : points[0].size();
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
        const auto& vx = t.vertices[v];
        if (!vx.boundary) continue;
        if (vx.tags.size() != 1) throw StructuralError("every boundary vertex must carry exactly one label");
        const int tag = vx.tags[0];
        if (tag < 0 || static_cast<std::size_t>(tag) >= points.size())
            throw StructuralError("no position for boundary label " + std::to_string(tag));
        if (points[static_cast<std::size_t>(tag)].size() != k) throw StructuralError("boundary points differ in dimension");
        pos[v] = points[static_cast<std::size_t>(tag)];
    }
    return pos;
}

} // namespace detail

/// Interior-coordinate Hessian of the network length, assembled from the
/// per-edge second-variation blocks, and its least eigenvalue.
inline double hessian_certificate(const ParametricSolveResult& res)
{
    if (!res.degenerate_edges.empty()) throw SingularityError("Hessian certificate refuses a degenerate network");
    const auto& net = res.network;
    const auto& t = net.tree;
    std::vector<std::size_t> slot(t.vertex_count(), detail::LengthObjective::npos);
    std::size_t free_count = 0;
    for (std::size_t v = 0; v < t.vertex_count(); ++v)
        if (!t.vertices[v].boundary) slot[v] = free_count++;
    if (free_count == 0) throw SingularityError("network has no interior vertices");
    const std::size_t k = net.positions[0].size();
    const auto K = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(free_count * k), static_cast<Eigen::Index>(free_count * k));
    Eigen::MatrixXd block(K, K);
    for (const auto& e : t.edges) {
        segment_hessian_block(net.positions[e.a], net.positions[e.b], block);
        const bool fa = slot[e.a] != detail::LengthObjective::npos, fb = slot[e.b] != detail::LengthObjective::npos;
        const auto ia = static_cast<Eigen::Index>(fa ? slot[e.a] * k : 0);
        const auto ib = static_cast<Eigen::Index>(fb ? slot[e.b] * k : 0);
        if (fa) H.block(ia, ia, K, K) += block;
        if (fb) H.block(ib, ib, K, K) += block;
        if (fa && fb) {
            H.block(ia, ib, K, K) -= block;
            H.block(ib, ia, K, K) -= block;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

/// Shortest network of binary type G with boundary label i placed at points[i].
/// Smoothed continuation from a harmonic start, then an exact Newton polish on
/// the quotient over collapsed edges.
inline ParametricSolveResult solve_mpn(const BinaryTree& g, std::span<const Point> points, const Tolerances& tol = {})
{
    const auto& t = g.tree();
    if (t.boundary_vertices().size() < 3) throw StructuralError("minimal parametric networks need at least three boundary vertices");
    ParametricSolveResult res;
    res.network.tree = t;
    auto pos = detail::anchor_positions(t, points);
    const std::size_t k = pos[t.boundary_vertices()[0]].size();
    if (k == 0) throw StructuralError("boundary points must have positive dimension");
    std::vector<Point> anchors;
    for (auto v : t.boundary_vertices()) anchors.push_back(pos[v]);
    const double diam = diameter(anchors);
    const double collapse = tol.degenerate * diam;

    // harmonic start: every interior vertex at the mean of its neighbours
    detail::LengthObjective obj;
    obj.edges = t.edges;
    obj.k = k;
    obj.slot.assign(t.vertex_count(), detail::LengthObjective::npos);
    obj.pinned = pos;
    for (std::size_t v = 0; v < t.vertex_count(); ++v)
        if (!t.vertices[v].boundary) obj.slot[v] = obj.free_count++;
    const auto F = static_cast<Eigen::Index>(obj.free_count);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(F, F);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(F, static_cast<Eigen::Index>(k));
    for (const auto& e : t.edges) {
        for (auto [x, y] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
            if (obj.slot[x] == detail::LengthObjective::npos) continue;
            const auto i = static_cast<Eigen::Index>(obj.slot[x]);
            L(i, i) += 1.0;
            if (obj.slot[y] == detail::LengthObjective::npos)
                for (std::size_t a = 0; a < k; ++a) rhs(i, static_cast<Eigen::Index>(a)) += pos[y][a];
            else
                L(i, static_cast<Eigen::Index>(obj.slot[y])) -= 1.0;
        }
    }
    const Eigen::MatrixXd start = L.ldlt().solve(rhs);
    Eigen::VectorXd z(F * static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < F; ++i)
        for (std::size_t a = 0; a < k; ++a) z[i * static_cast<Eigen::Index>(k) + static_cast<Eigen::Index>(a)] = start(i, static_cast<Eigen::Index>(a));

    if (diam == 0.0) {
        // every boundary point coincides: the whole network collapses
        for (std::size_t v = 0; v < t.vertex_count(); ++v)
            if (!t.vertices[v].boundary) pos[v] = anchors[0];
        res.network.positions = pos;
        res.converged = true;
        for (std::size_t e = 0; e < t.edge_count(); ++e) res.degenerate_edges.push_back(e);
        return res;
    }

    for (double delta = 1e-3 * diam; delta >= 0.99e-12 * diam; delta *= 0.1) {
        const auto out = detail::newton(obj, z, delta, 1e-13, 0.0, kMaxNewtonIterations);
        res.iterations += out.iterations;
    }
    for (std::size_t v = 0; v < t.vertex_count(); ++v)
        if (obj.slot[v] != detail::LengthObjective::npos)
            for (std::size_t a = 0; a < k; ++a) {
                pos[v].resize(k);
                pos[v][a] = z[static_cast<Eigen::Index>(obj.slot[v] * k + a)];
            }

    // exact polish on the quotient over collapsed edges; repeat if more collapse
    std::vector<char> contracted(t.edge_count(), 0);
    auto mark_short = [&] {
        bool any = false;
        for (std::size_t e = 0; e < t.edge_count(); ++e)
            if (!contracted[e] && rho_p(pos[t.edges[e].a], pos[t.edges[e].b]) <= collapse) {
                contracted[e] = 1;
                any = true;
            }
        return any;
    };
    mark_short();
    for (std::size_t round = 0; round <= t.edge_count(); ++round) {
        std::vector<std::size_t> cset;
        for (std::size_t e = 0; e < t.edge_count(); ++e)
            if (contracted[e]) cset.push_back(e);
        const auto q = quotient_with_projection(t, cset);
        detail::LengthObjective qobj;
        qobj.edges = q.tree.edges;
        qobj.k = k;
        const std::size_t blocks = q.tree.vertex_count();
        qobj.slot.assign(blocks, detail::LengthObjective::npos);
        qobj.pinned.assign(blocks, Point{});
        std::vector<Point> mean(blocks, Point(k, 0.0));
        std::vector<std::size_t> members(blocks, 0);
        for (std::size_t v = 0; v < t.vertex_count(); ++v) {
            const auto b = q.projection[v];
            if (t.vertices[v].boundary) qobj.pinned[b] = pos[v];
            for (std::size_t a = 0; a < k; ++a) mean[b][a] += pos[v][a];
            ++members[b];
        }
        for (std::size_t b = 0; b < blocks; ++b)
            if (qobj.pinned[b].empty()) qobj.slot[b] = qobj.free_count++;
        Eigen::VectorXd qz(static_cast<Eigen::Index>(qobj.free_count * k));
        for (std::size_t b = 0; b < blocks; ++b)
            if (qobj.slot[b] != detail::LengthObjective::npos)
                for (std::size_t a = 0; a < k; ++a)
                    qz[static_cast<Eigen::Index>(qobj.slot[b] * k + a)] = mean[b][a] / static_cast<double>(members[b]);
        const auto out = detail::newton(qobj, qz, 0.0, 1e-3 * tol.grad * diam, collapse, 200);
        res.iterations += out.iterations;
        res.gradient_norm = out.gradient_norm;
        for (std::size_t v = 0; v < t.vertex_count(); ++v) {
            const auto b = q.projection[v];
            pos[v] = qobj.slot[b] == detail::LengthObjective::npos ? qobj.pinned[b] : Point(k);
            if (qobj.slot[b] != detail::LengthObjective::npos)
                for (std::size_t a = 0; a < k; ++a) pos[v][a] = qz[static_cast<Eigen::Index>(qobj.slot[b] * k + a)];
        }
        if (!(out.collapsed && mark_short())) break;
    }

    res.network.positions = pos;
    res.length = res.network.length();
    for (std::size_t e = 0; e < t.edge_count(); ++e)
        if (res.network.edge_length(e) <= collapse) res.degenerate_edges.push_back(e);
    res.converged = res.gradient_norm <= tol.grad * diam;
    if (res.degenerate_edges.empty()) res.min_hessian_eigenvalue = hessian_certificate(res);
    return res;
}

// ---------------------------------------------------------------------------
// interior-vertex map

struct InteriorMapProbe {
    double h = 0.0;
    std::vector<std::size_t> interior;                 ///< rows: interior vertex, then coordinate
    std::vector<std::pair<int, std::size_t>> columns;  ///< boundary label and coordinate
    std::array<Eigen::MatrixXd, 3> jacobians;          ///< central differences at h, h/2, h/4
    double consistency_ratio = 0.0;                    ///< |J_h - J_h/2| / |J_h/2 - J_h/4|, ~4 when smooth
};

/// Finite-difference Jacobian of the interior positions with respect to each
/// boundary coordinate. Default step: 1e-2 times the boundary diameter.
inline InteriorMapProbe interior_map_probe(const BinaryTree& g, std::span<const Point> points, double h = 0.0,
                                           const Tolerances& tol = {})
{
    const auto base = solve_mpn(g, points, tol);
    if (!base.degenerate_edges.empty() || !base.converged)
        throw SingularityError("interior map probe needs a converged non-degenerate base network");
    const auto& t = g.tree();
    const std::size_t k = base.network.positions[0].size();
    InteriorMapProbe probe;
    std::vector<Point> anchors = base.network.boundary_positions();
    probe.h = h > 0.0 ? h : 1e-2 * diameter(anchors);
    for (std::size_t v = 0; v < t.vertex_count(); ++v)
        if (!t.vertices[v].boundary) probe.interior.push_back(v);
    for (auto v : t.boundary_vertices())
        for (std::size_t a = 0; a < k; ++a) probe.columns.emplace_back(t.vertices[v].tags[0], a);

    const auto rows = static_cast<Eigen::Index>(probe.interior.size() * k);
    const auto cols = static_cast<Eigen::Index>(probe.columns.size());
    std::vector<Point> moved(points.begin(), points.end());
    auto interior_at = [&](std::size_t label, std::size_t a, double shift) {
        moved[label][a] = points[label][a] + shift;
        const auto r = solve_mpn(g, moved, tol);
        moved[label][a] = points[label][a];
        if (!r.degenerate_edges.empty()) throw SingularityError("perturbed network degenerates; reduce the probe step");
        Eigen::VectorXd z(rows);
        for (std::size_t i = 0; i < probe.interior.size(); ++i)
            for (std::size_t b = 0; b < k; ++b)
                z[static_cast<Eigen::Index>(i * k + b)] = r.network.positions[probe.interior[i]][b];
        return z;
    };
    double step = probe.h;
    for (std::size_t s = 0; s < 3; ++s, step *= 0.5) {
        probe.jacobians[s].resize(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto [label, a] = probe.columns[static_cast<std::size_t>(c)];
            const auto lab = static_cast<std::size_t>(label);
            probe.jacobians[s].col(c) = (interior_at(lab, a, step) - interior_at(lab, a, -step)) / (2.0 * step);
        }
    }
    const double num = (probe.jacobians[0] - probe.jacobians[1]).norm();
    const double den = (probe.jacobians[1] - probe.jacobians[2]).norm();
    probe.consistency_ratio = den > 0.0 ? num / den : 0.0;
    return probe;
}

// ---------------------------------------------------------------------------
// angle certificates

enum class AngleIssue { AngleBelowThreshold, DegreeAboveThree, UnbalancedJunction };

struct AngleViolation {
    AngleIssue issue;
    std::size_t vertex = 0;
    double value = 0.0; ///< the offending angle, or the degree
};

struct AngleReport {
    bool ok = true;
    double min_angle = std::numeric_limits<double>::infinity();
    std::vector<AngleViolation> violations;
};

inline double angle_between(const Point& at, const Point& p, const Point& q)
{
    double pq = 0.0, pp = 0.0, qq = 0.0;
    for (std::size_t a = 0; a < at.size(); ++a) {
        const double x = p[a] - at[a], y = q[a] - at[a];
        pq += x * y;
        pp += x * x;
        qq += y * y;
    }
    if (!(pp > 0.0) || !(qq > 0.0)) throw SingularityError("angle at a zero-length edge");
    return std::acos(std::clamp(pq / std::sqrt(pp * qq), -1.0, 1.0));
}

/// Checks the local structure of a shortest tree: angles >= 2pi/3, degrees <= 3,
/// and exactly 2pi/3 at every junction of degree 3.
inline AngleReport validate_trace_angles(const Network& net, const Tolerances& tol = {})
{
    net.check();
    AngleReport rep;
    const auto& t = net.tree;
    const auto inc = t.incidence();
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
        const auto& es = inc[v];
        if (es.size() > 3) rep.violations.push_back({AngleIssue::DegreeAboveThree, v, static_cast<double>(es.size())});
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = i + 1; j < es.size(); ++j) {
                const double ang = angle_between(net.positions[v], net.positions[t.edges[es[i]].other(v)],
                                                 net.positions[t.edges[es[j]].other(v)]);
                rep.min_angle = std::min(rep.min_angle, ang);
                if (ang < kTwoThirdsPi - tol.angle) rep.violations.push_back({AngleIssue::AngleBelowThreshold, v, ang});
                else if (es.size() == 3 && std::abs(ang - kTwoThirdsPi) > tol.angle)
                    rep.violations.push_back({AngleIssue::UnbalancedJunction, v, ang});
            }
    }
    rep.ok = rep.violations.empty();
    return rep;
}

/// Network drawn on the given points along an edge set (e.g. a spanning tree).
inline Network network_from_edges(std::span<const Point> points, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                  MetricKind kind = {})
{
    Network net;
    net.kind = kind;
    for (std::size_t i = 0; i < points.size(); ++i) net.tree.add_vertex(true, {static_cast<int>(i)});
    for (auto [a, b] : edges) net.tree.add_edge(a, b);
    net.positions.assign(points.begin(), points.end());
    validate_tree(net.tree);
    return net;
}

// ---------------------------------------------------------------------------
// Steiner minimal trees

inline constexpr std::size_t kMinSteinerPoints = 3;
inline constexpr std::size_t kMaxSteinerPoints = 7;

struct SmtType {
    std::size_t type_id = 0;  ///< index in enumerate_binary_trees(n)
    BinaryTree type;
    ParametricSolveResult solve;
    Network trace;
    AngleReport angles;
};

struct SmtResult {
    double length = 0.0;
    std::vector<SmtType> types;        ///< every binary type within the tie band
    std::vector<double> type_lengths;  ///< mpn length of every binary type, in enumeration order
    bool all_converged = true;
};

/// Steiner minimal trees: the least minimal parametric network over all binary
/// types, with the trace of every tying type.
inline SmtResult smt(std::span<const Point> points, const Tolerances& tol = {})
{
    const std::size_t n = points.size();
    if (n < kMinSteinerPoints) throw StructuralError("smt needs at least three points");
    if (n > kMaxSteinerPoints)
        throw GuardRefusal("smt enumerates (2n-5)!! binary types; refusing n = " + std::to_string(n) + " > " +
                           std::to_string(kMaxSteinerPoints));
    for (std::size_t i = 0; i < n; ++i) {
        if (points[i].size() != points[0].size()) throw StructuralError("points differ in dimension");
        for (std::size_t j = i + 1; j < n; ++j)
            if (rho_p(points[i], points[j]) == 0.0)
                throw StructuralError("points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    }
    const auto trees = enumerate_binary_trees(n);
    SmtResult out;
    std::vector<ParametricSolveResult> solves;
    solves.reserve(trees.size());
    for (const auto& g : trees) {
        solves.push_back(solve_mpn(g, points, tol));
        out.type_lengths.push_back(solves.back().length);
        out.all_converged = out.all_converged && solves.back().converged;
    }
    out.length = *std::min_element(out.type_lengths.begin(), out.type_lengths.end());
    for (std::size_t i = 0; i < trees.size(); ++i) {
        if (!within_tie(out.type_lengths[i], out.length, tol.tie)) continue;
        SmtType entry{i, trees[i], solves[i], trace(solves[i].network, tol), {}};
        entry.angles = validate_trace_angles(entry.trace, tol);
        out.types.push_back(std::move(entry));
    }
    return out;
}

// ---------------------------------------------------------------------------
// stability

enum class InstabilityReason { AngleAtThreshold, MeetingDegree, InvalidTrace };

struct StabilityIssue {
    InstabilityReason reason;
    std::size_t vertex = 0; ///< trace vertex
    double value = 0.0;     ///< meeting angle, or the number of meeting components
};

struct StabilityVerdict {
    std::size_t type_id = 0;
    bool stable = true;
    std::vector<StabilityIssue> reasons;
};

/// A shortest tree is stable when its regular components meet only at
/// boundary vertices of degree two, at angles exceeding 2pi/3 by the margin.
inline StabilityVerdict classify_trace(const SmtType& entry, const Tolerances& tol = {})
{
    StabilityVerdict v;
    v.type_id = entry.type_id;
    if (!entry.angles.ok) v.reasons.push_back({InstabilityReason::InvalidTrace, 0, 0.0});
    const auto& t = entry.trace.tree;
    const auto inc = t.incidence();
    for (std::size_t x = 0; x < t.vertex_count(); ++x) {
        if (!t.vertices[x].boundary || inc[x].size() < 2) continue;
        if (inc[x].size() >= 3) {
            v.reasons.push_back({InstabilityReason::MeetingDegree, x, static_cast<double>(inc[x].size())});
            continue;
        }
        const double ang = angle_between(entry.trace.positions[x], entry.trace.positions[t.edges[inc[x][0]].other(x)],
                                         entry.trace.positions[t.edges[inc[x][1]].other(x)]);
        if (!(ang > kTwoThirdsPi + tol.margin)) v.reasons.push_back({InstabilityReason::AngleAtThreshold, x, ang});
    }
    v.stable = v.reasons.empty();
    return v;
}

inline std::vector<StabilityVerdict> classify_stability(const SmtResult& res, const Tolerances& tol = {})
{
    std::vector<StabilityVerdict> out;
    for (const auto& e : res.types) out.push_back(classify_trace(e, tol));
    return out;
}

inline std::vector<StabilityVerdict> classify_stability(std::span<const Point> points, const Tolerances& tol = {})
{
    return classify_stability(smt(points, tol), tol);
}

} // namespace xnet

#endif
