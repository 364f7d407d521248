#ifndef XNET_FUNCTIONAL_HPP
#define XNET_FUNCTIONAL_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "metric.hpp"
#include "tolerances.hpp"
#include "tree.hpp"

namespace xnet {

/// L_E: the sum of r_ij over an edge set E on n vertices (0 for E empty).
struct EdgeFunctional {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges; ///< 0-based, i < j

    EdgeFunctional() = default;
    EdgeFunctional(std::size_t vertex_count, std::vector<std::pair<std::size_t, std::size_t>> edge_set)
        : n(vertex_count), edges(std::move(edge_set))
    {
        for (auto& [i, j] : edges) {
            if (i == j || i >= n || j >= n) throw StructuralError("edge functional pair out of range");
            if (i > j) std::swap(i, j);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw StructuralError("edge functional pairs must be distinct");
    }

    double operator()(const SemimetricVector& r) const { return eval(r); }

    double eval(const SemimetricVector& r) const
    {
        if (r.n() != n)
            throw StructuralError("functional on " + std::to_string(n) + " vertices applied to a semimetric on " +
                                  std::to_string(r.n()));
        double s = 0.0;
        for (auto [i, j] : edges) s += r(i, j);
        return s;
    }

    std::string label() const
    {
        std::string s;
        for (auto [i, j] : edges) {
            if (!s.empty()) s += ' ';
            s += std::to_string(i + 1) + "-" + std::to_string(j + 1);
        }
        return s.empty() ? "{}" : s;
    }
};

inline double eval_functional(const EdgeFunctional& f, const SemimetricVector& r) { return f.eval(r); }

/// Minimum and maximum of a family with the tie-band index sets (0-based).
struct FamilyExtrema {
    double min_value = 0.0;
    std::vector<std::size_t> argmin;
    double max_value = 0.0;
    std::vector<std::size_t> argmax;
};

inline FamilyExtrema extrema_of_values(std::span<const double> values, double tie = Tolerances{}.tie)
{
    if (values.empty()) throw StructuralError("functional family must be non-empty");
    FamilyExtrema fx;
    fx.min_value = *std::min_element(values.begin(), values.end());
    fx.max_value = *std::max_element(values.begin(), values.end());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (within_tie(values[i], fx.min_value, tie)) fx.argmin.push_back(i);
        if (values[i] >= fx.max_value * (1.0 - tie) - tie) fx.argmax.push_back(i);
    }
    return fx;
}

/// I_min / I_max of a family of functionals evaluated at r.
template <class Functional>
FamilyExtrema family_extrema(const std::vector<Functional>& family, const SemimetricVector& r,
                             double tie = Tolerances{}.tie)
{
    if (family.empty()) throw StructuralError("functional family must be non-empty");
    std::vector<double> values;
    values.reserve(family.size());
    for (const auto& f : family) values.push_back(f(r));
    return extrema_of_values(values, tie);
}

inline constexpr std::size_t kMaxSpanningTreeVertices = 8;

/// Every labelled spanning tree of the complete graph K_n, n^(n-2) of them, in
/// lexicographic order of their sorted edge lists.
inline std::vector<EdgeFunctional> enumerate_spanning_trees(std::size_t n)
{
    if (n < 2 || n > kMaxSpanningTreeVertices)
        throw GuardRefusal("spanning tree enumeration needs 2 <= n <= " + std::to_string(kMaxSpanningTreeVertices) +
                           ", got n = " + std::to_string(n));
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);

    const std::size_t k = n - 1;
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    std::vector<EdgeFunctional> out;
    while (true) {
        detail::DisjointSets ds(n);
        bool acyclic = true;
        for (std::size_t p : pick)
            if (!ds.unite(all[p].first, all[p].second)) {
                acyclic = false;
                break;
            }
        if (acyclic) {
            EdgeFunctional f;
            f.n = n;
            for (std::size_t p : pick) f.edges.push_back(all[p]);
            out.push_back(std::move(f));
        }
        // next k-combination of all.size()
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == all.size() - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

/// Greedy (Kruskal) minimal spanning tree length of a semimetric; any n.
inline double kruskal_length(const SemimetricVector& r)
{
    const std::size_t n = r.n();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::stable_sort(pairs.begin(), pairs.end(), [&](auto a, auto b) { return r(a.first, a.second) < r(b.first, b.second); });
    detail::DisjointSets ds(n);
    double len = 0.0;
    for (auto [i, j] : pairs)
        if (ds.unite(i, j)) len += r(i, j);
    return len;
}

struct MstResult {
    double length = 0.0;
    std::vector<EdgeFunctional> types;   ///< every spanning tree within the tie band
    std::vector<std::size_t> type_ids;   ///< their indices in enumerate_spanning_trees(n)
};

/// Exhaustive minimal spanning trees of a semimetric, with all tying types.
inline MstResult mst(const SemimetricVector& r, const Tolerances& tol = {})
{
    const auto trees = enumerate_spanning_trees(r.n());
    const auto fx = family_extrema(trees, r, tol.tie);
    MstResult res;
    res.length = fx.min_value;
    res.type_ids = fx.argmin;
    for (std::size_t i : fx.argmin) res.types.push_back(trees[i]);
    return res;
}

inline MstResult mst(std::span<const Point> points, MetricKind kind = {}, const Tolerances& tol = {})
{
    return mst(pullback(points, kind), tol);
}

/// Greedy length only; no enumeration guard.
inline double mst_length(std::span<const Point> points, MetricKind kind = {})
{
    return kruskal_length(pullback(points, kind));
}

} // namespace xnet

#endif
