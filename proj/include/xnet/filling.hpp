#ifndef XNET_FILLING_HPP
#define XNET_FILLING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"
#include "functional.hpp"
#include "metric.hpp"
#include "simplex.hpp"
#include "tolerances.hpp"
#include "tree.hpp"

namespace xnet {

using Rational = mpq_class;

/// Exact rational value of a double (every finite double is a dyadic rational).
inline Rational exact(double v)
{
    Rational q;
    q = v; // mpq_set_d is exact
    return q;
}

// ---------------------------------------------------------------------------
// weighted trees

/// A tree whose boundary vertices carry the labels 0..n-1 of a finite space,
/// with a (possibly signed) weight per edge.
struct WeightedTree {
    BoundedTree tree;
    std::vector<double> weights;
};

namespace detail {

inline std::size_t labelled_vertex(const BoundedTree& t, int label)
{
    auto v = t.vertex_with_tag(label);
    if (!v) throw StructuralError("label " + std::to_string(label) + " is not on the tree boundary");
    return *v;
}

// Edge indices on the unique path between two vertices.
inline std::vector<std::size_t> tree_path(const BoundedTree& t, std::size_t from, std::size_t to)
{
    const auto inc = t.incidence();
    std::vector<std::size_t> via(t.vertex_count(), static_cast<std::size_t>(-1));
    std::vector<char> seen(t.vertex_count(), 0);
    std::vector<std::size_t> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (v == to) break;
        for (auto e : inc[v]) {
            const auto w = t.edges[e].other(v);
            if (seen[w]) continue;
            seen[w] = 1;
            via[w] = e;
            stack.push_back(w);
        }
    }
    std::vector<std::size_t> path;
    for (auto v = to; v != from; v = t.edges[via[v]].other(v)) path.push_back(via[v]);
    return path;
}

// Number of labels 0..n-1 on the boundary; requires each to be present exactly once.
inline std::size_t label_count(const BoundedTree& t)
{
    std::set<int> seen;
    for (const auto& v : t.vertices)
        for (int tag : v.tags)
            if (!seen.insert(tag).second) throw StructuralError("label " + std::to_string(tag) + " appears twice");
    const auto n = seen.size();
    if (n == 0 || *seen.begin() != 0 || *seen.rbegin() != static_cast<int>(n) - 1)
        throw StructuralError("tree boundary labels must be exactly 0..n-1");
    return n;
}

// Path edge lists for every pair (i < j), lexicographic.
inline std::vector<std::vector<std::size_t>> pair_paths(const BoundedTree& t, std::size_t n)
{
    std::vector<std::vector<std::size_t>> out;
    out.reserve(pair_count(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.push_back(tree_path(t, labelled_vertex(t, static_cast<int>(i)), labelled_vertex(t, static_cast<int>(j))));
    return out;
}

} // namespace detail

/// omega(gamma_xy): sum of weights along the unique tree path between labels x and y.
inline double tree_path_weight(const WeightedTree& wt, int x, int y)
{
    if (wt.weights.size() != wt.tree.edge_count()) throw StructuralError("one weight per edge required");
    const auto a = detail::labelled_vertex(wt.tree, x);
    const auto b = detail::labelled_vertex(wt.tree, y);
    double s = 0.0;
    for (auto e : detail::tree_path(wt.tree, a, b)) s += wt.weights[e];
    return s;
}

/// True iff r_xy <= omega(gamma_xy) + slack for every pair.
inline bool is_generalized_filling(const WeightedTree& wt, const SemimetricVector& r, double slack = Tolerances{}.triangle_slack)
{
    const auto n = detail::label_count(wt.tree);
    if (n != r.n()) throw StructuralError("tree boundary does not match the space");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (r(i, j) > tree_path_weight(wt, static_cast<int>(i), static_cast<int>(j)) + slack) return false;
    return true;
}

// ---------------------------------------------------------------------------
// minimal parametric fillings

struct MpfResult {
    Rational exact_weight;
    double weight = 0.0;
    std::vector<Rational> exact_weights; ///< optimal omega per tree edge
    std::vector<double> weights;
    std::vector<Rational> pair_multipliers; ///< optimal dual lambda per pair (lexicographic)
};

/// Minimal weight of a (generalized, when `signed_weights`) filling of type T,
/// solved exactly. The LP is the dual program: maximize sum r_xy lambda_xy over
/// lambda >= 0 with sum over pairs separated by e of lambda_xy = 1 (<= 1 when
/// weights must be non-negative) for each edge e; omega is read from its duals.
inline MpfResult mpf_exact(const std::vector<Rational>& r, std::size_t n, const BoundedTree& t, bool signed_weights)
{
    validate_tree(t);
    if (detail::label_count(t) != n) throw StructuralError("tree boundary does not match the space");
    for (std::size_t v = 0; v < t.vertex_count(); ++v)
        if (t.vertices[v].boundary && t.vertices[v].tags.empty())
            throw StructuralError("every boundary vertex of a filling type must carry a point label");
    const auto paths = detail::pair_paths(t, n);
    const std::size_t m = paths.size();
    const std::size_t edges = t.edge_count();

    LinearProgram<Rational> lp(m);
    for (std::size_t p = 0; p < m; ++p) lp.objective[p] = -r[p];
    std::vector<std::vector<Rational>> rows(edges, std::vector<Rational>(m, Rational(0)));
    for (std::size_t p = 0; p < m; ++p)
        for (auto e : paths[p]) rows[e][p] = 1;
    for (std::size_t e = 0; e < edges; ++e)
        lp.add_row(rows[e], signed_weights ? Relation::Equal : Relation::LessEqual, Rational(1));

    const auto sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw StructuralError("filling program is unbounded or infeasible; the tree type is malformed");

    MpfResult res;
    res.exact_weight = -sol.objective;
    res.pair_multipliers = sol.x;
    res.exact_weights.resize(edges);
    for (std::size_t e = 0; e < edges; ++e) res.exact_weights[e] = -sol.duals[e];

    // exact certificate: omega is a filling of the stated sign with total weight equal to the optimum
    Rational total(0);
    for (const auto& w : res.exact_weights) {
        if (!signed_weights && w < 0) throw std::logic_error("filling dual produced a negative weight");
        total += w;
    }
    for (std::size_t p = 0; p < m; ++p) {
        Rational s(0);
        for (auto e : paths[p]) s += res.exact_weights[e];
        if (s < r[p]) throw std::logic_error("filling dual violates a pair constraint");
    }
    if (total != res.exact_weight) throw std::logic_error("filling primal and dual values differ");

    res.weight = res.exact_weight.get_d();
    for (const auto& w : res.exact_weights) res.weights.push_back(w.get_d());
    return res;
}

inline MpfResult mpf(const SemimetricVector& r, const BoundedTree& t, bool signed_weights)
{
    std::vector<Rational> q;
    q.reserve(r.size());
    for (double v : r.values()) q.push_back(exact(v));
    return mpf_exact(q, r.n(), t, signed_weights);
}

inline constexpr std::size_t kMaxFillingPoints = 7;

struct MinimalFilling {
    double weight = 0.0;
    Rational exact_weight;
    std::vector<std::size_t> type_ids; ///< indices into enumerate_binary_trees(n)
    std::vector<BinaryTree> types;
    std::vector<double> type_weights;  ///< mpf_- of every binary type, in enumeration order
};

/// Minimal filling weight: the least generalized parametric filling over binary types.
inline MinimalFilling mf(const SemimetricVector& r, const Tolerances& tol = {})
{
    if (r.n() < 2 || r.n() > kMaxFillingPoints)
        throw GuardRefusal("minimal filling needs 2 <= n <= " + std::to_string(kMaxFillingPoints));
    const auto trees = enumerate_binary_trees(r.n());
    std::vector<Rational> q;
    for (double v : r.values()) q.push_back(exact(v));
    MinimalFilling out;
    std::vector<Rational> exact_values;
    for (const auto& t : trees) {
        auto res = mpf_exact(q, r.n(), t.tree(), true);
        out.type_weights.push_back(res.weight);
        exact_values.push_back(res.exact_weight);
    }
    const auto best = std::min_element(exact_values.begin(), exact_values.end()) - exact_values.begin();
    out.exact_weight = exact_values[static_cast<std::size_t>(best)];
    out.weight = out.exact_weight.get_d();
    const auto fx = extrema_of_values(out.type_weights, tol.tie);
    out.type_ids = fx.argmin;
    for (auto i : fx.argmin) out.types.push_back(trees[i]);
    return out;
}

// ---------------------------------------------------------------------------
// multi cyclic orders and multi-tours

/// A map Z_{nk} -> {0..n-1}: consecutive entries differ (cyclically) and every
/// label occurs exactly k times.
struct MultiCyclicOrder {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<int> seq;

    MultiCyclicOrder() = default;
    MultiCyclicOrder(std::size_t labels, std::vector<int> sequence) : n(labels), seq(std::move(sequence))
    {
        if (n < 2 || seq.empty() || seq.size() % n != 0) throw StructuralError("multi cyclic order length must be a multiple of n");
        k = seq.size() / n;
        std::vector<std::size_t> count(n, 0);
        for (std::size_t j = 0; j < seq.size(); ++j) {
            if (seq[j] < 0 || static_cast<std::size_t>(seq[j]) >= n) throw StructuralError("multi cyclic order label out of range");
            ++count[static_cast<std::size_t>(seq[j])];
            if (seq[j] == seq[(j + 1) % seq.size()]) throw StructuralError("multi cyclic order repeats a label consecutively");
        }
        for (auto c : count)
            if (c != k) throw StructuralError("every label must occur exactly k times");
    }

    /// Occurrences of each unordered pair among consecutive entries, lexicographic pair order.
    std::vector<int> pair_counts() const
    {
        std::vector<int> c(pair_count(n), 0);
        for (std::size_t j = 0; j < seq.size(); ++j)
            ++c[pair_index(n, static_cast<std::size_t>(seq[j]), static_cast<std::size_t>(seq[(j + 1) % seq.size()]))];
        return c;
    }
};

/// p = (1/2k) sum_j r(seq[j], seq[j+1]).
inline double multi_perimeter(const SemimetricVector& r, const MultiCyclicOrder& ord)
{
    if (r.n() != ord.n) throw StructuralError("order and space sizes differ");
    double s = 0.0;
    for (std::size_t j = 0; j < ord.seq.size(); ++j)
        s += r(static_cast<std::size_t>(ord.seq[j]), static_cast<std::size_t>(ord.seq[(j + 1) % ord.seq.size()]));
    return s / (2.0 * static_cast<double>(ord.k));
}

inline Rational multi_perimeter_exact(const std::vector<Rational>& r, const MultiCyclicOrder& ord)
{
    Rational s(0);
    const auto c = ord.pair_counts();
    for (std::size_t p = 0; p < c.size(); ++p)
        if (c[p] != 0) s += r[p] * c[p];
    return s / Rational(static_cast<long>(2 * ord.k));
}

/// Splice two orders at a shared label: walk the first cycle, then the second.
/// Pair counts (and hence multi-perimeter numerators) add.
inline MultiCyclicOrder splice(const MultiCyclicOrder& a, const MultiCyclicOrder& b)
{
    if (a.n != b.n) throw StructuralError("cannot splice orders on different label sets");
    const int x = a.seq.front();
    const auto at = std::find(b.seq.begin(), b.seq.end(), x) - b.seq.begin();
    std::vector<int> seq = a.seq;
    for (std::size_t j = 0; j < b.seq.size(); ++j) seq.push_back(b.seq[(static_cast<std::size_t>(at) + j) % b.seq.size()]);
    return MultiCyclicOrder(a.n, std::move(seq));
}

namespace detail {

// Label bitmask of the side of each edge containing its endpoint `a`.
inline std::vector<std::uint32_t> edge_sides(const BoundedTree& t)
{
    std::vector<std::uint32_t> out;
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
        const auto inc = t.incidence();
        std::uint32_t mask = 0;
        std::vector<char> seen(t.vertex_count(), 0);
        std::vector<std::size_t> stack{t.edges[e].a};
        seen[t.edges[e].a] = 1;
        seen[t.edges[e].b] = 1;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (int tag : t.vertices[v].tags) mask |= 1u << tag;
            for (auto f : inc[v]) {
                const auto w = t.edges[f].other(v);
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        out.push_back(mask);
    }
    return out;
}

inline bool crosses(std::uint32_t side, int x, int y)
{
    return (((side >> x) & 1u) != 0) != (((side >> y) & 1u) != 0);
}

inline bool minimal_rotation(const std::vector<int>& s)
{
    const std::size_t L = s.size();
    for (std::size_t r = 1; r < L; ++r) {
        for (std::size_t j = 0; j < L; ++j) {
            const int a = s[(r + j) % L], b = s[j];
            if (a < b) return false;
            if (a > b) break;
        }
    }
    return true;
}

} // namespace detail

/// True iff the order is a k-tour of T: every edge cut is crossed exactly 2k
/// times (k exits from each side).
inline bool is_multi_tour(const BoundedTree& t, const MultiCyclicOrder& ord)
{
    if (detail::label_count(t) != ord.n) return false;
    const auto sides = detail::edge_sides(t);
    for (auto side : sides) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < ord.seq.size(); ++j)
            if (detail::crosses(side, ord.seq[j], ord.seq[(j + 1) % ord.seq.size()])) ++c;
        if (c != 2 * ord.k) return false;
    }
    return true;
}

inline constexpr std::size_t kMaxTourLabels = 6;
inline constexpr std::size_t kMaxTourMultiplicity = 3;

/// Every multi-tour of T with multiplicity 1..k_max, one representative per
/// rotation class (the lexicographically least rotation), ordered by k then sequence.
inline std::vector<MultiCyclicOrder> enumerate_multi_tours(const BoundedTree& t, std::size_t k_max)
{
    const auto n = detail::label_count(t);
    if (n > kMaxTourLabels || k_max > kMaxTourMultiplicity)
        throw GuardRefusal("multi-tour enumeration guard: n <= " + std::to_string(kMaxTourLabels) +
                           ", k_max <= " + std::to_string(kMaxTourMultiplicity));
    if (n < 2) throw StructuralError("multi-tours need at least two labels");
    const auto sides = detail::edge_sides(t);
    std::vector<MultiCyclicOrder> out;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const std::size_t L = n * k;
        std::vector<int> seq(L, 0);
        std::vector<std::size_t> used(n, 0);
        std::vector<std::size_t> cross(sides.size(), 0);
        used[0] = 1;
        // depth-first fill of positions 1..L-1
        auto rec = [&](auto&& self, std::size_t pos) -> void {
            if (pos == L) {
                if (seq[L - 1] == seq[0]) return;
                for (std::size_t e = 0; e < sides.size(); ++e) {
                    const auto c = cross[e] + (detail::crosses(sides[e], seq[L - 1], seq[0]) ? 1 : 0);
                    if (c != 2 * k) return;
                }
                if (detail::minimal_rotation(seq)) out.emplace_back(n, seq);
                return;
            }
            for (int x = 0; x < static_cast<int>(n); ++x) {
                if (x == seq[pos - 1] || used[static_cast<std::size_t>(x)] == k) continue;
                bool ok = true;
                for (std::size_t e = 0; e < sides.size(); ++e) {
                    if (detail::crosses(sides[e], seq[pos - 1], x) && cross[e] + 1 > 2 * k) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                seq[pos] = x;
                ++used[static_cast<std::size_t>(x)];
                for (std::size_t e = 0; e < sides.size(); ++e)
                    if (detail::crosses(sides[e], seq[pos - 1], x)) ++cross[e];
                self(self, pos + 1);
                for (std::size_t e = 0; e < sides.size(); ++e)
                    if (detail::crosses(sides[e], seq[pos - 1], x)) --cross[e];
                --used[static_cast<std::size_t>(x)];
            }
        };
        rec(rec, 1);
    }
    return out;
}

enum class Irreducibility { Irreducible, Reducible, UndecidedAtBound };

struct IrreducibilityResult {
    Irreducibility verdict = Irreducibility::UndecidedAtBound;
    std::size_t witness_bound = 0;
    std::optional<std::pair<MultiCyclicOrder, MultiCyclicOrder>> decomposition; ///< m*t = first + second
};

/// Decides, up to `witness_bound`, whether some multiple m*t splits into two
/// tours that are not multiples of t. Tours are compared through their pair
/// counts, which are additive under splicing.
inline IrreducibilityResult is_irreducible(const BoundedTree& t, const MultiCyclicOrder& tour, std::size_t witness_bound)
{
    if (!is_multi_tour(t, tour)) throw StructuralError("order is not a multi-tour of the tree");
    IrreducibilityResult res;
    res.witness_bound = witness_bound;
    const auto base = tour.pair_counts();
    auto proportional = [&](const std::vector<int>& c) {
        // c == q * base for some rational q > 0
        std::size_t ref = 0;
        while (ref < base.size() && base[ref] == 0) ++ref;
        for (std::size_t p = 0; p < base.size(); ++p)
            if (static_cast<long>(c[p]) * base[ref] != static_cast<long>(base[p]) * c[ref]) return false;
        return true;
    };
    const std::size_t k_needed = witness_bound * tour.k > 0 ? witness_bound * tour.k - 1 : 0;
    if (k_needed > kMaxTourMultiplicity || tour.n > kMaxTourLabels) return res;
    const auto tours = enumerate_multi_tours(t, std::max<std::size_t>(k_needed, 1));
    std::map<std::vector<int>, std::size_t> by_counts;
    for (std::size_t i = 0; i < tours.size(); ++i) by_counts.emplace(tours[i].pair_counts(), i);

    for (std::size_t m = 1; m <= witness_bound; ++m) {
        std::vector<int> target(base);
        for (auto& v : target) v *= static_cast<int>(m);
        for (const auto& first : tours) {
            if (first.k >= m * tour.k) continue;
            const auto c = first.pair_counts();
            if (proportional(c)) continue;
            std::vector<int> rest(target.size());
            bool ok = true;
            for (std::size_t p = 0; p < target.size(); ++p) {
                rest[p] = target[p] - c[p];
                if (rest[p] < 0) ok = false;
            }
            if (!ok) continue;
            auto it = by_counts.find(rest);
            if (it != by_counts.end() && tours[it->second].k == m * tour.k - first.k) {
                res.verdict = Irreducibility::Reducible;
                res.decomposition = std::make_pair(first, tours[it->second]);
                return res;
            }
        }
    }
    res.verdict = Irreducibility::Irreducible;
    return res;
}

// ---------------------------------------------------------------------------
// minimax formula check

enum class EreminVerdict { Equal, LpGreater, TourGreater };

struct EreminReport {
    EreminVerdict verdict = EreminVerdict::Equal;
    Rational lp_value;
    Rational best_perimeter;
    std::size_t best_tour = 0;
    std::size_t tours = 0;
    bool weak_duality = true; ///< every tour perimeter <= lp_value
    std::size_t k_max = 0;
};

inline EreminReport eremin_check(const std::vector<Rational>& r, std::size_t n, const BoundedTree& t,
                                 const std::vector<MultiCyclicOrder>& tours, std::size_t k_max)
{
    if (tours.empty()) throw StructuralError("no multi-tours supplied");
    EreminReport rep;
    rep.k_max = k_max;
    rep.tours = tours.size();
    rep.lp_value = mpf_exact(r, n, t, true).exact_weight;
    for (std::size_t i = 0; i < tours.size(); ++i) {
        const auto p = multi_perimeter_exact(r, tours[i]);
        if (i == 0 || p > rep.best_perimeter) {
            rep.best_perimeter = p;
            rep.best_tour = i;
        }
        if (p > rep.lp_value) rep.weak_duality = false;
    }
    if (rep.best_perimeter == rep.lp_value) rep.verdict = EreminVerdict::Equal;
    else if (rep.best_perimeter < rep.lp_value) rep.verdict = EreminVerdict::LpGreater;
    else rep.verdict = EreminVerdict::TourGreater;
    return rep;
}

/// Compares mpf_-(r, T) from the exact LP with the best multi-perimeter over
/// all multi-tours of T up to multiplicity k_max.
inline EreminReport eremin_check(const SemimetricVector& r, const BinaryTree& t, std::size_t k_max)
{
    std::vector<Rational> q;
    for (double v : r.values()) q.push_back(exact(v));
    return eremin_check(q, r.n(), t.tree(), enumerate_multi_tours(t.tree(), k_max), k_max);
}

} // namespace xnet

#endif
