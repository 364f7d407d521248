#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "xnet/filling.hpp"

using namespace xnet;

namespace {

BoundedTree star3()
{
    BoundedTree t;
    for (int i = 0; i < 3; ++i) t.add_vertex(true, {i});
    const auto hub = t.add_vertex(false);
    for (std::size_t i = 0; i < 3; ++i) t.add_edge(i, hub);
    return t;
}

// label 0 - label 1 - label 2 - label 3 with every vertex boundary
BoundedTree path4()
{
    BoundedTree t;
    for (int i = 0; i < 4; ++i) t.add_vertex(true, {i});
    for (std::size_t i = 0; i + 1 < 4; ++i) t.add_edge(i, i + 1);
    return t;
}

std::vector<Rational> rationals(const std::vector<double>& v)
{
    std::vector<Rational> out;
    for (double x : v) out.push_back(exact(x));
    return out;
}

// Labels on each side of every edge, via an explicit path walk between labels.
std::vector<std::vector<std::size_t>> label_paths(const BoundedTree& t, std::size_t n)
{
    std::vector<std::vector<std::size_t>> adj(t.vertex_count());
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
        adj[t.edges[e].a].push_back(e);
        adj[t.edges[e].b].push_back(e);
    }
    std::vector<std::vector<std::size_t>> out(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        const auto src = *t.vertex_with_tag(static_cast<int>(x));
        std::vector<std::vector<std::size_t>> path(t.vertex_count());
        std::vector<char> seen(t.vertex_count(), 0);
        std::vector<std::size_t> queue{src};
        seen[src] = 1;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const auto v = queue[q];
            for (auto e : adj[v]) {
                const auto w = t.edges[e].other(v);
                if (seen[w]) continue;
                seen[w] = 1;
                path[w] = path[v];
                path[w].push_back(e);
                queue.push_back(w);
            }
        }
        for (std::size_t y = 0; y < n; ++y) {
            auto p = path[*t.vertex_with_tag(static_cast<int>(y))];
            std::sort(p.begin(), p.end());
            out[x * n + y] = p;
        }
    }
    return out;
}

std::vector<int> least_rotation(const std::vector<int>& s)
{
    auto best = s;
    for (std::size_t r = 1; r < s.size(); ++r) {
        std::vector<int> rot(s.begin() + static_cast<long>(r), s.end());
        rot.insert(rot.end(), s.begin(), s.begin() + static_cast<long>(r));
        best = std::min(best, rot);
    }
    return best;
}

// Every k-tour of T by exhaustive permutation of the label multiset.
std::set<std::vector<int>> brute_force_tours(const BoundedTree& t, std::size_t n, std::size_t k)
{
    const auto paths = label_paths(t, n);
    std::vector<int> seq;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t c = 0; c < k; ++c) seq.push_back(static_cast<int>(x));
    std::set<std::vector<int>> out;
    do {
        bool ok = true;
        for (std::size_t j = 0; j < seq.size() && ok; ++j) ok = seq[j] != seq[(j + 1) % seq.size()];
        if (!ok) continue;
        std::vector<std::size_t> crossings(t.edge_count(), 0);
        for (std::size_t j = 0; j < seq.size(); ++j)
            for (auto e : paths[static_cast<std::size_t>(seq[j]) * n + static_cast<std::size_t>(seq[(j + 1) % seq.size()])]) ++crossings[e];
        for (auto c : crossings) ok = ok && c == 2 * k;
        if (ok) out.insert(least_rotation(seq));
    } while (std::next_permutation(seq.begin(), seq.end()));
    return out;
}

// Closed form for four points and the tree pairing {0,1} against {2,3}.
Rational four_point_value(const std::vector<Rational>& r, const BoundedTree& t)
{
    // find the labels paired with 0
    const auto paths = label_paths(t, 4);
    int partner = 1;
    for (int y = 1; y < 4; ++y)
        if (paths[static_cast<std::size_t>(y)].size() == 2) partner = y;
    std::vector<int> rest;
    for (int y = 1; y < 4; ++y)
        if (y != partner) rest.push_back(y);
    auto R = [&](int a, int b) { return r[pair_index(4, static_cast<std::size_t>(a), static_cast<std::size_t>(b))]; };
    const Rational c1 = R(0, rest[0]) + R(partner, rest[1]);
    const Rational c2 = R(0, rest[1]) + R(partner, rest[0]);
    return (R(0, partner) + R(rest[0], rest[1]) + std::max(c1, c2)) / 2;
}

std::vector<double> random_metric(std::mt19937& rng, std::size_t n)
{
    std::uniform_real_distribution<double> U(0, 1);
    std::vector<Point> pts(n, Point(3));
    for (auto& p : pts) p = {U(rng), U(rng), U(rng)};
    return pullback(pts).flat();
}

} // namespace

TEST(TreePathWeight, Star)
{
    WeightedTree wt{star3(), {1, 2, 3}};
    EXPECT_EQ(tree_path_weight(wt, 0, 1), 3.0);
    EXPECT_EQ(tree_path_weight(wt, 1, 2), 5.0);
    for (int x = 0; x < 3; ++x) EXPECT_EQ(tree_path_weight(wt, x, x), 0.0);
}

TEST(TreePathWeight, SignedMiddleEdge)
{
    WeightedTree wt{path4(), {2, -1, 2}};
    EXPECT_EQ(tree_path_weight(wt, 0, 3), 3.0);
    EXPECT_EQ(tree_path_weight(wt, 1, 2), -1.0);
    EXPECT_EQ(tree_path_weight(wt, 0, 1), 2.0);
}

TEST(TreePathWeight, UnknownLabel)
{
    WeightedTree wt{star3(), {1, 2, 3}};
    EXPECT_THROW(tree_path_weight(wt, 0, 7), StructuralError);
    wt.weights.pop_back();
    EXPECT_THROW(tree_path_weight(wt, 0, 1), StructuralError);
}

TEST(IsGeneralizedFilling, TightStar)
{
    const SemimetricVector r({3, 4, 5});
    WeightedTree wt{star3(), {1, 2, 3}};
    EXPECT_TRUE(is_generalized_filling(wt, r));
    for (int x = 0; x < 3; ++x)
        for (int y = x + 1; y < 3; ++y)
            EXPECT_EQ(tree_path_weight(wt, x, y), r(static_cast<std::size_t>(x), static_cast<std::size_t>(y)));
}

TEST(IsGeneralizedFilling, ZeroWeights)
{
    EXPECT_FALSE(is_generalized_filling(WeightedTree{star3(), {0, 0, 0}}, SemimetricVector({3, 4, 5})));
}

TEST(IsGeneralizedFilling, ScaledTightFilling)
{
    EXPECT_TRUE(is_generalized_filling(WeightedTree{star3(), {2, 4, 6}}, SemimetricVector({3, 4, 5})));
}

TEST(Mpf, ThreeFourFive)
{
    const auto res = mpf(SemimetricVector({3, 4, 5}), star3(), true);
    EXPECT_EQ(res.exact_weight, Rational(6));
    EXPECT_EQ(res.exact_weights, (std::vector<Rational>{1, 2, 3}));
    const auto nonneg = mpf(SemimetricVector({3, 4, 5}), star3(), false);
    EXPECT_EQ(nonneg.exact_weight, Rational(6));
}

TEST(Mpf, TwoPoints)
{
    const auto trees = enumerate_binary_trees(std::size_t{2});
    const auto res = mpf(SemimetricVector({2.5}), trees[0].tree(), true);
    EXPECT_EQ(res.exact_weight, exact(2.5));
}

TEST(Mpf, SquareTypesMatchClosedForm)
{
    const std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto r = pullback(sq);
    const auto q = rationals(r.flat());
    Rational best;
    bool first = true;
    for (const auto& bt : enumerate_binary_trees(std::size_t{4})) {
        const auto res = mpf(r, bt.tree(), true);
        EXPECT_EQ(res.exact_weight, four_point_value(q, bt.tree()));
        if (first || res.exact_weight < best) best = res.exact_weight;
        first = false;
    }
    EXPECT_EQ(mf(r).exact_weight, best);
}

TEST(Mpf, FourPointClosedFormRandom)
{
    std::mt19937 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        const auto flat = random_metric(rng, 4);
        const auto q = rationals(flat);
        for (const auto& bt : enumerate_binary_trees(std::size_t{4}))
            EXPECT_EQ(mpf_exact(q, 4, bt.tree(), true).exact_weight, four_point_value(q, bt.tree()));
    }
}

TEST(Mpf, WeightsFormFillingWithOptimalTotal)
{
    std::mt19937 rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + trial % 3;
        const SemimetricVector r(random_metric(rng, n));
        const auto trees = enumerate_binary_trees(n);
        const auto& t = trees[static_cast<std::size_t>(trial) % trees.size()].tree();
        for (bool s : {true, false}) {
            const auto res = mpf(r, t, s);
            EXPECT_TRUE(is_generalized_filling(WeightedTree{t, res.weights}, r, 1e-9));
            double total = 0;
            for (double w : res.weights) {
                total += w;
                if (!s) {
                    EXPECT_GE(w, 0.0);
                }
            }
            EXPECT_NEAR(total, res.weight, 1e-9);
        }
        // signed weights can only help
        EXPECT_LE(mpf(r, t, true).exact_weight, mpf(r, t, false).exact_weight);
    }
}

TEST(Mpf, NonBinaryTypeAccepted)
{
    // the 3-vertex path 0-1-2: the middle label sits on a degree-2 vertex
    BoundedTree t;
    for (int i = 0; i < 3; ++i) t.add_vertex(true, {i});
    t.add_edge(0, 1);
    t.add_edge(1, 2);
    const auto res = mpf(SemimetricVector({3, 4, 5}), t, false);
    // w01 >= 3, w12 >= 5, w01 + w12 >= 4
    EXPECT_EQ(res.exact_weight, Rational(8));
}

TEST(Mpf, LabelMismatch)
{
    EXPECT_THROW(mpf(SemimetricVector({1, 1, 1, 1, 1, 1}), star3(), true), StructuralError);
}

TEST(Mf, HalfPerimeterOfThreePoints)
{
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto flat = random_metric(rng, 3);
        const auto q = rationals(flat);
        EXPECT_EQ(mf(SemimetricVector(flat)).exact_weight, (q[0] + q[1] + q[2]) / 2);
    }
}

TEST(Mf, EquilateralTwo)
{
    const auto res = mf(SemimetricVector({2, 2, 2}));
    EXPECT_EQ(res.exact_weight, Rational(3));
    EXPECT_EQ(res.type_ids.size(), 1u);
}

TEST(Mf, BelowMinimalSpanningTree)
{
    std::mt19937 rng(24);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + trial % 4;
        const SemimetricVector r(random_metric(rng, n));
        EXPECT_LE(mf(r).weight, kruskal_length(r) + 1e-9);
    }
}

TEST(Mf, Guard)
{
    EXPECT_THROW(mf(SemimetricVector(8, 1.0)), GuardRefusal);
}

TEST(MultiPerimeter, ThreePoint)
{
    const MultiCyclicOrder ord(3, {0, 1, 2});
    EXPECT_EQ(multi_perimeter(SemimetricVector({3, 4, 5}), ord), 6.0);
    EXPECT_EQ(multi_perimeter_exact({3, 4, 5}, ord), Rational(6));
}

TEST(MultiPerimeter, InterleavedRotationPreservesPerimeter)
{
    std::mt19937 rng(25);
    const MultiCyclicOrder a(4, {0, 1, 2, 3});
    const MultiCyclicOrder b(4, {2, 3, 0, 1}); // a rotation of a
    const auto ab = splice(a, b);
    EXPECT_EQ(ab.k, 2u);
    for (int trial = 0; trial < 20; ++trial) {
        const SemimetricVector r(random_metric(rng, 4));
        EXPECT_NEAR(multi_perimeter(r, ab), multi_perimeter(r, a), 1e-12);
    }
}

TEST(MultiPerimeter, ZeroSpace)
{
    EXPECT_EQ(multi_perimeter(SemimetricVector(4, 0.0), MultiCyclicOrder(4, {0, 2, 1, 3})), 0.0);
}

TEST(MultiCyclicOrder, Validation)
{
    EXPECT_THROW(MultiCyclicOrder(3, {0, 0, 1, 2, 1, 2}), StructuralError);
    EXPECT_THROW(MultiCyclicOrder(3, {0, 1, 2, 0}), StructuralError);
    EXPECT_THROW(MultiCyclicOrder(3, {0, 1, 0, 1, 2, 2}), StructuralError);
    EXPECT_THROW(MultiCyclicOrder(3, {0, 1, 2, 1, 2, 0}), StructuralError); // wraps 0 -> 0
    EXPECT_THROW(MultiCyclicOrder(3, {0, 1, 3}), StructuralError);
    EXPECT_NO_THROW(MultiCyclicOrder(3, {0, 1, 0, 2, 1, 2}));
}

TEST(MultiTours, StarKOne)
{
    const auto tours = enumerate_multi_tours(star3(), 1);
    ASSERT_EQ(tours.size(), 2u);
    std::set<std::vector<int>> got;
    for (const auto& t : tours) got.insert(t.seq);
    EXPECT_EQ(got, (std::set<std::vector<int>>{{0, 1, 2}, {0, 2, 1}}));
}

TEST(MultiTours, FourLeafKOne)
{
    for (const auto& bt : enumerate_binary_trees(std::size_t{4})) EXPECT_EQ(enumerate_multi_tours(bt.tree(), 1).size(), 4u);
}

TEST(MultiTours, MatchBruteForce)
{
    std::vector<std::pair<BoundedTree, std::size_t>> cases{{star3(), 3}, {path4(), 4}};
    for (const auto& bt : enumerate_binary_trees(std::size_t{4})) cases.emplace_back(bt.tree(), 4);
    cases.emplace_back(enumerate_binary_trees(std::size_t{5})[4].tree(), 5);
    for (const auto& [t, n] : cases) {
        for (std::size_t k = 1; k <= (n <= 4 ? 3u : 2u); ++k) {
            std::set<std::vector<int>> got;
            for (const auto& ord : enumerate_multi_tours(t, k))
                if (ord.k == k) {
                    got.insert(ord.seq);
                    EXPECT_TRUE(is_multi_tour(t, ord));
                }
            EXPECT_EQ(got, brute_force_tours(t, n, k)) << "n=" << n << " k=" << k;
        }
    }
}

TEST(MultiTours, OrderedByMultiplicity)
{
    const auto tours = enumerate_multi_tours(enumerate_binary_trees(std::size_t{4})[1].tree(), 3);
    for (std::size_t i = 1; i < tours.size(); ++i) EXPECT_LE(tours[i - 1].k, tours[i].k);
    EXPECT_EQ(tours.front().k, 1u);
    EXPECT_EQ(tours.back().k, 3u);
}

TEST(MultiTours, NonTourRejected)
{
    // 0 1 2 3 is not a tour of the tree pairing {0,2} against {1,3}
    const auto trees = enumerate_binary_trees(std::size_t{4});
    for (const auto& bt : trees) {
        const auto tours = enumerate_multi_tours(bt.tree(), 1);
        const MultiCyclicOrder ord(4, {0, 1, 2, 3});
        const bool listed = std::any_of(tours.begin(), tours.end(), [&](const auto& t) { return t.seq == ord.seq; });
        EXPECT_EQ(listed, is_multi_tour(bt.tree(), ord));
    }
}

TEST(MultiTours, Guard)
{
    EXPECT_THROW(enumerate_multi_tours(star3(), 4), GuardRefusal);
    EXPECT_THROW(enumerate_multi_tours(enumerate_binary_trees(std::size_t{7})[0].tree(), 1), GuardRefusal);
}

TEST(Irreducible, KOneAlways)
{
    for (const auto& bt : enumerate_binary_trees(std::size_t{4}))
        for (const auto& t : enumerate_multi_tours(bt.tree(), 1))
            EXPECT_EQ(is_irreducible(bt.tree(), t, 1).verdict, Irreducibility::Irreducible);
}

TEST(Irreducible, SpliceOfTwoToursIsReducible)
{
    const auto t = enumerate_binary_trees(std::size_t{4})[0].tree();
    const auto tours = enumerate_multi_tours(t, 1);
    ASSERT_GE(tours.size(), 2u);
    // choose two tours with different pair counts
    std::size_t j = 1;
    while (tours[j].pair_counts() == tours[0].pair_counts()) ++j;
    const auto sum = splice(tours[0], tours[j]);
    ASSERT_TRUE(is_multi_tour(t, sum));
    const auto res = is_irreducible(t, sum, 1);
    EXPECT_EQ(res.verdict, Irreducibility::Reducible);
    ASSERT_TRUE(res.decomposition.has_value());
    auto c1 = res.decomposition->first.pair_counts();
    const auto c2 = res.decomposition->second.pair_counts();
    for (std::size_t p = 0; p < c1.size(); ++p) c1[p] += c2[p];
    EXPECT_EQ(c1, sum.pair_counts());
}

TEST(Irreducible, KTwoNotASumAtBoundTwo)
{
    // brute force: a k=2 tour whose counts are no sum of two k=1 tours, and
    // whose double is no sum of tours of multiplicity 1..3 other than copies
    for (const auto& bt : enumerate_binary_trees(std::size_t{4})) {
        const auto& t = bt.tree();
        std::map<std::size_t, std::vector<std::vector<int>>> counts;
        for (std::size_t k = 1; k <= 3; ++k)
            for (const auto& s : brute_force_tours(t, 4, k)) counts[k].push_back(MultiCyclicOrder(4, s).pair_counts());
        std::size_t found = 0;
        for (const auto& s : brute_force_tours(t, 4, 2)) {
            const MultiCyclicOrder tour(4, s);
            const auto base = tour.pair_counts();
            // same direction as base
            auto proportional = [&](const std::vector<int>& c) {
                int cb = 0, bb = 0;
                for (std::size_t p = 0; p < c.size(); ++p) {
                    cb += c[p];
                    bb += base[p];
                }
                for (std::size_t p = 0; p < c.size(); ++p)
                    if (c[p] * bb != base[p] * cb) return false;
                return true;
            };
            bool reducible = false;
            for (std::size_t m = 1; m <= 2 && !reducible; ++m)
                for (std::size_t ka = 1; ka < 2 * m && !reducible; ++ka) {
                    const std::size_t kb = 2 * m - ka;
                    for (const auto& a : counts[ka]) {
                        if (proportional(a)) continue;
                        for (const auto& b : counts[kb]) {
                            bool eq = true;
                            for (std::size_t p = 0; p < a.size(); ++p) eq = eq && a[p] + b[p] == static_cast<int>(m) * base[p];
                            if (eq) reducible = true;
                        }
                    }
                }
            const auto verdict = is_irreducible(t, tour, 2).verdict;
            EXPECT_EQ(verdict, reducible ? Irreducibility::Reducible : Irreducibility::Irreducible);
            if (!reducible) ++found;
        }
        EXPECT_GT(found, 0u);
    }
}

TEST(Irreducible, UndecidedBeyondGuard)
{
    const auto t = star3();
    const auto tour = enumerate_multi_tours(t, 1)[0];
    EXPECT_EQ(is_irreducible(t, tour, 5).verdict, Irreducibility::UndecidedAtBound);
}

TEST(Eremin, ThreePointStar)
{
    const auto rep = eremin_check(SemimetricVector({3, 4, 5}), BinaryTree(star3()), 1);
    EXPECT_EQ(rep.verdict, EreminVerdict::Equal);
    EXPECT_EQ(rep.lp_value, Rational(6));
    EXPECT_EQ(rep.best_perimeter, Rational(6));
    EXPECT_TRUE(rep.weak_duality);
}

TEST(Eremin, SquareEveryTypeAtTwo)
{
    const std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto r = pullback(sq);
    for (const auto& bt : enumerate_binary_trees(std::size_t{4})) {
        const auto rep = eremin_check(r, bt, 2);
        EXPECT_EQ(rep.verdict, EreminVerdict::Equal);
        EXPECT_TRUE(rep.weak_duality);
    }
}

TEST(Eremin, PerimeterMonotoneInKmax)
{
    std::mt19937 rng(26);
    std::uniform_int_distribution<int> D(1, 10);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> flat(6);
        do {
            for (auto& v : flat) v = D(rng);
        } while (!validate_semimetric(SemimetricVector(flat)).ok);
        const SemimetricVector r(flat);
        for (const auto& bt : enumerate_binary_trees(std::size_t{4})) {
            const auto one = eremin_check(r, bt, 1);
            const auto two = eremin_check(r, bt, 2);
            EXPECT_LE(one.best_perimeter, two.best_perimeter);
            EXPECT_TRUE(one.weak_duality);
            EXPECT_TRUE(two.weak_duality);
        }
    }
}

TEST(Eremin, FiveAndSixPointsWeakDuality)
{
    std::mt19937 rng(27);
    for (std::size_t n : {5u, 6u}) {
        const SemimetricVector r(random_metric(rng, n));
        const auto trees = enumerate_binary_trees(n);
        const auto rep = eremin_check(r, trees[3], n == 5 ? 2 : 1);
        EXPECT_TRUE(rep.weak_duality);
        EXPECT_NE(rep.verdict, EreminVerdict::TourGreater);
    }
}
