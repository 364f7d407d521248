#ifndef XNET_TREE_HPP
#define XNET_TREE_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace xnet {

struct TreeEdge {
    std::size_t a = 0;
    std::size_t b = 0;

    std::size_t other(std::size_t v) const { return v == a ? b : a; }
    bool touches(std::size_t v) const { return a == v || b == v; }
};

struct TreeVertex {
    bool boundary = false;
    std::vector<int> tags; ///< boundary labels carried by this vertex (sorted); empty for interior vertices
};

/// A combinatorial tree with a designated boundary. Vertices of degree 1 or 2
/// are boundary vertices; the rest are interior (movable).
struct BoundedTree {
    std::vector<TreeVertex> vertices;
    std::vector<TreeEdge> edges;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }
    bool is_boundary(std::size_t v) const { return vertices[v].boundary; }

    std::size_t degree(std::size_t v) const
    {
        return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [v](const TreeEdge& e) { return e.touches(v); }));
    }

    // incident edge indices per vertex
    std::vector<std::vector<std::size_t>> incidence() const
    {
        std::vector<std::vector<std::size_t>> inc(vertices.size());
        for (std::size_t e = 0; e < edges.size(); ++e) {
            inc[edges[e].a].push_back(e);
            inc[edges[e].b].push_back(e);
        }
        return inc;
    }

    std::vector<std::size_t> boundary_vertices() const
    {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < vertices.size(); ++v)
            if (vertices[v].boundary) out.push_back(v);
        return out;
    }

    std::optional<std::size_t> vertex_with_tag(int tag) const
    {
        for (std::size_t v = 0; v < vertices.size(); ++v)
            if (std::find(vertices[v].tags.begin(), vertices[v].tags.end(), tag) != vertices[v].tags.end()) return v;
        return std::nullopt;
    }

    std::optional<std::size_t> find_edge(std::size_t u, std::size_t v) const
    {
        for (std::size_t e = 0; e < edges.size(); ++e)
            if ((edges[e].a == u && edges[e].b == v) || (edges[e].a == v && edges[e].b == u)) return e;
        return std::nullopt;
    }

    std::size_t add_vertex(bool boundary, std::vector<int> tags = {})
    {
        std::sort(tags.begin(), tags.end());
        vertices.push_back({boundary, std::move(tags)});
        return vertices.size() - 1;
    }
    void add_edge(std::size_t u, std::size_t v) { edges.push_back({u, v}); }
};

namespace detail {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t x, std::size_t y)
    {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (y < x) std::swap(x, y);
        parent[y] = x;
        return true;
    }
};

} // namespace detail

/// Throws StructuralError unless the tree is connected, acyclic, and every
/// vertex of degree 1 or 2 is a boundary vertex.
inline void validate_tree(const BoundedTree& t)
{
    const std::size_t n = t.vertex_count();
    if (n == 0) throw StructuralError("tree has no vertices");
    if (t.edge_count() + 1 != n)
        throw StructuralError("tree must have |E| = |V| - 1 (got " + std::to_string(t.edge_count()) + " edges, " +
                              std::to_string(n) + " vertices)");
    detail::DisjointSets ds(n);
    for (const auto& e : t.edges) {
        if (e.a >= n || e.b >= n || e.a == e.b) throw StructuralError("edge endpoint out of range or loop");
        if (!ds.unite(e.a, e.b)) throw StructuralError("tree contains a cycle");
    }
    for (std::size_t v = 0; v < n; ++v) {
        const auto d = t.degree(v);
        if ((d == 1 || d == 2) && !t.vertices[v].boundary)
            throw StructuralError("vertex " + std::to_string(v) + " has degree " + std::to_string(d) + " but is not boundary");
    }
}

inline bool is_binary(const BoundedTree& t)
{
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
        const auto d = t.degree(v);
        if (d == 1) {
            if (!t.vertices[v].boundary) return false;
        } else if (d == 3) {
            if (t.vertices[v].boundary) return false;
        } else {
            return false;
        }
    }
    return true;
}

/// A tree whose vertices have degree 1 or 3 with boundary = the leaves.
class BinaryTree {
public:
    explicit BinaryTree(BoundedTree t) : tree_(std::move(t))
    {
        validate_tree(tree_);
        if (!is_binary(tree_)) throw StructuralError("tree is not binary");
    }
    const BoundedTree& tree() const { return tree_; }
    operator const BoundedTree&() const { return tree_; }
    std::size_t leaf_count() const { return (tree_.vertex_count() + 2) / 2; }

private:
    BoundedTree tree_;
};

// ---------------------------------------------------------------------------
// canonical form

namespace detail {

inline std::string vertex_token(const TreeVertex& v)
{
    if (!v.boundary) return "i";
    std::string s = "b";
    for (std::size_t k = 0; k < v.tags.size(); ++k) {
        s += k == 0 ? "" : ",";
        s += std::to_string(v.tags[k]);
    }
    return s;
}

inline std::string rooted_code(const BoundedTree& t, const std::vector<std::vector<std::size_t>>& adj, std::size_t v,
                               std::size_t parent)
{
    std::vector<std::string> kids;
    for (std::size_t w : adj[v])
        if (w != parent) kids.push_back(rooted_code(t, adj, w, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(" + vertex_token(t.vertices[v]);
    for (auto& k : kids) s += k;
    return s + ")";
}

inline std::vector<std::vector<std::size_t>> adjacency(const BoundedTree& t)
{
    std::vector<std::vector<std::size_t>> adj(t.vertex_count());
    for (const auto& e : t.edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    return adj;
}

inline std::vector<std::size_t> tree_centers(const std::vector<std::vector<std::size_t>>& adj)
{
    const std::size_t n = adj.size();
    if (n <= 2) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }
    std::vector<std::size_t> deg(n);
    std::vector<std::size_t> layer;
    for (std::size_t v = 0; v < n; ++v) {
        deg[v] = adj[v].size();
        if (deg[v] <= 1) layer.push_back(v);
    }
    std::size_t remaining = n;
    while (remaining > 2) {
        remaining -= layer.size();
        std::vector<std::size_t> next;
        for (std::size_t v : layer)
            for (std::size_t w : adj[v])
                if (--deg[w] == 1) next.push_back(w);
        layer = std::move(next);
    }
    std::sort(layer.begin(), layer.end());
    return layer;
}

} // namespace detail

/// Canonical string under boundary-preserving isomorphism: boundary labels are
/// significant, interior vertices are anonymous.
inline std::string canonical_form(const BoundedTree& t)
{
    const auto adj = detail::adjacency(t);
    std::string best;
    bool first = true;
    for (std::size_t c : detail::tree_centers(adj)) {
        auto code = detail::rooted_code(t, adj, c, static_cast<std::size_t>(-1));
        if (first || code < best) best = std::move(code);
        first = false;
    }
    return best;
}

inline bool isomorphic(const BoundedTree& a, const BoundedTree& b)
{
    return a.vertex_count() == b.vertex_count() && canonical_form(a) == canonical_form(b);
}

// ---------------------------------------------------------------------------
// binary tree enumeration

/// All binary trees with the given boundary labels, up to boundary-preserving
/// isomorphism: (2n-5)!! of them for n >= 3. Leaves occupy vertices 0..n-1 in
/// label order, interior vertices follow.
inline std::vector<BinaryTree> enumerate_binary_trees(const std::vector<int>& labels)
{
    const std::size_t n = labels.size();
    if (n < 2) throw StructuralError("binary tree enumeration needs at least two boundary vertices");
    if (std::set<int>(labels.begin(), labels.end()).size() != n) throw StructuralError("boundary labels must be distinct");

    BoundedTree seed;
    for (std::size_t i = 0; i < n; ++i) seed.add_vertex(true, {labels[i]});
    if (n == 2) {
        seed.add_edge(0, 1);
        return {BinaryTree(seed)};
    }
    const std::size_t hub = seed.add_vertex(false);
    for (std::size_t i = 0; i < 3; ++i) seed.add_edge(i, hub);

    std::vector<BoundedTree> layer{seed};
    for (std::size_t leaf = 3; leaf < n; ++leaf) {
        std::vector<BoundedTree> next;
        next.reserve(layer.size() * (2 * leaf - 3));
        for (const auto& t : layer) {
            for (std::size_t e = 0; e < t.edge_count(); ++e) {
                BoundedTree u = t;
                const std::size_t s = u.add_vertex(false);
                const TreeEdge old = u.edges[e];
                u.edges[e] = {old.a, s};
                u.add_edge(s, old.b);
                u.add_edge(s, leaf);
                next.push_back(std::move(u));
            }
        }
        layer = std::move(next);
    }
    std::vector<BinaryTree> out;
    out.reserve(layer.size());
    for (auto& t : layer) out.emplace_back(std::move(t));
    return out;
}

inline std::vector<BinaryTree> enumerate_binary_trees(std::size_t n)
{
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return enumerate_binary_trees(labels);
}

// ---------------------------------------------------------------------------
// quotients

struct Quotient {
    BoundedTree tree;
    std::vector<std::size_t> projection;        ///< original vertex -> block (quotient vertex)
    std::vector<std::size_t> edge_image;        ///< original edge -> quotient edge, or npos when contracted
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Factorization over a family of edges: blocks are the components of the
/// contracted forest; boundary = image of the boundary, plus any block that
/// ends up with degree 1 or 2.
inline Quotient quotient_with_projection(const BoundedTree& t, const std::vector<std::size_t>& contracted)
{
    const std::size_t n = t.vertex_count();
    std::vector<char> is_contracted(t.edge_count(), 0);
    detail::DisjointSets ds(n);
    for (std::size_t e : contracted) {
        if (e >= t.edge_count()) throw StructuralError("contracted edge " + std::to_string(e) + " is not an edge of the tree");
        is_contracted[e] = 1;
        ds.unite(t.edges[e].a, t.edges[e].b);
    }
    Quotient q;
    q.projection.assign(n, Quotient::npos);
    std::vector<std::size_t> block_of_root(n, Quotient::npos);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t root = ds.find(v);
        if (block_of_root[root] == Quotient::npos) block_of_root[root] = q.tree.add_vertex(false);
        const std::size_t b = block_of_root[root];
        q.projection[v] = b;
        auto& bv = q.tree.vertices[b];
        bv.boundary = bv.boundary || t.vertices[v].boundary;
        bv.tags.insert(bv.tags.end(), t.vertices[v].tags.begin(), t.vertices[v].tags.end());
    }
    for (auto& bv : q.tree.vertices) std::sort(bv.tags.begin(), bv.tags.end());
    q.edge_image.assign(t.edge_count(), Quotient::npos);
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
        if (is_contracted[e]) continue;
        q.edge_image[e] = q.tree.edge_count();
        q.tree.add_edge(q.projection[t.edges[e].a], q.projection[t.edges[e].b]);
    }
    for (std::size_t v = 0; v < q.tree.vertex_count(); ++v) {
        const auto d = q.tree.degree(v);
        if (d == 1 || d == 2) q.tree.vertices[v].boundary = true;
    }
    return q;
}

inline BoundedTree quotient(const BoundedTree& t, const std::vector<std::size_t>& contracted)
{
    return quotient_with_projection(t, contracted).tree;
}

// ---------------------------------------------------------------------------
// regular components

struct RegularComponent {
    BoundedTree tree;
    std::vector<std::size_t> vertex_origin; ///< component vertex -> original vertex
    std::vector<std::size_t> edge_origin;   ///< component edge -> original edge
};

/// Cuts the tree at every boundary vertex of degree >= 2. Each component's
/// boundary is exactly its set of degree-1 vertices.
inline std::vector<RegularComponent> regular_components(const BoundedTree& t)
{
    if (t.edge_count() == 0) {
        RegularComponent c;
        c.tree = t;
        c.vertex_origin.resize(t.vertex_count());
        std::iota(c.vertex_origin.begin(), c.vertex_origin.end(), std::size_t{0});
        return {c};
    }
    // two edges share a component iff they meet at an interior vertex
    detail::DisjointSets ds(t.edge_count());
    const auto inc = t.incidence();
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
        if (t.vertices[v].boundary) continue;
        for (std::size_t k = 1; k < inc[v].size(); ++k) ds.unite(inc[v][0], inc[v][k]);
    }
    std::vector<std::size_t> comp_of_root(t.edge_count(), Quotient::npos);
    std::vector<RegularComponent> out;
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
        const std::size_t r = ds.find(e);
        if (comp_of_root[r] == Quotient::npos) {
            comp_of_root[r] = out.size();
            out.emplace_back();
        }
        out[comp_of_root[r]].edge_origin.push_back(e);
    }
    for (auto& c : out) {
        std::vector<std::size_t> local(t.vertex_count(), Quotient::npos);
        auto map_vertex = [&](std::size_t v) {
            if (local[v] == Quotient::npos) {
                local[v] = c.tree.add_vertex(t.vertices[v].boundary, t.vertices[v].tags);
                c.vertex_origin.push_back(v);
            }
            return local[v];
        };
        for (std::size_t e : c.edge_origin) {
            const auto a = map_vertex(t.edges[e].a);
            const auto b = map_vertex(t.edges[e].b);
            c.tree.add_edge(a, b);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// moustaches

/// Pairs of edges sharing an interior vertex whose other endpoints are both
/// boundary. Empty when the tree has fewer than three boundary vertices.
inline std::vector<std::pair<std::size_t, std::size_t>> moustaches(const BinaryTree& bt)
{
    const auto& t = bt.tree();
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (t.boundary_vertices().size() < 3) return out;
    const auto inc = t.incidence();
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
        if (t.vertices[v].boundary) continue;
        std::vector<std::size_t> legs;
        for (std::size_t e : inc[v])
            if (t.vertices[t.edges[e].other(v)].boundary) legs.push_back(e);
        for (std::size_t i = 0; i < legs.size(); ++i)
            for (std::size_t j = i + 1; j < legs.size(); ++j) out.emplace_back(legs[i], legs[j]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// binary types of a trace

struct BinarySplitting {
    BinaryTree tree;
    std::vector<std::size_t> contracted; ///< S_T: quotient(tree, contracted) is isomorphic to the source
};

inline constexpr std::size_t kMaxSplittingBoundary = 12;
inline constexpr std::size_t kMaxSplittingCount = 2'000'000;

/// All binary trees that collapse onto `source` by contracting edges, each with
/// its witness edge set. Every boundary vertex of the source must carry exactly
/// one label; interior vertices carry none.
inline std::vector<BinarySplitting> binary_type(const BoundedTree& source)
{
    validate_tree(source);
    const auto bverts = source.boundary_vertices();
    if (bverts.size() > kMaxSplittingBoundary)
        throw GuardRefusal("binary_type refuses trees with more than " + std::to_string(kMaxSplittingBoundary) +
                           " boundary vertices");
    for (std::size_t v = 0; v < source.vertex_count(); ++v) {
        const auto& vx = source.vertices[v];
        if (vx.boundary ? vx.tags.size() != 1 : !vx.tags.empty())
            throw StructuralError("binary_type needs exactly one label per boundary vertex");
    }
    if (source.vertex_count() == 1)
        throw StructuralError("binary_type needs at least two boundary vertices");

    const auto inc = source.incidence();
    // per vertex: number of ports (incident edges, plus one for the labelled leaf)
    std::vector<std::size_t> ports(source.vertex_count());
    std::vector<std::vector<BinaryTree>> local(source.vertex_count());
    std::size_t total = 1;
    for (std::size_t v = 0; v < source.vertex_count(); ++v) {
        const std::size_t d = inc[v].size();
        ports[v] = d + (source.vertices[v].boundary && d >= 2 ? 1 : 0);
        if (ports[v] >= 3) {
            local[v] = enumerate_binary_trees(ports[v]);
            total *= local[v].size();
            if (total > kMaxSplittingCount) throw GuardRefusal("binary_type splitting count exceeds guard");
        }
    }

    std::vector<BinarySplitting> out;
    std::vector<std::size_t> choice(source.vertex_count(), 0);
    for (std::size_t iter = 0; iter < total; ++iter) {
        BoundedTree t;
        std::vector<int> contracted_flags;
        // attachment vertex in t for each (source vertex, incident edge slot)
        std::vector<std::vector<std::size_t>> attach(source.vertex_count());
        for (std::size_t v = 0; v < source.vertex_count(); ++v) {
            const auto& vx = source.vertices[v];
            const std::size_t d = inc[v].size();
            if (ports[v] < 3) {
                // a leaf, or a bare single vertex
                const auto id = t.add_vertex(vx.boundary, vx.tags);
                attach[v].assign(d, id);
                continue;
            }
            const auto& lt = local[v][choice[v]].tree();
            const std::size_t p = ports[v];
            // local leaves 0..p-1 are ports; 0..d-1 edges, d is the labelled leaf if present
            std::vector<std::size_t> id(lt.vertex_count(), Quotient::npos);
            for (std::size_t u = p; u < lt.vertex_count(); ++u) id[u] = t.add_vertex(false);
            const bool has_leaf = p == d + 1;
            if (has_leaf) id[d] = t.add_vertex(true, vx.tags);
            attach[v].resize(d);
            for (const auto& e : lt.edges) {
                const std::size_t leaf = e.a < p ? e.a : (e.b < p ? e.b : Quotient::npos);
                if (leaf == Quotient::npos) {
                    t.add_edge(id[e.a], id[e.b]);
                    contracted_flags.push_back(1);
                } else if (leaf < d) {
                    attach[v][leaf] = id[e.other(leaf)];
                } else {
                    t.add_edge(id[e.a], id[e.b]);
                    contracted_flags.push_back(1);
                }
            }
        }
        for (std::size_t e = 0; e < source.edge_count(); ++e) {
            const auto& se = source.edges[e];
            const auto slot_a = static_cast<std::size_t>(std::find(inc[se.a].begin(), inc[se.a].end(), e) - inc[se.a].begin());
            const auto slot_b = static_cast<std::size_t>(std::find(inc[se.b].begin(), inc[se.b].end(), e) - inc[se.b].begin());
            t.add_edge(attach[se.a][slot_a], attach[se.b][slot_b]);
            contracted_flags.push_back(0);
        }
        std::vector<std::size_t> s;
        for (std::size_t e = 0; e < contracted_flags.size(); ++e)
            if (contracted_flags[e]) s.push_back(e);
        out.push_back({BinaryTree(std::move(t)), std::move(s)});

        // odometer over local choices
        for (std::size_t v = 0; v < source.vertex_count(); ++v) {
            if (local[v].empty()) continue;
            if (++choice[v] < local[v].size()) break;
            choice[v] = 0;
        }
    }
    return out;
}

} // namespace xnet

#endif
