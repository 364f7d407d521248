#ifndef XNET_NETWORK_HPP
#define XNET_NETWORK_HPP

#include <cstddef>
#include <vector>

#include "metric.hpp"
#include "tolerances.hpp"
#include "tree.hpp"

namespace xnet {

/// A tree with every vertex placed in the ambient space.
struct Network {
    BoundedTree tree;
    std::vector<Point> positions; ///< indexed by tree vertex
    MetricKind kind;

    double edge_length(std::size_t e) const
    {
        return rho_p(positions[tree.edges[e].a], positions[tree.edges[e].b], kind);
    }

    double length() const
    {
        double s = 0.0;
        for (std::size_t e = 0; e < tree.edge_count(); ++e) s += edge_length(e);
        return s;
    }

    std::vector<Point> boundary_positions() const
    {
        std::vector<Point> out;
        for (std::size_t v : tree.boundary_vertices()) out.push_back(positions[v]);
        return out;
    }

    void check() const
    {
        if (positions.size() != tree.vertex_count()) throw StructuralError("network must position every vertex");
        for (std::size_t v = 1; v < positions.size(); ++v)
            if (positions[v].size() != positions[0].size()) throw StructuralError("network positions differ in dimension");
    }
};

/// Collapse threshold for a network: the relative degeneracy band times the boundary diameter.
inline double degeneracy_threshold(const Network& net, const Tolerances& tol = {})
{
    const auto b = net.boundary_positions();
    return tol.degenerate * diameter(b, net.kind);
}

inline std::vector<std::size_t> degenerate_edges(const Network& net, const Tolerances& tol = {})
{
    const double eps = degeneracy_threshold(net, tol);
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < net.tree.edge_count(); ++e)
        if (net.edge_length(e) <= eps) out.push_back(e);
    return out;
}

/// Quotient of a network over a family of its degenerate edges.
inline Network network_quotient(const Network& net, const std::vector<std::size_t>& contracted)
{
    auto q = quotient_with_projection(net.tree, contracted);
    Network out;
    out.kind = net.kind;
    out.tree = std::move(q.tree);
    out.positions.assign(out.tree.vertex_count(), Point{});
    // boundary vertices pin their block's location
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t v = 0; v < net.tree.vertex_count(); ++v) {
            auto& slot = out.positions[q.projection[v]];
            const bool pin = pass == 0 ? net.tree.vertices[v].boundary : slot.empty();
            if (pin && slot.empty()) slot = net.positions[v];
        }
    return out;
}

/// The quotient over all degenerate edges; contains no degenerate edge and has the same length.
inline Network trace(const Network& net, const Tolerances& tol = {})
{
    net.check();
    return network_quotient(net, degenerate_edges(net, tol));
}

} // namespace xnet

#endif
