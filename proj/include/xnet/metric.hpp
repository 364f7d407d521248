#ifndef XNET_METRIC_HPP
#define XNET_METRIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "tolerances.hpp"

namespace xnet {

using Point = std::vector<double>;

/// Selects the distance rho_p(a, b) = (sum |a_i - b_i|^p)^(1/p); p = 2 is Euclidean.
struct MetricKind {
    double p = 2.0;

    MetricKind() = default;
    explicit MetricKind(double exponent) : p(exponent)
    {
        if (!(exponent > 1.0) || !std::isfinite(exponent))
            throw StructuralError("metric exponent must satisfy 1 < p < inf, got " + std::to_string(exponent));
    }
    bool euclidean() const { return p == 2.0; }
};

// Number of unordered pairs among n vertices.
constexpr std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

// Lexicographic pair index of (i, j), 0-based, i != j:
// (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).
constexpr std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j)
{
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// A point of D^m: the n(n-1)/2 pairwise distances in lexicographic pair order.
class SemimetricVector {
public:
    SemimetricVector() = default;

    explicit SemimetricVector(std::vector<double> flat) : r_(std::move(flat))
    {
        // m = n(n-1)/2 must be triangular with n >= 2
        const double disc = 1.0 + 8.0 * static_cast<double>(r_.size());
        const auto n = static_cast<std::size_t>(std::llround((1.0 + std::sqrt(disc)) / 2.0));
        if (r_.empty() || pair_count(n) != r_.size())
            throw StructuralError("semimetric length " + std::to_string(r_.size()) + " is not n(n-1)/2 for any n >= 2");
        n_ = n;
    }

    SemimetricVector(std::size_t n, double fill) : n_(n), r_(pair_count(n), fill)
    {
        if (n < 2) throw StructuralError("semimetric needs at least two vertices");
    }

    std::size_t n() const { return n_; }
    std::size_t size() const { return r_.size(); }

    double operator()(std::size_t i, std::size_t j) const
    {
        return i == j ? 0.0 : r_[pair_index(n_, i, j)];
    }
    double& at(std::size_t i, std::size_t j) { return r_[pair_index(n_, i, j)]; }

    std::span<const double> values() const { return r_; }
    const std::vector<double>& flat() const { return r_; }

private:
    std::size_t n_ = 0;
    std::vector<double> r_;
};

struct ValidityReport {
    bool ok = true;
    bool negative_entry = false;
    std::vector<std::array<std::size_t, 3>> violated_triples; ///< 0-based (i, j, k), i < j < k
};

/// Membership in D^m: non-negativity and |r_ij - r_jk| <= r_ik <= r_ij + r_jk for i < j < k.
inline ValidityReport validate_semimetric(const SemimetricVector& r, double slack = Tolerances{}.triangle_slack)
{
    ValidityReport rep;
    for (double v : r.values())
        if (!(v >= -slack)) rep.negative_entry = true;
    const std::size_t n = r.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const double ij = r(i, j), jk = r(j, k), ik = r(i, k);
                if (std::abs(ij - jk) > ik + slack || ik > ij + jk + slack)
                    rep.violated_triples.push_back({i, j, k});
            }
    rep.ok = !rep.negative_entry && rep.violated_triples.empty();
    return rep;
}

inline double rho_p(std::span<const double> a, std::span<const double> b, MetricKind kind = {})
{
    if (a.size() != b.size())
        throw StructuralError("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    if (kind.euclidean()) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s);
    }
    // scale by the largest difference to keep |d|^p in range
    double big = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) big = std::max(big, std::abs(a[i] - b[i]));
    if (big == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]) / big, kind.p);
    return big * std::pow(s, 1.0 / kind.p);
}

/// f*(rho): the semimetric induced on the index set by the ambient distance.
inline SemimetricVector pullback(std::span<const Point> points, MetricKind kind = {})
{
    if (points.size() < 2) throw StructuralError("pullback needs at least two points");
    SemimetricVector r(points.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) r.at(i, j) = rho_p(points[i], points[j], kind);
    return r;
}

inline double diameter(std::span<const Point> points, MetricKind kind = {})
{
    double d = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) d = std::max(d, rho_p(points[i], points[j], kind));
    return d;
}

} // namespace xnet

#endif
