#ifndef XNET_VARIATION_HPP
#define XNET_VARIATION_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "errors.hpp"
#include "metric.hpp"

// First and second variation of a segment's length under linear motion of its
// endpoints, A(t) = A + u t and B(s) = B + v s.

namespace xnet {

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace detail

struct SegmentDeformation {
    Point a, b; ///< endpoints at the base instant
    Point u, v; ///< endpoint velocities

    SegmentDeformation() = default;
    SegmentDeformation(Point A, Point B, Point U, Point V) : a(std::move(A)), b(std::move(B)), u(std::move(U)), v(std::move(V))
    {
        const auto k = a.size();
        if (b.size() != k || u.size() != k || v.size() != k || k == 0)
            throw StructuralError("segment deformation vectors must share one non-zero dimension");
    }

    std::size_t dim() const { return a.size(); }
    Point x() const
    {
        Point out(dim());
        for (std::size_t i = 0; i < dim(); ++i) out[i] = b[i] - a[i];
        return out;
    }
    Point w() const
    {
        Point out(dim());
        for (std::size_t i = 0; i < dim(); ++i) out[i] = v[i] - u[i];
        return out;
    }
    /// |B(t) - A(t)| for the one-parameter motion (both endpoints at time t).
    double length_at(double t) const { return length_at(t, t); }
    /// |B(s) - A(t)|.
    double length_at(double t, double s) const
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) {
            const double d = (b[i] + v[i] * s) - (a[i] + u[i] * t);
            acc += d * d;
        }
        return std::sqrt(acc);
    }
};

struct LengthDerivatives {
    double length = 0.0;
    double first = 0.0;
    double second = 0.0;
};

/// l(t), l'(t), l''(t) for the one-parameter deformation. l'' >= 0 always.
inline LengthDerivatives length_derivatives_1param(const SegmentDeformation& d, double t)
{
    const auto x = d.x();
    const auto w = d.w();
    Point y(d.dim());
    for (std::size_t i = 0; i < d.dim(); ++i) y[i] = x[i] + w[i] * t;
    const double yy = detail::dot(y, y);
    const double len = std::sqrt(yy);
    if (!(len > 0.0)) throw SingularityError("segment length vanishes at t = " + std::to_string(t));
    const double wy = detail::dot(w, y);
    const double ww = detail::dot(w, w);
    // Gram numerator is non-negative by Cauchy-Schwarz; clamp rounding below zero
    const double gram = std::max(0.0, ww * yy - wy * wy);
    return {len, wy / len, gram / (yy * len)};
}

struct LengthPartials {
    double dt = 0.0;   ///< d l / d t at (0,0)
    double ds = 0.0;   ///< d l / d s
    double dtt = 0.0;  ///< d^2 l / d t^2
    double dst = 0.0;  ///< d^2 l / d s d t
    double dss = 0.0;  ///< d^2 l / d s^2
};

/// Partials at (s, t) = (0, 0) of l(s, t) = |x + v s - u t|; numerators are
/// 2x2 minors of the Gram matrix of {x, u, v}.
inline LengthPartials length_partials_2param(const SegmentDeformation& d)
{
    const auto x = d.x();
    const double xx = detail::dot(x, x);
    const double len = std::sqrt(xx);
    if (!(len > 0.0)) throw SingularityError("segment is degenerate");
    const double xu = detail::dot(x, d.u), xv = detail::dot(x, d.v);
    const double uu = detail::dot(d.u, d.u), vv = detail::dot(d.v, d.v), uv = detail::dot(d.u, d.v);
    const double cube = xx * len;
    LengthPartials p;
    p.dt = -xu / len;
    p.ds = xv / len;
    p.dtt = std::max(0.0, xx * uu - xu * xu) / cube;
    p.dst = (xu * xv - xx * uv) / cube;
    p.dss = std::max(0.0, xx * vv - xv * xv) / cube;
    return p;
}

/// Second-variation block K(alpha, beta) = d^2 l / d a_alpha d a_beta for moving
/// one endpoint A of the segment [A, B]; the cross block for (A, B) is -K.
/// Entries come from the mixed-partial formula with coordinate velocities.
template <class Matrix>
void segment_hessian_block(std::span<const double> a, std::span<const double> b, Matrix& block)
{
    const std::size_t k = a.size();
    Point ea(k, 0.0), eb(k, 0.0), zero(k, 0.0);
    Point A(a.begin(), a.end()), B(b.begin(), b.end());
    for (std::size_t alpha = 0; alpha < k; ++alpha)
        for (std::size_t beta = 0; beta < k; ++beta) {
            ea.assign(k, 0.0);
            eb.assign(k, 0.0);
            ea[alpha] = 1.0;
            eb[beta] = 1.0;
            // moving A by e_alpha t and B by e_beta s: mixed partial = -K(alpha, beta)
            const auto p = length_partials_2param(SegmentDeformation(A, B, ea, eb));
            block(alpha, beta) = -p.dst;
        }
}

// ---------------------------------------------------------------------------
// finite-difference oracle

struct FdEstimate {
    double h = 0.0;
    std::array<double, 3> estimates{}; ///< central differences at h, h/2, h/4
    double richardson_ratio = 0.0;     ///< (D(h) - D(h/2)) / (D(h/2) - D(h/4)); ~4 for an O(h^2) stencil
    double empirical_order = 0.0;      ///< log2 of the ratio
    double extrapolated = 0.0;         ///< (4 D(h/4) - D(h/2)) / 3
};

namespace detail {

// central differences evaluated in extended precision to keep round-off far below truncation error
template <class F>
long double central(F&& f, long double t, long double h, int order)
{
    if (order == 1) return (f(t + h) - f(t - h)) / (2.0L * h);
    return (f(t + h) - 2.0L * f(t) + f(t - h)) / (h * h);
}

inline FdEstimate richardson(std::array<long double, 3> d, double h)
{
    FdEstimate est;
    est.h = h;
    for (std::size_t i = 0; i < 3; ++i) est.estimates[i] = static_cast<double>(d[i]);
    const long double num = d[0] - d[1];
    const long double den = d[1] - d[2];
    est.richardson_ratio = den != 0.0L ? static_cast<double>(num / den) : 0.0;
    est.empirical_order = est.richardson_ratio > 0.0 ? std::log2(est.richardson_ratio) : 0.0;
    est.extrapolated = static_cast<double>((4.0L * d[2] - d[1]) / 3.0L);
    return est;
}

} // namespace detail

/// Default step: 1e-4 * max(1, |x|).
inline double default_fd_step(const SegmentDeformation& d)
{
    const auto x = d.x();
    return 1e-4 * std::max(1.0, std::sqrt(detail::dot(x, x)));
}

/// Central-difference estimate of l'(t) (order 1) or l''(t) (order 2) at steps h, h/2, h/4.
inline FdEstimate fd_oracle(const SegmentDeformation& d, int order, double h, double t = 0.0)
{
    if (order != 1 && order != 2) throw StructuralError("finite-difference order must be 1 or 2");
    if (!(h > 0.0)) throw StructuralError("finite-difference step must be positive");
    auto len = [&](long double tt) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < d.dim(); ++i) {
            const long double diff = (static_cast<long double>(d.b[i]) + static_cast<long double>(d.v[i]) * tt) -
                                     (static_cast<long double>(d.a[i]) + static_cast<long double>(d.u[i]) * tt);
            acc += diff * diff;
        }
        return std::sqrt(acc);
    };
    // refuse stencils that cross the degenerate set: the segment length must stay
    // bounded away from zero over [t - h, t + h]
    const auto x = d.x();
    const auto w = d.w();
    const double ww = detail::dot(w, w);
    if (ww > 0.0) {
        double tstar = -detail::dot(x, w) / ww; // closest approach
        tstar = std::clamp(tstar, t - h, t + h);
        if (!(d.length_at(tstar) > 0.0)) throw SingularityError("finite-difference stencil crosses a degenerate segment");
    } else if (!(d.length_at(t) > 0.0)) {
        throw SingularityError("finite-difference stencil crosses a degenerate segment");
    }
    std::array<long double, 3> dv{};
    long double step = h;
    for (std::size_t i = 0; i < 3; ++i, step /= 2.0L) dv[i] = detail::central(len, t, step, order);
    return detail::richardson(dv, h);
}

/// Central-difference mixed partial d^2 l / d s d t at (0, 0), at steps h, h/2, h/4.
inline FdEstimate fd_mixed_partial(const SegmentDeformation& d, double h)
{
    if (!(d.length_at(0.0, 0.0) > 0.0)) throw SingularityError("segment is degenerate");
    auto len = [&](long double t, long double s) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < d.dim(); ++i) {
            const long double diff = (static_cast<long double>(d.b[i]) + static_cast<long double>(d.v[i]) * s) -
                                     (static_cast<long double>(d.a[i]) + static_cast<long double>(d.u[i]) * t);
            acc += diff * diff;
        }
        return std::sqrt(acc);
    };
    std::array<long double, 3> dv{};
    long double step = h;
    for (std::size_t i = 0; i < 3; ++i, step /= 2.0L)
        dv[i] = (len(step, step) - len(step, -step) - len(-step, step) + len(-step, -step)) / (4.0L * step * step);
    return detail::richardson(dv, h);
}

} // namespace xnet

#endif
