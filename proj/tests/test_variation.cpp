#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "xnet/variation.hpp"

using namespace xnet;

namespace {

SegmentDeformation random_deformation(std::mt19937& rng, std::size_t k)
{
    std::uniform_real_distribution<double> U(-1, 1);
    Point a(k), b(k), u(k), v(k);
    for (std::size_t i = 0; i < k; ++i) {
        a[i] = U(rng);
        b[i] = a[i] + U(rng) + (i == 0 ? 2.0 : 0.0);
        u[i] = U(rng);
        v[i] = U(rng);
    }
    return {a, b, u, v};
}

} // namespace

TEST(LengthDerivatives, NormalMotion)
{
    const auto d = length_derivatives_1param(SegmentDeformation({0, 0}, {1, 0}, {0, 0}, {0, 1}), 0.0);
    EXPECT_DOUBLE_EQ(d.length, 1.0);
    EXPECT_DOUBLE_EQ(d.first, 0.0);
    EXPECT_DOUBLE_EQ(d.second, 1.0);
}

TEST(LengthDerivatives, TangentialMotion)
{
    const auto d = length_derivatives_1param(SegmentDeformation({0, 0}, {1, 0}, {0, 0}, {1, 0}), 0.0);
    EXPECT_DOUBLE_EQ(d.first, 1.0);
    EXPECT_DOUBLE_EQ(d.second, 0.0);
}

TEST(LengthDerivatives, RigidTranslation)
{
    const SegmentDeformation s({0.2, -1, 3}, {1, 1, 1}, {0.7, 0.1, -2}, {0.7, 0.1, -2});
    for (double t : {-3.0, 0.0, 0.5, 10.0}) {
        const auto d = length_derivatives_1param(s, t);
        EXPECT_EQ(d.first, 0.0);
        EXPECT_EQ(d.second, 0.0);
    }
}

TEST(LengthDerivatives, SingularAtZeroLength)
{
    EXPECT_THROW(length_derivatives_1param(SegmentDeformation({0, 0}, {1, 0}, {0, 0}, {-1, 0}), 1.0), SingularityError);
    EXPECT_THROW(length_partials_2param(SegmentDeformation({1, 1}, {1, 1}, {0, 0}, {1, 0})), SingularityError);
}

TEST(LengthDerivatives, DimensionMismatch)
{
    EXPECT_THROW(SegmentDeformation({0, 0}, {1, 0, 0}, {0, 0}, {0, 0}), StructuralError);
}

TEST(LengthDerivatives, ConvexEverywhere)
{
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> T(-2, 2);
    for (int trial = 0; trial < 500; ++trial) {
        const auto s = random_deformation(rng, 2 + trial % 3);
        const double t = T(rng);
        if (s.length_at(t) < 1e-6) continue;
        EXPECT_GE(length_derivatives_1param(s, t).second, 0.0);
    }
}

TEST(LengthPartials, TangentialFirstEndpoint)
{
    // u = unit tangent, v = 0
    const auto p = length_partials_2param(SegmentDeformation({0, 0}, {2, 0}, {1, 0}, {0, 0}));
    EXPECT_DOUBLE_EQ(p.dt, -1.0);
    EXPECT_DOUBLE_EQ(p.dtt, 0.0);
}

TEST(LengthPartials, NormalBothEndpoints)
{
    const double len = 2.5;
    const auto p = length_partials_2param(SegmentDeformation({0, 0}, {len, 0}, {0, 1}, {0, 1}));
    EXPECT_DOUBLE_EQ(p.dtt, 1.0 / len);
    EXPECT_DOUBLE_EQ(p.dss, 1.0 / len);
    EXPECT_DOUBLE_EQ(p.dst, -1.0 / len);
}

TEST(LengthPartials, OrthogonalVelocities)
{
    const auto p = length_partials_2param(SegmentDeformation({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}));
    EXPECT_EQ(p.dst, 0.0);
}

TEST(LengthPartials, ConsistentWithOneParameter)
{
    // d/dt l(t, t) = dt + ds; second = dtt + 2 dst + dss
    std::mt19937 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_deformation(rng, 3);
        const auto p = length_partials_2param(s);
        const auto d = length_derivatives_1param(s, 0.0);
        EXPECT_NEAR(d.first, p.dt + p.ds, 1e-12);
        EXPECT_NEAR(d.second, p.dtt + 2 * p.dst + p.dss, 1e-10);
    }
}

TEST(FdOracle, SecondOrderConvergence)
{
    std::mt19937 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_deformation(rng, 2 + trial % 2);
        const auto exact = length_derivatives_1param(s, 0.0);
        const double h = 1e-3 * s.length_at(0.0) / std::sqrt(detail::dot(s.w(), s.w()));
        for (int order : {1, 2}) {
            const auto fd = fd_oracle(s, order, h);
            const double want = order == 1 ? exact.first : exact.second;
            const double scale = std::max(1.0, std::abs(want));
            EXPECT_NEAR(fd.estimates[2], want, 1e-6 * scale);
            EXPECT_GE(fd.empirical_order, 1.8) << "trial " << trial << " order " << order;
            EXPECT_LE(fd.empirical_order, 2.2) << "trial " << trial << " order " << order;
        }
    }
}

TEST(FdOracle, RigidTranslationGivesZero)
{
    const SegmentDeformation s({0, 0}, {1, 2}, {0.3, 0.4}, {0.3, 0.4});
    for (int order : {1, 2}) {
        const auto fd = fd_oracle(s, order, 1e-3);
        for (double e : fd.estimates) EXPECT_NEAR(e, 0.0, 1e-12);
    }
}

TEST(FdOracle, MixedPartialMatches)
{
    std::mt19937 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_deformation(rng, 2 + trial % 2);
        const auto fd = fd_mixed_partial(s, 1e-4);
        EXPECT_NEAR(fd.estimates[0], length_partials_2param(s).dst, 1e-6);
    }
}

TEST(FdOracle, Refusals)
{
    const SegmentDeformation s({0, 0}, {1, 0}, {0, 0}, {-1, 0});
    EXPECT_THROW(fd_oracle(s, 1, 1.5, 0.0), SingularityError);
    EXPECT_THROW(fd_oracle(s, 3, 1e-3), StructuralError);
    EXPECT_THROW(fd_oracle(s, 1, 0.0), StructuralError);
}

TEST(SegmentHessianBlock, MatchesFiniteDifferences)
{
    // Hessian of |B - A| in A, by central differences of the gradient
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 2 + trial % 2;
        Point a(k), b(k);
        for (std::size_t i = 0; i < k; ++i) {
            a[i] = U(rng);
            b[i] = a[i] + U(rng) + 1.0;
        }
        Eigen::MatrixXd K(k, k);
        segment_hessian_block(a, b, K);
        auto grad = [&](const Point& p, std::size_t i) {
            double len = 0;
            for (std::size_t j = 0; j < k; ++j) len += (b[j] - p[j]) * (b[j] - p[j]);
            return (p[i] - b[i]) / std::sqrt(len);
        };
        const double h = 1e-6;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                Point p = a, q = a;
                p[j] += h;
                q[j] -= h;
                EXPECT_NEAR(K(i, j), (grad(p, i) - grad(q, i)) / (2 * h), 1e-6);
            }
        // positive semidefinite with the segment direction in its kernel
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
        EXPECT_LE(std::abs(es.eigenvalues().minCoeff()), 1e-12);
    }
}

TEST(DefaultStep, ScalesWithLength)
{
    EXPECT_DOUBLE_EQ(default_fd_step(SegmentDeformation({0, 0}, {0.5, 0}, {0, 0}, {0, 1})), 1e-4);
    EXPECT_DOUBLE_EQ(default_fd_step(SegmentDeformation({0, 0}, {30, 40}, {0, 0}, {0, 1})), 5e-3);
}
