#ifndef XNET_TOLERANCES_HPP
#define XNET_TOLERANCES_HPP

#include <cmath>
#include <numbers>

namespace xnet {

/// Every numeric band used by the solvers. Reports echo the effective values.
struct Tolerances {
    double tie = 1e-9;              ///< relative band for I_min / I_max membership
    double angle = 1e-6;            ///< radians, angle certificates
    double grad = 1e-10;            ///< gradient bound, multiplied by the boundary diameter
    double degenerate = 1e-9;       ///< edge collapse threshold, multiplied by the boundary diameter
    double margin = 1e-6;           ///< radians, strict-inequality margin for stability
    double triangle_slack = 1e-12;  ///< absolute slack for semimetric validation
};

inline constexpr double kTwoThirdsPi = 2.0 * std::numbers::pi / 3.0;

// Membership test shared by every tie band: value <= best * (1 + tie) + tie.
inline bool within_tie(double value, double best, double tie)
{
    return value <= best * (1.0 + tie) + tie;
}

} // namespace xnet

#endif
