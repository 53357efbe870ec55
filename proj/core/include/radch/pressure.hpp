// pressure.hpp
// Radial pressure reconstruction and its decomposition into a quadrature part
// p1, a pointwise part p2, and a closed-form velocity part p3, plus two-sided
// jump probes across the interface.
//
// d_r p = -eps (n-1)/r |d_r c|^2 - eps d_r |d_r c|^2 - rho u d_r u + nu Lap u.
// Gauge: p1(M) = p3(M) = 0; p2 is pointwise and vanishes wherever d_r c does.
//
// Jumps are probed as value(R, d) = p(R+d) - p(R-d) (outward orientation).
// The reference laws in analytic.hpp are positive (inner pressure excess);
// comparisons against them use the inward-oriented probe -value.

#pragma once

#include <vector>

#include "radch/grid.hpp"
#include "radch/physics.hpp"

namespace radch {

struct PressureDecomposition {
    Field p1;     // antiderivative of -eps (n-1)/r |d_r c|^2, zero at r = M
    Field p2;     // -eps |d_r c|^2
    Field p3;     // -rho a^2 r^{2-2n}/2 - nu a (n-1)/n r^{-n}, zero at r = M
    Field total;  // p1 + p2 + p3
};

struct JumpMeasurement {
    double t = 0.0;
    double R_probe = 0.0;
    double delta_probe = 0.0;
    double value = 0.0;  // total jump p(R+delta) - p(R-delta)
    double p1 = 0.0, p2 = 0.0, p3 = 0.0;
    bool clean = true;  // extrapolation quality flag (see jump_extrapolate)
};

// Full right-hand side of the radial pressure equation, nodewise.
Field pressure_gradient(const Field& c, const ModelParams& params);

PressureDecomposition decompose(const Field& c, const ModelParams& params);

// Two-sided probe; linear interpolation between nodes. Probe points must stay
// inside (r_min, r_max).
JumpMeasurement jump(const PressureDecomposition& dec, double R, double delta_probe,
                     double t = 0.0);

// Richardson extrapolation of the total jump over a series at geometrically
// decreasing eps (>= 3 entries). A non-monotone series degrades the quality
// flag but still returns the deepest tableau value.
JumpMeasurement jump_extrapolate(const std::vector<JumpMeasurement>& series,
                                 const std::vector<double>& eps_values);

}  // namespace radch
