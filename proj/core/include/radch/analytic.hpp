// analytic.hpp
// Closed-form objects of the radial model: prescribed velocity, interface
// radius R(t), amplification kappa(t), the zero-mobility transport solution
// and its derivative, reference pressure-jump laws, and the discrepancy-limit
// amplitude.

#pragma once

#include "radch/grid.hpp"
#include "radch/physics.hpp"

namespace radch {

struct InterfaceState {
    double t;      // time
    double R;      // interface radius R(t) = (r0^n + n a t)^{1/n}
    double H;      // scalar mean curvature (n-1)/R
    double kappa;  // amplification (R/r0)^{2n-2}
};

// u(r) = a r^{1-n}; time independent and divergence free.
double velocity(double r, const ModelParams& params);

InterfaceState interface_state(double t, const ModelParams& params);

// Transported phase field: c0((r^n - a n t)^{1/n}) where r^n >= a n t, 1 below.
double transport_solution(double r, double t, const ModelParams& params, const Profile& prof);

// Exact radial derivative of the transport solution (zero on the inner branch).
double transport_solution_deriv(double r, double t, const ModelParams& params,
                                const Profile& prof);

// Sample the transport solution on a grid.
Field transport_solution_field(const RadialGrid& grid, double t, const ModelParams& params,
                               const Profile& prof);

// sigma_profile * kappa(t) * (n-1)/R(t): the amplified jump law.
double limit_jump(double t, const ModelParams& params, const Profile& prof);

// sigma * (n-1)/R(t): the classical reference law for a given surface tension.
double young_laplace_jump(double t, const ModelParams& params, double sigma);

// sigma_profile * kappa(t) - sigma_tilde: amplitude of the limiting
// discrepancy measure on the interface sphere.
double xi_limit_amplitude(double t, const ModelParams& params, const Profile& prof);

// omega_{n-1}: surface measure factor of the unit sphere (2*pi for n=2,
// 4*pi for n=3).
double sphere_area_factor(int n_dim);

}  // namespace radch
