// diagnostics.hpp
// Computable functionals of a phase field: free energy, discrepancy and its
// positive part, BV seminorm of W(c), interface location, deviation norms
// against an oracle field, and log-log scaling fits.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "radch/grid.hpp"
#include "radch/physics.hpp"

namespace radch {

struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;            // E_eps with nodal gradients
    double discrepancy_pos = 0.0;   // \int (xi)^+ r^{n-1} dr
    double bv_seminorm = 0.0;       // \int sqrt(2 f~(c)) |d_r c| r^{n-1} dr
    double interface_radius = 0.0;  // zero crossing (NaN when undefined)
    double mass = 0.0;              // \int c r^{n-1} dr
    double linf_c = 0.0;
    std::vector<std::pair<int, double>> discrepancy_pairing;  // (test fn id, value)
};

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;  // log-log intercept
    double residual = 0.0;   // rms residual in log space
};

// E_eps(c) = \int (eps |d_r c|^2 / 2 + f(c)/eps) r^{n-1} dr with the nodal
// derivative, so bv_seminorm <= energy holds pointwise by Young's inequality.
double energy(const Field& c, const ModelParams& params, const Potential& pot = Potential());

// xi = eps |d_r c|^2 / 2 - f(c)/eps, nodewise.
Field discrepancy(const Field& c, const ModelParams& params, const Potential& pot = Potential());

double discrepancy_positive_part(const Field& c, const ModelParams& params,
                                 const Potential& pot = Potential());

// \int xi phi r^{n-1} dr for a test function phi given on the same grid.
double discrepancy_pairing(const Field& c, const Field& phi, const ModelParams& params,
                           const Potential& pot = Potential());

double bv_seminorm(const Field& c, const Potential& pot, const ModelParams& params);

// Linear-interpolated zero crossing; throws (naming the crossing count) unless
// the field changes sign exactly once.
double locate_interface(const Field& c);

struct DeviationNorms {
    double l2 = 0.0;           // ||c - oracle||_{L^2(r^{n-1} dr)}
    double h1_weighted = 0.0;  // eps ||d_r (c - oracle)||^2_{L^2(r^{n-1} dr)}
};

DeviationNorms deviation(const Field& c_solver, const Field& c_oracle, const ModelParams& params);

// Least squares power-law fit value ~ C * eps^slope of positive samples.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& pairs);

// max over snapshot pairs of ||c(t) - c(tau)||_{L^2} / |t - tau|^exponent.
double holder_seminorm(const std::vector<std::pair<double, Field>>& trajectory, double exponent);

DiagnosticsRecord diagnostics_record(double t, const Field& c, const ModelParams& params,
                                     const Potential& pot = Potential());

}  // namespace radch
