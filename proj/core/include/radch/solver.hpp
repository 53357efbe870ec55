// solver.hpp
// Time stepper for the radial convective Cahn-Hilliard system on (1, M):
//   dc/dt + u dc/dr = m Lap mu,   mu = -eps Lap c + f'(c)/eps,
// with u = a r^{1-n}, Dirichlet phase values c(1) = 1, c(M) = -1, zero-Neumann
// chemical potential, and mobility m = m_tilde eps^alpha.
//
// One step = semi-Lagrangian convection (exact characteristic feet for
// u = a r^{1-n}, cubic resampling) followed by a semi-implicit mixed (c, mu)
// solve with linear stabilization beta_s (c^{k+1} - c^k)/eps added to mu.
// alpha = infinity short-circuits the diffusion solve entirely, leaving pure
// transport stepping with no step-size restriction.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "radch/banded.hpp"
#include "radch/grid.hpp"
#include "radch/physics.hpp"

namespace radch {

struct StepConfig {
    double dt = 1e-3;
    double stabilization = -1.0;  // beta_s; negative requests the default bound
    double cfl_safety = 0.4;
    double max_abs_c = 1.5;  // run aborts if ||c||_inf exceeds this

    void validate(const RadialGrid& grid, const ModelParams& params) const;
};

// beta_s >= max_{|c| <= bound} f''(c)/2, the unconditional-stability floor of
// the stabilized scheme.
double default_stabilization(const Potential& pot, double bound);

struct SolverState {
    double t = 0.0;
    Field c;
    Field mu;
    ModelParams params;
    long step_count = 0;
};

// mu = -eps Lap c + f'(c)/eps with one-sided boundary closure.
Field chemical_potential(const Field& c, const ModelParams& params, const Potential& pot);

// The discrete free energy the stabilized scheme dissipates when a = 0:
// face-centered gradient part plus node-lumped potential part.
double discrete_energy(const Field& c, const ModelParams& params, const Potential& pot);

// \int m |d_r mu|^2 r^{n-1} dr on faces.
double dissipation_rate(const Field& mu, const ModelParams& params);

// a \int mu d_r c dr (the convective work conjugate to the transport term).
double convective_work_rate(const Field& c, const Field& mu, const ModelParams& params);

SolverState make_initial_state(const RadialGrid& grid, const ModelParams& params,
                               const Profile& prof, const Potential& pot);

SolverState step(const SolverState& state, const StepConfig& cfg, const Potential& pot);

using StepObserver =
    std::function<void(const SolverState& before, const SolverState& after, double dt)>;

// Snapshots at probe_times (each must lie in [0, t_end]); with no probes the
// final state alone is returned. Throws if R(t_end) >= M - delta or the
// resolution rule eps/h >= 8 fails.
std::vector<SolverState> simulate(const ModelParams& params, const Profile& prof,
                                  const RadialGrid& grid, const StepConfig& cfg, double t_end,
                                  const std::vector<double>& probe_times,
                                  const Potential& pot = Potential(),
                                  const StepObserver& observer = {});

struct PowerBalanceEntry {
    double t_mid;
    double dE_dt;
    double dissipation;      // interval average of m ||d_r mu||^2
    double convective_work;  // interval average of a \int mu d_r c dr
    double residual;         // dE_dt + dissipation + convective_work
    double residual_no_convection;  // dE_dt + dissipation
};

// Discrete balance over consecutive snapshots (uniform spacing required).
std::vector<PowerBalanceEntry> power_balance(const std::vector<SolverState>& trajectory,
                                             const Potential& pot = Potential());

}  // namespace radch
