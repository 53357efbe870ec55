#include "radch/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "radch/analytic.hpp"

namespace radch {

namespace {

constexpr double kCLo = 1.0;   // c(r_min)
constexpr double kCHi = -1.0;  // c(r_max)

double max_velocity(const RadialGrid& grid, const ModelParams& params) {
    return params.a * std::pow(grid.r_min(), 1 - params.n_dim);
}

// Semi-Lagrangian convection step. The characteristic through (r, t + dt)
// leaves (r^n - a n dt)^{1/n} at time t, exactly; feet that exit through the
// inflow boundary carry the Dirichlet value. Cubic Lagrange interpolation at
// the foot; boundary nodes pinned. Unconditionally stable, and exact in time
// up to the resampling, so fewer steps transport more accurately.
void convection_substep(const RadialGrid& grid, const ModelParams& params, double dt,
                        std::vector<double>& c) {
    const std::size_t nn = grid.nodes();
    const int n = params.n_dim;
    const double h = grid.h();
    const double rmin_n = std::pow(grid.r_min(), n);
    std::vector<double> out = c;
    for (std::size_t i = 1; i + 1 < nn; ++i) {
        const double yn = std::pow(grid.r(i), n) - params.a * n * dt;
        if (yn <= rmin_n) {
            out[i] = kCLo;
            continue;
        }
        const double y = std::pow(yn, 1.0 / n);
        const double x = (y - grid.r_min()) / h;
        std::ptrdiff_t j = static_cast<std::ptrdiff_t>(std::floor(x));
        j = std::max<std::ptrdiff_t>(1, std::min<std::ptrdiff_t>(j, grid.cells() - 3));
        const double t = x - static_cast<double>(j);
        const double cm1 = c[j - 1], c0 = c[j], c1 = c[j + 1], c2 = c[j + 2];
        out[i] = cm1 * (-t * (t - 1.0) * (t - 2.0) / 6.0) +
                 c0 * ((t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0) +
                 c1 * (-(t + 1.0) * t * (t - 2.0) / 2.0) +
                 c2 * ((t + 1.0) * t * (t - 1.0) / 6.0);
    }
    c.swap(out);
}

// Factorized semi-implicit operator for a fixed (grid, params, dt, beta).
class DiffusionOperator {
  public:
    DiffusionOperator(const RadialGrid& grid, const ModelParams& params, double dt, double beta)
        : grid_(grid),
          params_(params),
          dt_(dt),
          beta_(beta),
          nin_(grid.nodes() - 2),
          mat_(2 * (grid.nodes() - 2), 3, 3) {
        const double h = grid.h();
        const double m = params.mobility();
        const double eps = params.eps;
        for (std::size_t k = 0; k < nin_; ++k) {
            const std::size_t i = k + 1;
            // exact cell volumes keep the w-weighted mass telescoping exactly
            const double D = h * grid.weight(i);
            const double glo = (i == 1) ? 0.0 : grid.face_coeff(i - 1);       // zero-flux mu face
            const double ghi = (i == nin_) ? 0.0 : grid.face_coeff(i);        // at the boundary
            const std::size_t rc = 2 * k, rmu = 2 * k + 1;

            // mass row: c_i - dt m Lap mu = rhs
            mat_.set(rc, 2 * k, 1.0);
            mat_.add(rc, rmu, dt_ * m * (glo + ghi) / D);
            if (i > 1) mat_.add(rc, 2 * (k - 1) + 1, -dt_ * m * glo / D);
            if (i < nin_) mat_.add(rc, 2 * (k + 1) + 1, -dt_ * m * ghi / D);

            // constitutive row: mu_i + eps Lap c - (beta/eps) c_i = rhs
            // (Lap c keeps both faces; Dirichlet neighbors move to the rhs)
            const double clo = grid.face_coeff(i - 1);
            const double chi = grid.face_coeff(i);
            mat_.set(rmu, rmu, 1.0);
            mat_.add(rmu, 2 * k, -eps * (clo + chi) / D - beta_ / eps);
            if (i > 1) mat_.add(rmu, 2 * (k - 1), eps * clo / D);
            if (i < nin_) mat_.add(rmu, 2 * (k + 1), eps * chi / D);
        }
        mat_.factor();
    }

    // Advances c in place and fills mu (both full-length nodal vectors).
    void apply(const Potential& pot, std::vector<double>& c, std::vector<double>& mu) const {
        const double h = grid_.h();
        const double eps = params_.eps;
        std::vector<double> rhs(2 * nin_);
        for (std::size_t k = 0; k < nin_; ++k) {
            const std::size_t i = k + 1;
            const double D = h * grid_.weight(i);
            rhs[2 * k] = c[i];
            double b = pot.fp(c[i]) / eps - beta_ / eps * c[i];
            if (i == 1) b -= eps * grid_.face_coeff(0) / D * kCLo;
            if (i == nin_) b -= eps * grid_.face_coeff(i) / D * kCHi;
            rhs[2 * k + 1] = b;
        }
        const std::vector<double> x = mat_.solve(rhs);
        for (std::size_t k = 0; k < nin_; ++k) {
            c[k + 1] = x[2 * k];
            mu[k + 1] = x[2 * k + 1];
        }
        c[0] = kCLo;
        c[grid_.nodes() - 1] = kCHi;
        mu[0] = mu[1];
        mu[grid_.nodes() - 1] = mu[grid_.nodes() - 2];
    }

  private:
    const RadialGrid& grid_;
    ModelParams params_;
    double dt_, beta_;
    std::size_t nin_;
    BandedMatrix mat_;
};

// mu from the constitutive law alone (used when the diffusion solve is off).
void fill_mu_from_constitutive(const RadialGrid& grid, const ModelParams& params,
                               const Potential& pot, const std::vector<double>& c,
                               std::vector<double>& mu) {
    const std::size_t n = grid.nodes();
    const double h = grid.h();
    const double eps = params.eps;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double D = h * grid.weight(i);
        const double lap = (grid.face_coeff(i) * (c[i + 1] - c[i]) -
                            grid.face_coeff(i - 1) * (c[i] - c[i - 1])) /
                           D;
        mu[i] = -eps * lap + pot.fp(c[i]) / eps;
    }
    mu[0] = mu[1];
    mu[n - 1] = mu[n - 2];
}

void check_state(const std::vector<double>& c, double bound, long step_count) {
    double linf = 0.0;
    for (double v : c) {
        if (!std::isfinite(v))
            throw std::runtime_error("solver: non-finite phase value at step " +
                                     std::to_string(step_count));
        linf = std::max(linf, std::fabs(v));
    }
    if (linf > bound)
        throw std::runtime_error("solver: ||c||_inf = " + std::to_string(linf) +
                                 " exceeded bound " + std::to_string(bound) + " at step " +
                                 std::to_string(step_count));
}

SolverState advance(const SolverState& state, const StepConfig& cfg, const Potential& pot,
                    const DiffusionOperator* op) {
    const RadialGrid& grid = state.c.grid();
    std::vector<double> c = state.c.values();
    std::vector<double> mu(grid.nodes(), 0.0);

    if (state.params.a > 0.0) convection_substep(grid, state.params, cfg.dt, c);

    if (op != nullptr)
        op->apply(pot, c, mu);
    else
        fill_mu_from_constitutive(grid, state.params, pot, c, mu);

    check_state(c, cfg.max_abs_c, state.step_count + 1);

    SolverState next{state.t + cfg.dt, Field(grid, std::move(c)), Field(grid, std::move(mu)),
                     state.params, state.step_count + 1};
    return next;
}

}  // namespace

void StepConfig::validate(const RadialGrid& grid, const ModelParams& params) const {
    if (!(dt > 0.0)) throw std::invalid_argument("StepConfig: dt must be positive");
    if (!(stabilization >= 0.0 || stabilization == -1.0))
        throw std::invalid_argument("StepConfig: stabilization must be >= 0 (or -1 for default)");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
        throw std::invalid_argument("StepConfig: cfl_safety must be in (0,1]");
    // The semi-Lagrangian transport needs no CFL bound; when the diffusion
    // solve is active the bound limits the operator-splitting error instead.
    const double umax = max_velocity(grid, params);
    if (params.mobility() > 0.0 && umax > 0.0 &&
        dt > cfl_safety * grid.h() / umax * (1.0 + 1e-12))
        throw std::invalid_argument("StepConfig: dt violates the convective CFL bound " +
                                    std::to_string(cfl_safety * grid.h() / umax));
    if (!(params.eps / grid.h() >= 8.0 - 1e-12))
        throw std::invalid_argument("resolution rule: require eps/h >= 8, got " +
                                    std::to_string(params.eps / grid.h()));
}

double default_stabilization(const Potential& pot, double bound) {
    double m = 0.0;
    const int samples = 512;
    for (int k = 0; k <= samples; ++k) {
        const double c = -bound + 2.0 * bound * k / samples;
        m = std::max(m, pot.fpp(c));
    }
    return 0.5 * m;
}

Field chemical_potential(const Field& c, const ModelParams& params, const Potential& pot) {
    const Field lap = radial_laplacian(c, BoundaryClosure::one_sided);
    Field mu(c.grid());
    for (std::size_t i = 0; i < c.size(); ++i)
        mu[i] = -params.eps * lap[i] + pot.fp(c[i]) / params.eps;
    return mu;
}

double discrete_energy(const Field& c, const ModelParams& params, const Potential& pot) {
    const RadialGrid& g = c.grid();
    const double h = g.h();
    double grad = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        const double d = c[i + 1] - c[i];
        grad += g.face_coeff(i) * d * d / h;
    }
    double potential = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i) potential += g.weight(i) * pot.f(c[i]);
    return 0.5 * params.eps * grad + potential / params.eps;
}

double dissipation_rate(const Field& mu, const ModelParams& params) {
    const RadialGrid& g = mu.grid();
    const double h = g.h();
    double s = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        const double d = mu[i + 1] - mu[i];
        s += g.face_coeff(i) * d * d / h;
    }
    return params.mobility() * s;
}

double convective_work_rate(const Field& c, const Field& mu, const ModelParams& params) {
    const RadialGrid& g = c.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i)
        s += (c[i + 1] - c[i]) * 0.5 * (mu[i] + mu[i + 1]);
    return params.a * s;
}

SolverState make_initial_state(const RadialGrid& grid, const ModelParams& params,
                               const Profile& prof, const Potential& pot) {
    params.validate();
    Field c = initial_condition(grid, params, prof);
    std::vector<double> mu(grid.nodes(), 0.0);
    fill_mu_from_constitutive(grid, params, pot, c.values(), mu);
    return SolverState{0.0, c, Field(grid, std::move(mu)), params, 0};
}

SolverState step(const SolverState& state, const StepConfig& cfg, const Potential& pot) {
    const RadialGrid& grid = state.c.grid();
    cfg.validate(grid, state.params);
    const double beta =
        cfg.stabilization >= 0.0 ? cfg.stabilization : default_stabilization(pot, cfg.max_abs_c);
    if (state.params.mobility() > 0.0) {
        DiffusionOperator op(grid, state.params, cfg.dt, beta);
        return advance(state, cfg, pot, &op);
    }
    return advance(state, cfg, pot, nullptr);
}

std::vector<SolverState> simulate(const ModelParams& params, const Profile& prof,
                                  const RadialGrid& grid, const StepConfig& cfg, double t_end,
                                  const std::vector<double>& probe_times, const Potential& pot,
                                  const StepObserver& observer) {
    params.validate();
    cfg.validate(grid, params);
    if (!(t_end >= 0.0)) throw std::invalid_argument("simulate: t_end must be >= 0");
    const double R_end = interface_state(t_end, params).R;
    if (!(R_end < params.M - prof.delta()))
        throw std::invalid_argument("layer exits domain: R(t_end) = " + std::to_string(R_end) +
                                    " must stay below M - delta = " +
                                    std::to_string(params.M - prof.delta()));

    std::vector<double> probes = probe_times;
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    for (double tp : probes)
        if (tp < 0.0 || tp > t_end + 1e-12)
            throw std::invalid_argument("simulate: probe time outside [0, t_end]");
    if (probes.empty()) probes.push_back(t_end);

    const double beta =
        cfg.stabilization >= 0.0 ? cfg.stabilization : default_stabilization(pot, cfg.max_abs_c);
    const bool diffusive = params.mobility() > 0.0;
    std::map<double, std::unique_ptr<DiffusionOperator>> ops;
    auto op_for = [&](double dt) -> const DiffusionOperator* {
        if (!diffusive) return nullptr;
        auto it = ops.find(dt);
        if (it == ops.end())
            it = ops.emplace(dt, std::make_unique<DiffusionOperator>(grid, params, dt, beta))
                     .first;
        return it->second.get();
    };

    SolverState state = make_initial_state(grid, params, prof, pot);
    std::vector<SolverState> out;
    std::size_t next_probe = 0;
    const double tiny = 1e-12 * std::max(1.0, t_end);
    auto maybe_snapshot = [&](const SolverState& s) {
        while (next_probe < probes.size() && s.t >= probes[next_probe] - tiny) {
            out.push_back(s);
            ++next_probe;
        }
    };
    maybe_snapshot(state);

    while (state.t < t_end - tiny) {
        double dt = std::min(cfg.dt, t_end - state.t);
        if (next_probe < probes.size()) dt = std::min(dt, probes[next_probe] - state.t);
        StepConfig local = cfg;
        local.dt = dt;
        SolverState next = advance(state, local, pot, op_for(dt));
        if (observer) observer(state, next, dt);
        state = std::move(next);
        maybe_snapshot(state);
    }
    return out;
}

std::vector<PowerBalanceEntry> power_balance(const std::vector<SolverState>& trajectory,
                                             const Potential& pot) {
    if (trajectory.size() < 2)
        throw std::invalid_argument("power_balance: need at least 2 snapshots");
    const double spacing = trajectory[1].t - trajectory[0].t;
    for (std::size_t j = 1; j < trajectory.size(); ++j) {
        const double d = trajectory[j].t - trajectory[j - 1].t;
        if (std::fabs(d - spacing) > 1e-9 * std::max(1.0, std::fabs(spacing)))
            throw std::invalid_argument("power_balance: snapshots not uniformly spaced");
    }

    std::vector<PowerBalanceEntry> out;
    out.reserve(trajectory.size() - 1);
    double E_prev = discrete_energy(trajectory[0].c, trajectory[0].params, pot);
    double D_prev = dissipation_rate(trajectory[0].mu, trajectory[0].params);
    double W_prev = convective_work_rate(trajectory[0].c, trajectory[0].mu, trajectory[0].params);
    for (std::size_t j = 1; j < trajectory.size(); ++j) {
        const SolverState& s = trajectory[j];
        const double E = discrete_energy(s.c, s.params, pot);
        const double D = dissipation_rate(s.mu, s.params);
        const double W = convective_work_rate(s.c, s.mu, s.params);
        PowerBalanceEntry e;
        e.t_mid = 0.5 * (trajectory[j - 1].t + s.t);
        e.dE_dt = (E - E_prev) / spacing;
        e.dissipation = 0.5 * (D_prev + D);
        e.convective_work = 0.5 * (W_prev + W);
        e.residual = e.dE_dt + e.dissipation + e.convective_work;
        e.residual_no_convection = e.dE_dt + e.dissipation;
        out.push_back(e);
        E_prev = E;
        D_prev = D;
        W_prev = W;
    }
    return out;
}

}  // namespace radch
