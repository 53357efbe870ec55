// Solver tests: stationarity, boundary handling, the characteristics oracle,
// gradient-flow energy monotonicity, mass bookkeeping, and the discrete power
// balance.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "radch/analytic.hpp"
#include "radch/diagnostics.hpp"
#include "radch/solver.hpp"

using namespace radch;

namespace {

ModelParams transport_params(double eps) {
    ModelParams p;
    p.n_dim = 2;
    p.a = 1.0;
    p.r0 = 2.0;
    p.M = 5.0;
    p.eps = eps;
    p.alpha = ModelParams::alpha_infinity();
    p.m_tilde = 0.0;
    return p;
}

double l2_distance(const Field& a, const Field& b) {
    Field d2(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2[i] = d * d;
    }
    return std::sqrt(integrate(d2));
}

}  // namespace

TEST_CASE("stationarity: a = 0 and m = 0 leaves the state untouched") {
    ModelParams p = transport_params(0.1);
    p.a = 0.0;
    const Potential pot;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, 400, p.n_dim);
    const SolverState s0 = make_initial_state(g, p, prof, pot);
    StepConfig cfg;
    cfg.dt = 1e-3;
    const SolverState s1 = step(s0, cfg, pot);
    for (std::size_t i = 0; i < g.nodes(); ++i) CHECK(s1.c[i] == s0.c[i]);
    CHECK(s1.t == doctest::Approx(1e-3));
    CHECK(s1.step_count == 1);
}

TEST_CASE("Dirichlet values exact after every step") {
    ModelParams p = transport_params(0.1);
    p.alpha = 4.0;
    p.m_tilde = 1.0;
    const Potential pot;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, 400, p.n_dim);
    SolverState s = make_initial_state(g, p, prof, pot);
    StepConfig cfg;
    cfg.dt = 2e-3;
    for (int k = 0; k < 20; ++k) {
        s = step(s, cfg, pot);
        CHECK(s.c[0] == 1.0);
        CHECK(s.c[g.nodes() - 1] == -1.0);
        // zero-Neumann mu at the boundary-adjacent faces
        CHECK(s.mu[0] == s.mu[1]);
        CHECK(s.mu[g.nodes() - 1] == s.mu[g.nodes() - 2]);
        CHECK(s.c.all_finite());
    }
}

TEST_CASE("CFL guard (split stepping) and resolution rule are enforced") {
    ModelParams p = transport_params(0.1);
    p.alpha = 0.0;
    p.m_tilde = 1.0;  // diffusion active: the splitting CFL bound applies
    const Potential pot;
    const RadialGrid g = make_grid(1.0, p.M, 400, p.n_dim);  // h = 0.01
    const Profile prof(0.5, pot);
    const SolverState s0 = make_initial_state(g, p, prof, pot);
    StepConfig cfg;
    cfg.dt = 0.02;  // above cfl_safety * h / a = 0.004
    CHECK_THROWS_AS(step(s0, cfg, pot), std::invalid_argument);

    // pure transport has no step-size restriction
    ModelParams pt = transport_params(0.1);
    const SolverState st = make_initial_state(g, pt, prof, pot);
    StepConfig big;
    big.dt = 0.5;
    CHECK_NOTHROW(step(st, big, pot));

    ModelParams coarse = transport_params(0.05);  // eps/h = 5 < 8
    const RadialGrid g2 = make_grid(1.0, coarse.M, 400, coarse.n_dim);
    const SolverState s2 = make_initial_state(g2, coarse, prof, pot);
    StepConfig cfg2;
    cfg2.dt = 1e-3;
    CHECK_THROWS_AS(step(s2, cfg2, pot), std::invalid_argument);
}

TEST_CASE("simulate rejects a layer that would exit the domain") {
    ModelParams p = transport_params(0.1);
    const Potential pot;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, 400, p.n_dim);
    StepConfig cfg;
    cfg.dt = 0.004;
    // R(t) = sqrt(4 + 2t) reaches M - delta = 4.5 at t = 8.125
    CHECK_THROWS_AS(simulate(p, prof, g, cfg, 9.0, {9.0}, pot), std::invalid_argument);
}

TEST_CASE("simulate with t_end = 0 returns the initial condition") {
    ModelParams p = transport_params(0.1);
    const Potential pot;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, 400, p.n_dim);
    StepConfig cfg;
    cfg.dt = 0.004;
    const auto traj = simulate(p, prof, g, cfg, 0.0, {}, pot);
    REQUIRE(traj.size() == 1);
    const Field c0 = initial_condition(g, p, prof);
    for (std::size_t i = 0; i < g.nodes(); ++i) CHECK(traj[0].c[i] == c0[i]);
}

TEST_CASE("transport run tracks the characteristics solution") {
    const Potential pot;
    const Profile prof(0.5, pot);
    double errors[2];
    int idx = 0;
    for (std::size_t cells : {400u, 800u}) {
        ModelParams p = transport_params(0.1);
        const RadialGrid g = make_grid(1.0, p.M, cells, p.n_dim);
        StepConfig cfg;
        cfg.dt = cells == 400 ? 0.6 : 0.3;  // (h, dt) halved together
        const auto traj = simulate(p, prof, g, cfg, 3.0, {3.0}, pot);
        REQUIRE(traj.size() == 1);
        const Field oracle = transport_solution_field(g, 3.0, p, prof);
        errors[idx++] = l2_distance(traj[0].c, oracle);
    }
    CHECK(errors[0] <= 5e-3);
    CHECK(errors[1] * 1.9 <= errors[0]);
}

TEST_CASE("single-step transport error vanishes linearly in dt") {
    const Potential pot;
    const Profile prof(0.5, pot);
    ModelParams p = transport_params(0.1);
    const RadialGrid g = make_grid(1.0, p.M, 800, p.n_dim);
    const double t0 = 1.0;

    Field c(g);
    for (std::size_t i = 0; i < g.nodes(); ++i)
        c[i] = transport_solution(g.r(i), t0, p, prof);
    SolverState s{t0, c, Field(g, 0.0), p, 0};

    double errs[2];
    int idx = 0;
    for (double dt : {5e-4, 2.5e-4}) {
        StepConfig cfg;
        cfg.dt = dt;
        const SolverState s1 = step(s, cfg, pot);
        const Field oracle = transport_solution_field(g, t0 + dt, p, prof);
        errs[idx++] = l2_distance(s1.c, oracle);
    }
    // the resampling error of one short step is O(h^3 dt), within the
    // O(dt^2) + O(h^2 dt) local budget
    CHECK(errs[1] * 1.9 <= errs[0]);
}

TEST_CASE("gradient flow (a = 0): discrete energy never increases") {
    ModelParams p = transport_params(0.1);
    p.a = 0.0;
    p.alpha = 0.0;
    p.m_tilde = 1.0;
    const Potential pot;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, 400, p.n_dim);
    SolverState s = make_initial_state(g, p, prof, pot);
    StepConfig cfg;
    cfg.dt = 1e-3;
    double e_prev = discrete_energy(s.c, p, pot);
    for (int k = 0; k < 200; ++k) {
        s = step(s, cfg, pot);
        const double e = discrete_energy(s.c, p, pot);
        CHECK(e <= e_prev + 1e-10);
        e_prev = e;
    }
}

TEST_CASE("mass conservation with a = 0 (zero-Neumann mu flux)") {
    const Potential pot;
    const Profile prof(0.5, pot);
    for (int n : {2, 3}) {
        ModelParams p = transport_params(0.1);
        p.n_dim = n;
        p.M = n == 2 ? 5.0 : 4.0;
        p.a = 0.0;
        p.alpha = 0.0;
        p.m_tilde = 1.0;
        const RadialGrid g = make_grid(1.0, p.M, n == 2 ? 400 : 300, n);
        SolverState s = make_initial_state(g, p, prof, pot);
        const double mass0 = integrate(s.c);
        StepConfig cfg;
        cfg.dt = 1e-3;
        const double T = 0.2;
        for (int k = 0; k < 200; ++k) s = step(s, cfg, pot);
        const double drift = std::fabs(integrate(s.c) - mass0) / std::fabs(mass0);
        CHECK(drift / T <= 1e-10);
    }
}

TEST_CASE("n = 3: transport oracle, energy decay, boundary values") {
    const Potential pot;
    const Profile prof(0.5, pot);

    double errs[2];
    int idx = 0;
    for (std::size_t cells : {300u, 600u}) {
        ModelParams p = transport_params(0.1);
        p.n_dim = 3;
        p.M = 4.0;
        const RadialGrid g = make_grid(1.0, p.M, cells, 3);
        StepConfig cfg;
        cfg.dt = cells == 300 ? 0.5 : 0.25;
        const auto traj = simulate(p, prof, g, cfg, 1.0, {1.0}, pot);
        errs[idx++] = l2_distance(traj[0].c, transport_solution_field(g, 1.0, p, prof));
        CHECK(traj[0].c[0] == 1.0);
        CHECK(traj[0].c[g.nodes() - 1] == -1.0);
    }
    CHECK(errs[0] <= 5e-3);
    CHECK(errs[1] * 1.9 <= errs[0]);

    ModelParams p = transport_params(0.1);
    p.n_dim = 3;
    p.M = 4.0;
    p.a = 0.0;
    p.alpha = 0.0;
    p.m_tilde = 1.0;
    const RadialGrid g = make_grid(1.0, p.M, 300, 3);
    SolverState s = make_initial_state(g, p, prof, pot);
    StepConfig cfg;
    cfg.dt = 1e-3;
    double e_prev = discrete_energy(s.c, p, pot);
    for (int k = 0; k < 100; ++k) {
        s = step(s, cfg, pot);
        const double e = discrete_energy(s.c, p, pot);
        CHECK(e <= e_prev + 1e-10);
        e_prev = e;
    }
}

TEST_CASE("mass evolution with m = 0: d/dt mass = 2a (boundary flux identity)") {
    const Potential pot;
    const Profile prof(0.5, pot);
    for (std::size_t cells : {400u, 800u}) {
        ModelParams p = transport_params(0.1);
        const RadialGrid g = make_grid(1.0, p.M, cells, p.n_dim);
        StepConfig cfg;
        cfg.dt = 0.01;
        SolverState s = make_initial_state(g, p, prof, pot);
        const double mass0 = integrate(s.c);
        const int steps = 50;
        for (int k = 0; k < steps; ++k) s = step(s, cfg, pot);
        const double rate = (integrate(s.c) - mass0) / (steps * cfg.dt);
        // -a(c(M) - c(1)) = 2a; resampling residue measured well below 1e-5
        CHECK(std::fabs(rate - 2.0 * p.a) <= 1e-5);
    }
}

TEST_CASE("stabilization: default floor and explicit override") {
    const Potential pot;
    // max f''/2 over |c| <= 1.5 for the quartic well: (3*2.25 - 1)/4
    CHECK(default_stabilization(pot, 1.5) == doctest::Approx(1.4375).epsilon(1e-6));

    // a larger explicit coefficient keeps the energy decay intact
    ModelParams p = transport_params(0.1);
    p.a = 0.0;
    p.alpha = 0.0;
    p.m_tilde = 1.0;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, 400, p.n_dim);
    SolverState s = make_initial_state(g, p, prof, pot);
    StepConfig cfg;
    cfg.dt = 2e-3;
    cfg.stabilization = 3.0;
    double e_prev = discrete_energy(s.c, p, pot);
    for (int k = 0; k < 50; ++k) {
        s = step(s, cfg, pot);
        const double e = discrete_energy(s.c, p, pot);
        CHECK(e <= e_prev + 1e-10);
        e_prev = e;
    }
}

TEST_CASE("infinity-norm guard aborts the run") {
    ModelParams p = transport_params(0.1);
    p.a = 0.0;
    p.alpha = 0.0;
    p.m_tilde = 1.0;
    const Potential pot;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, 400, p.n_dim);
    SolverState s = make_initial_state(g, p, prof, pot);
    StepConfig cfg;
    cfg.dt = 1e-3;
    cfg.max_abs_c = 0.5;  // initial data already violates it
    CHECK_THROWS_AS(step(s, cfg, pot), std::runtime_error);
}

TEST_CASE("chemical potential: constants and layer support") {
    ModelParams p = transport_params(0.1);
    const Potential pot;
    const Profile prof(0.5, pot);
    const RadialGrid g = make_grid(1.0, p.M, 400, p.n_dim);

    Field ones(g, 1.0);
    const Field mu1 = chemical_potential(ones, p, pot);
    for (std::size_t i = 0; i < g.nodes(); ++i) CHECK(std::fabs(mu1[i]) <= 1e-13);

    Field half(g, 0.5);
    const Field muh = chemical_potential(half, p, pot);
    for (std::size_t i = 0; i < g.nodes(); ++i)
        CHECK(muh[i] == doctest::Approx(pot.fp(0.5) / p.eps).epsilon(1e-12));

    const Field c0 = initial_condition(g, p, prof);
    const Field mu0 = chemical_potential(c0, p, pot);
    double linf = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i) linf = std::max(linf, std::fabs(mu0[i]));
    CHECK(linf <= 100.0 / p.eps);
    // support confined to the layer plus one stencil halo
    const double lo = p.r0 - prof.delta() * p.eps - 2.0 * g.h();
    const double hi = p.r0 + prof.delta() * p.eps + 2.0 * g.h();
    for (std::size_t i = 0; i < g.nodes(); ++i)
        if (g.r(i) < lo || g.r(i) > hi) CHECK(std::fabs(mu0[i]) <= 1e-12);
}

TEST_CASE("power balance: exactly stationary pair has zero residual") {
    ModelParams p = transport_params(0.1);
    p.a = 0.0;
    const Potential pot;
    const RadialGrid g = make_grid(1.0, p.M, 100, p.n_dim);
    const Field ones(g, 1.0);
    const Field mu(g, 0.0);
    SolverState s0{0.0, ones, mu, p, 0};
    SolverState s1{0.1, ones, mu, p, 1};
    const auto entries = power_balance({s0, s1}, pot);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].residual == 0.0);
    CHECK(entries[0].residual_no_convection == 0.0);
}

TEST_CASE("power balance rejects irregular snapshot spacing") {
    ModelParams p = transport_params(0.1);
    const RadialGrid g = make_grid(1.0, p.M, 100, p.n_dim);
    const Field f(g, 1.0);
    SolverState s0{0.0, f, f, p, 0};
    SolverState s1{0.1, f, f, p, 1};
    SolverState s2{0.3, f, f, p, 2};
    CHECK_THROWS_AS(power_balance({s0, s1, s2}, Potential()), std::invalid_argument);
    CHECK_THROWS_AS(power_balance({s0}, Potential()), std::invalid_argument);
}

TEST_CASE("power balance residual shrinks under joint (h, dt) refinement") {
    // measured on the smooth window after the initial relaxation transient;
    // the probe spacing halves along with (h, dt)
    const Potential pot;
    const Profile prof(0.5, pot);
    const double t0 = 0.05, t1 = 0.15;
    double res[2];
    int idx = 0;
    for (int level = 0; level < 2; ++level) {
        ModelParams p = transport_params(0.2);
        p.a = 0.0;
        p.alpha = 0.0;
        p.m_tilde = 1.0;
        const std::size_t cells = level == 0 ? 400 : 800;
        const double dt = level == 0 ? 4e-3 : 2e-3;
        const RadialGrid g = make_grid(1.0, p.M, cells, p.n_dim);
        StepConfig cfg;
        cfg.dt = dt;
        const int nprobe = level == 0 ? 10 : 20;
        std::vector<double> probes;
        for (int k = 0; k <= nprobe; ++k) probes.push_back(t0 + (t1 - t0) * k / nprobe);
        const auto traj = simulate(p, prof, g, cfg, t1, probes, pot);
        const auto entries = power_balance(traj, pot);
        double worst = 0.0;
        for (const auto& e : entries) worst = std::max(worst, std::fabs(e.residual));
        res[idx++] = worst;
    }
    CHECK(res[1] * 1.9 <= res[0]);
}

TEST_CASE("m = 0 run: dE/dt + convective work -> 0 under refinement") {
    const Potential pot;
    const Profile prof(0.5, pot);
    double res[2];
    int idx = 0;
    for (int level = 0; level < 2; ++level) {
        ModelParams p = transport_params(0.2);
        const std::size_t cells = level == 0 ? 400 : 800;
        const RadialGrid g = make_grid(1.0, p.M, cells, p.n_dim);
        StepConfig cfg;
        cfg.dt = 0.32 * g.h() / p.a;
        const int nprobe = level == 0 ? 10 : 20;  // probe spacing halves too
        std::vector<double> probes;
        for (int k = 0; k <= nprobe; ++k) probes.push_back(0.4 * k / nprobe);
        const auto traj = simulate(p, prof, g, cfg, 0.4, probes, pot);
        const auto entries = power_balance(traj, pot);
        double worst = 0.0;
        for (const auto& e : entries) worst = std::max(worst, std::fabs(e.residual));
        res[idx++] = worst;
    }
    CHECK(res[1] * 1.9 <= res[0]);
}
