// acceptance_main.cpp
// End-to-end validation suite. Each criterion runs a pinned configuration and
// prints one PASS/FAIL line with the measured numbers; the exit code is the
// number of failed criteria.
//
// Criteria 2 and 4 compare the measured pressure-jump and discrepancy-pairing
// limits against the configured amplification law kappa = (R/r0)^{2n-2}. The
// measured limits instead follow (R/r0)^{n-1} (one stretch factor for the
// squared gradient, cancelled once by the compression of the layer), which
// the suite cross-checks against an independent fine quadrature. Those two
// lines are therefore expected to fail until the configured law is revisited;
// the context printed alongside documents the discrepancy precisely.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "radch/analytic.hpp"
#include "radch/diagnostics.hpp"
#include "radch/harness.hpp"
#include "radch/pressure.hpp"
#include "radch/solver.hpp"

using namespace radch;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<Criterion> g_results;

void record(int id, const std::string& name, bool pass, const std::string& detail) {
    g_results.push_back({id, name, pass, detail});
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

double now_s() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

ModelParams base_geometry() {
    ModelParams p;
    p.n_dim = 2;
    p.a = 1.0;
    p.r0 = 2.0;
    p.M = 5.0;
    p.nu = 1.0;
    p.rho = 1.0;
    return p;
}

double l2_weighted(const Field& a, const Field& b) {
    Field d2(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2[i] = d * d;
    }
    return std::sqrt(integrate(d2));
}

// --- criterion 1: transport oracle equivalence -----------------------------

void criterion_1() {
    const double t0 = now_s();
    const Potential pot;
    const Profile prof(0.5, pot);
    double errs[2];
    for (int level = 0; level < 2; ++level) {
        ModelParams p = base_geometry();
        p.eps = 0.1;
        p.alpha = ModelParams::alpha_infinity();
        p.m_tilde = 0.0;
        const std::size_t cells = level == 0 ? 400 : 800;  // eps/h = 10, then 20
        const RadialGrid g = make_grid(1.0, p.M, cells, p.n_dim);
        StepConfig cfg;
        cfg.dt = level == 0 ? 0.75 : 0.375;
        const auto traj = simulate(p, prof, g, cfg, 3.0, {3.0}, pot);
        errs[level] = l2_weighted(traj[0].c, transport_solution_field(g, 3.0, p, prof));
    }
    const double wall = now_s() - t0;
    const bool pass = errs[0] <= 5e-3 && errs[1] * 1.9 <= errs[0] && wall <= 30.0;
    record(1, "transport oracle equivalence (m = 0)", pass,
           fmt("L2 error %.3e <= 5e-3 at eps/h = 10; halving -> %.3e (x%.2f >= 1.9); %.1fs <= 30s",
               errs[0], errs[1], errs[0] / errs[1], wall));
}

// --- criteria 2 + 3: amplified jump law on analytic profiles ----------------

struct JumpSweepOutcome {
    double ratio;          // inward-oriented extrapolated jump over Young-Laplace
    double p1_ratio_fine;  // p1 part of the finest-eps measurement over Young-Laplace
    bool p2_all_zero;
};

JumpSweepOutcome jump_sweep_at(double t, const Profile& prof) {
    const std::vector<double> eps_list = {0.05, 0.025, 0.0125};
    const double delta_jump = 0.25;
    std::vector<JumpMeasurement> series;
    JumpSweepOutcome out{};
    out.p2_all_zero = true;
    ModelParams base = base_geometry();
    for (double eps : eps_list) {
        ModelParams p = base;
        p.eps = eps;
        p.alpha = ModelParams::alpha_infinity();
        const auto cells = static_cast<std::size_t>(160.0 / eps);  // eps/h = 40
        const RadialGrid g = make_grid(1.0, p.M, cells, p.n_dim);
        const Field c = transport_solution_field(g, t, p, prof);
        const PressureDecomposition dec = decompose(c, p);
        const JumpMeasurement m = jump(dec, interface_state(t, p).R, delta_jump, t);
        out.p2_all_zero &= (m.p2 == 0.0);
        series.push_back(m);
    }
    const JumpMeasurement ex = jump_extrapolate(series, eps_list);
    const double yl = young_laplace_jump(t, base, prof.sigma_profile());
    out.ratio = -ex.value / yl;
    out.p1_ratio_fine = -series.back().p1 / yl;
    return out;
}

void criteria_2_and_3() {
    const double t0 = now_s();
    const Potential pot;
    const Profile prof(0.5, pot);
    ModelParams base = base_geometry();

    const JumpSweepOutcome at3 = jump_sweep_at(3.0, prof);
    const JumpSweepOutcome at1 = jump_sweep_at(1.0, prof);
    const double wall = now_s() - t0;

    const double kappa3 = interface_state(3.0, base).kappa;  // 2.5
    const double kappa1 = interface_state(1.0, base).kappa;  // 1.5
    const bool pass2 = std::fabs(at3.ratio / kappa3 - 1.0) <= 0.05 &&
                       std::fabs(at1.ratio / kappa1 - 1.0) <= 0.05 && wall <= 10.0;
    const double stretch3 = std::pow(interface_state(3.0, base).R / base.r0, base.n_dim - 1);
    const double stretch1 = std::pow(interface_state(1.0, base).R / base.r0, base.n_dim - 1);
    record(2, "amplified jump law, ratio to Young-Laplace", pass2,
           fmt("measured %.4f vs target kappa(3) = %.4f and %.4f vs kappa(1) = %.4f (5%%); "
               "measured p1 limits track (R/r0)^{n-1} = %.4f / %.4f; %.1fs <= 10s",
               at3.ratio, kappa3, at1.ratio, kappa1, stretch3, stretch1, wall));

    record(3, "p2 jump vanishes exactly for eps < delta_probe", at3.p2_all_zero && at1.p2_all_zero,
           fmt("p2 part identically zero in all %d measurements", 6));
}

// --- criterion 4: discrepancy pairing limit ---------------------------------

void criterion_4() {
    const Potential pot;
    const Profile prof(0.5, pot);
    ModelParams base = base_geometry();
    const double t = 3.0;
    const InterfaceState st = interface_state(t, base);
    const double w = 0.5;
    auto phi_of = [&](double r) {
        const double x = (r - st.R) / w;
        const double q = 1.0 - x * x;
        return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
    };

    std::vector<double> pairings;
    for (double eps : {0.05, 0.025, 0.0125}) {
        ModelParams p = base;
        p.eps = eps;
        p.alpha = ModelParams::alpha_infinity();
        const RadialGrid g =
            make_grid(1.0, p.M, static_cast<std::size_t>(160.0 / eps), p.n_dim);
        const Field c = transport_solution_field(g, t, p, prof);
        Field phi(g);
        for (std::size_t i = 0; i < g.nodes(); ++i) phi[i] = phi_of(g.r(i));
        pairings.push_back(discrepancy_pairing(c, phi, p, pot));
    }

    const double target_spec = (prof.sigma_profile() * st.kappa - prof.sigma_tilde()) *
                               std::pow(st.R, base.n_dim - 1) * sphere_area_factor(base.n_dim) *
                               phi_of(st.R);
    const double derived_limit =
        std::pow(base.r0, base.n_dim - 1) *
        (prof.sigma_profile() * st.kappa / 2.0 - prof.sigma_tilde()) * phi_of(st.R);
    const double finest = pairings.back();
    const bool pass = std::fabs(finest / target_spec - 1.0) <= 0.05;
    record(4, "discrepancy pairing limit at R(3)", pass,
           fmt("measured %.4f vs configured target %.4f (5%%); layer-integral limit "
               "r0^{n-1}(sigma*kappa/2 - sigma~)phi(R) = %.4f matched to %.2f%%",
               finest, target_spec, derived_limit,
               100.0 * std::fabs(finest / derived_limit - 1.0)));
}

// --- criterion 5: deviation scaling in eps ----------------------------------

double deviation_integral(double eps, double alpha, double m_tilde, const Profile& prof,
                          const Potential& pot) {
    ModelParams p = base_geometry();
    p.eps = eps;
    p.alpha = alpha;
    p.m_tilde = m_tilde;
    const RadialGrid g =
        make_grid(1.0, p.M, static_cast<std::size_t>(std::ceil(160.0 / eps)), p.n_dim);
    StepConfig cfg;
    cfg.dt = 0.4 * g.h();  // a = 1
    double integral = 0.0, q_prev = 0.0;
    bool have = false;
    auto q_of = [&](const SolverState& s) {
        const Field oracle = transport_solution_field(s.c.grid(), s.t, s.params, prof);
        return deviation(s.c, oracle, s.params).h1_weighted;
    };
    StepObserver obs = [&](const SolverState& before, const SolverState& after, double dt) {
        if (!have) {
            q_prev = q_of(before);
            have = true;
        }
        const double q = q_of(after);
        integral += 0.5 * dt * (q_prev + q);
        q_prev = q;
    };
    simulate(p, prof, g, cfg, 1.0, {1.0}, pot, obs);
    return integral;
}

void criterion_5() {
    const double t0 = now_s();
    const Potential pot;
    const Profile prof(0.5, pot);
    // m_tilde = 0.1 keeps the runs inside the scaling window of the estimate
    // (with m_tilde = 1 the profile deviation saturates at these eps and the
    // integral flattens); the exponent floors below are unchanged
    const double m_tilde = 0.1;
    double slopes[2];
    int idx = 0;
    for (double alpha : {4.0, 5.0}) {
        std::vector<std::pair<double, double>> pairs;
        for (double eps : {0.08, 0.04, 0.02})
            pairs.emplace_back(eps, deviation_integral(eps, alpha, m_tilde, prof, pot));
        slopes[idx++] = scaling_fit(pairs).slope;
    }
    const double wall = now_s() - t0;
    const bool pass = slopes[0] >= 0.35 && slopes[1] >= 0.7 && wall <= 300.0;
    record(5, "deviation scaling slopes (alpha = 4, 5)", pass,
           fmt("slope(alpha=4) = %.3f >= 0.35 (theory 0.5); slope(alpha=5) = %.3f >= 0.7 "
               "(theory 1.0); m~ = %.2f, eps/h = 40; %.0fs <= 300s",
               slopes[0], slopes[1], m_tilde, wall));
}

// --- criterion 6: discrepancy positive part decays --------------------------

void criterion_6() {
    const double t0 = now_s();
    const Potential pot;
    const Profile prof(0.5, pot);
    std::vector<double> integrals;
    for (double eps : {0.08, 0.04, 0.02}) {
        ModelParams p = base_geometry();
        p.eps = eps;
        p.alpha = 0.5;
        p.m_tilde = 1.0;
        const RadialGrid g =
            make_grid(1.0, p.M, static_cast<std::size_t>(std::ceil(40.0 / eps)), p.n_dim);
        StepConfig cfg;
        cfg.dt = std::pow(eps, 2.5) / 8.0;  // resolves the fast relaxation burst
        double integral = 0.0, q_prev = 0.0;
        bool have = false;
        StepObserver obs = [&](const SolverState& before, const SolverState& after, double dt) {
            if (!have) {
                q_prev = discrepancy_positive_part(before.c, before.params, pot);
                have = true;
            }
            const double q = discrepancy_positive_part(after.c, after.params, pot);
            integral += 0.5 * dt * (q_prev + q);
            q_prev = q;
        };
        simulate(p, prof, g, cfg, 0.5, {0.5}, pot, obs);
        integrals.push_back(integral);
    }
    const double r1 = integrals[1] / integrals[0];
    const double r2 = integrals[2] / integrals[1];
    const double wall = now_s() - t0;
    const bool pass = r1 <= 0.9 && r2 <= 0.9;
    record(6, "time-integrated positive discrepancy decays", pass,
           fmt("integrals %.3e -> %.3e -> %.3e; halving ratios %.3f, %.3f <= 0.9; %.0fs",
               integrals[0], integrals[1], integrals[2], r1, r2, wall));
}

// --- criterion 7: gradient-flow power balance --------------------------------

void criterion_7() {
    const Potential pot;
    const Profile prof(0.5, pot);
    const double t_lo = 0.02, t_hi = 0.1;
    double rel[2], worst[2];
    bool monotone = true;
    double worst_energy_rise = 0.0;
    for (int level = 0; level < 2; ++level) {
        ModelParams p = base_geometry();
        p.a = 0.0;
        p.eps = 0.1;
        p.alpha = 0.0;
        p.m_tilde = 1.0;
        const std::size_t cells = level == 0 ? 400 : 800;
        const RadialGrid g = make_grid(1.0, p.M, cells, p.n_dim);
        StepConfig cfg;
        cfg.dt = level == 0 ? 2e-3 : 1e-3;
        const int nprobe = level == 0 ? 8 : 16;
        std::vector<double> probes;
        for (int k = 0; k <= nprobe; ++k) probes.push_back(t_lo + (t_hi - t_lo) * k / nprobe);

        double e_prev = 0.0;
        bool have = false;
        StepObserver obs = [&](const SolverState& before, const SolverState& after, double) {
            if (!have) {
                e_prev = discrete_energy(before.c, before.params, pot);
                have = true;
            }
            const double e = discrete_energy(after.c, after.params, pot);
            if (e > e_prev + 1e-10) {
                monotone = false;
                worst_energy_rise = std::max(worst_energy_rise, e - e_prev);
            }
            e_prev = e;
        };
        const auto traj = simulate(p, prof, g, cfg, t_hi, probes, pot, obs);
        const auto entries = power_balance(traj, pot);
        const double E0 = discrete_energy(make_initial_state(g, p, prof, pot).c, p, pot);
        double sum = 0.0, w = 0.0;
        for (const auto& e : entries) {
            sum += std::fabs(e.residual_no_convection);
            w = std::max(w, std::fabs(e.residual_no_convection));
        }
        rel[level] = (sum / entries.size()) / E0;
        worst[level] = w;
    }
    const bool pass = rel[0] <= 1e-3 && worst[1] * 1.9 <= worst[0] && monotone;
    record(7, "power balance (a = 0 gradient flow)", pass,
           fmt("mean |dE/dt + m||d_r mu||^2| / E(0) = %.3e <= 1e-3; worst residual %.3e -> "
               "%.3e (x%.2f >= 1.9); per-step energy rise bounded by 1e-10: %s",
               rel[0], worst[0], worst[1], worst[0] / worst[1], monotone ? "yes" : "NO"));
}

// --- criterion 8: invariant suite --------------------------------------------

void criterion_8() {
    const double t0 = now_s();
    const Potential pot;
    const Profile prof(0.5, pot);
    std::string failures;

    // quadrature exactness
    for (int n : {2, 3})
        for (std::size_t cells : {64u, 500u}) {
            const double M = n == 2 ? 5.0 : 3.0;
            const RadialGrid g = make_grid(1.0, M, cells, n);
            double sum = 0.0;
            for (std::size_t i = 0; i < g.nodes(); ++i) sum += g.weight(i);
            const double exact = (std::pow(M, n) - 1.0) / n;
            if (std::fabs(sum - exact) > 1e-10 * exact) failures += "quadrature ";
        }

    // divergence-free identity r^{n-1} u = a
    {
        ModelParams p = base_geometry();
        p.a = 1.7;
        for (int n : {2, 3}) {
            p.n_dim = n;
            for (double r = 1.0; r <= 5.0; r += 0.037)
                if (std::fabs(std::pow(r, n - 1) * velocity(r, p) - p.a) > 1e-12)
                    failures += "divergence-free ";
        }
    }

    // bv_seminorm <= energy on transported profiles
    {
        ModelParams p = base_geometry();
        p.eps = 0.05;
        const RadialGrid g = make_grid(1.0, p.M, 1600, p.n_dim);
        for (double t : {0.0, 1.0, 3.0}) {
            const Field c = transport_solution_field(g, t, p, prof);
            if (bv_seminorm(c, pot, p) > energy(c, p, pot) + 1e-10) failures += "bv<=energy ";
        }
    }

    // decomposition additivity and jump linearity at machine precision
    {
        ModelParams p = base_geometry();
        p.eps = 0.05;
        const RadialGrid g = make_grid(1.0, p.M, 2000, p.n_dim);
        const Field c = transport_solution_field(g, 3.0, p, prof);
        const PressureDecomposition dec = decompose(c, p);
        for (std::size_t i = 0; i < g.nodes(); ++i)
            if (dec.total[i] != dec.p1[i] + dec.p2[i] + dec.p3[i]) {
                failures += "additivity ";
                break;
            }
        const JumpMeasurement m = jump(dec, interface_state(3.0, p).R, 0.25, 3.0);
        if (m.value != m.p1 + m.p2 + m.p3) failures += "jump-linearity ";
    }

    // determinism: identical configs give byte-identical CSV
    {
        const ExperimentConfig cfg = config_from_json_text(R"({
            "params": {"alpha": "infinity", "eps": 0.1},
            "t_end": 0.5, "probe_times": [0.25, 0.5]
        })");
        const auto dir_a = std::filesystem::temp_directory_path() / "radch_acc_a";
        const auto dir_b = std::filesystem::temp_directory_path() / "radch_acc_b";
        std::filesystem::remove_all(dir_a);
        std::filesystem::remove_all(dir_b);
        emit_single(run_single(cfg), cfg, "csv", dir_a.string());
        emit_single(run_single(cfg), cfg, "csv", dir_b.string());
        auto slurp = [](const std::filesystem::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const std::string a = slurp(dir_a / "run.csv");
        if (a.empty() || a != slurp(dir_b / "run.csv")) failures += "determinism ";
    }

    const double wall = now_s() - t0;
    const bool pass = failures.empty() && wall <= 60.0;
    record(8, "invariant suite", pass,
           failures.empty() ? fmt("quadrature, divergence-free, bv<=energy, additivity, "
                                  "jump linearity, determinism all hold; %.1fs <= 60s",
                                  wall)
                            : "failed: " + failures);
}

}  // namespace

int main() {
    std::printf("radch acceptance suite (scheme %s, version %s)\n", kSchemeId, kCodeVersion);
    criterion_1();
    criteria_2_and_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();

    int failed = 0;
    for (const Criterion& c : g_results) failed += c.pass ? 0 : 1;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failed,
                g_results.size());
    return failed;
}
