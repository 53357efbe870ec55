#include "radch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "radch/analytic.hpp"

namespace radch {

using nlohmann::json;

const char* const kSchemeId = "semi-lagrangian-cubic/semi-implicit-stabilized-1";
const char* const kCodeVersion = "0.1.0";

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json alpha_to_json(double alpha) {
    if (std::isinf(alpha)) return json("infinity");
    return json(alpha);
}

double alpha_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "infinity" || s == "inf") return ModelParams::alpha_infinity();
        throw std::invalid_argument("config: alpha string must be \"infinity\"");
    }
    return j.get<double>();
}

ModelParams params_for(const ExperimentConfig& cfg, double eps, double alpha) {
    ModelParams p = cfg.params;
    p.eps = eps;
    p.alpha = alpha;
    return p;
}

}  // namespace

std::size_t ExperimentConfig::cells_for(double eps) const {
    if (cells > 0) return cells;
    const double span = params.M - 1.0;
    return static_cast<std::size_t>(std::ceil(span * eps_per_h / eps));
}

double ExperimentConfig::dt_for(double eps, double alpha) const {
    if (dt > 0.0) return dt;
    const ModelParams p = params_for(*this, eps, alpha);
    if (p.mobility() == 0.0) {
        // pure transport: semi-Lagrangian steps are exact in time, so favor
        // few resamples
        return t_end > 0.0 ? std::min(0.5, t_end) : 0.5;
    }
    const double h = (params.M - 1.0) / static_cast<double>(cells_for(eps));
    if (!(params.a > 0.0))
        throw std::invalid_argument("stepping.dt required when a = 0 (no CFL bound applies)");
    return cfl_safety * h / params.a;
}

void ExperimentConfig::validate() const {
    ModelParams base = params;
    base.validate();
    if (!(profile_delta > 0.0)) throw std::invalid_argument("profile.delta must be positive");
    if (!(jump_probe_delta > 0.0)) throw std::invalid_argument("jump_probe.delta must be positive");
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
        throw std::invalid_argument("stepping.cfl_safety must be in (0,1]");
    if (cells == 0 && !(eps_per_h >= 8.0))
        throw std::invalid_argument("resolution rule: grid.eps_per_h must be >= 8");

    std::vector<double> eps_list = sweep_eps.empty() ? std::vector<double>{params.eps} : sweep_eps;
    std::vector<double> alpha_list =
        sweep_alpha.empty() ? std::vector<double>{params.alpha} : sweep_alpha;

    for (double a : alpha_list) {
        ModelParams p = params_for(*this, params.eps, a);
        p.validate();
    }
    for (double e : eps_list) {
        ModelParams p = params_for(*this, e, params.alpha);
        p.validate();
        const double h = (params.M - 1.0) / static_cast<double>(cells_for(e));
        if (!(e / h >= 8.0 - 1e-12))
            throw std::invalid_argument("resolution rule: eps/h = " + std::to_string(e / h) +
                                        " < 8 for eps = " + std::to_string(e));
        const double margin = std::min(params.r0 - 1.0, params.M - params.r0);
        if (!(profile_delta * e < margin))
            throw std::invalid_argument("transition layer touches the boundary for eps = " +
                                        std::to_string(e));
    }

    if (sweep_eps.size() >= 2) {
        const double ratio = sweep_eps[0] / sweep_eps[1];
        if (!(ratio > 1.0))
            throw std::invalid_argument("sweep eps values must be strictly decreasing");
        for (std::size_t i = 1; i < sweep_eps.size(); ++i) {
            if (!(sweep_eps[i] < sweep_eps[i - 1]))
                throw std::invalid_argument("sweep eps values must be strictly decreasing");
            if (i + 1 < sweep_eps.size()) {
                const double r = sweep_eps[i] / sweep_eps[i + 1];
                if (std::fabs(r - ratio) > 1e-9 * ratio)
                    throw std::invalid_argument("sweep eps values must decrease geometrically");
            }
        }
    }

    const double R_end = interface_state(t_end, base).R;
    if (!(R_end < params.M - profile_delta))
        throw std::invalid_argument("layer exits domain: R(t_end) = " + std::to_string(R_end) +
                                    " >= M - delta = " +
                                    std::to_string(params.M - profile_delta));
    for (double tp : probe_times)
        if (tp < 0.0 || tp > t_end + 1e-12)
            throw std::invalid_argument("probe_times must lie in [0, t_end]");

    if (params.a == 0.0 && t_end > 0.0 && dt <= 0.0)
        throw std::invalid_argument("stepping.dt required when a = 0 (no CFL bound applies)");
}

ExperimentConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    if (j.contains("params")) {
        const json& p = j["params"];
        if (p.contains("n_dim")) cfg.params.n_dim = p["n_dim"].get<int>();
        if (p.contains("a")) cfg.params.a = p["a"].get<double>();
        if (p.contains("r0")) cfg.params.r0 = p["r0"].get<double>();
        if (p.contains("M")) cfg.params.M = p["M"].get<double>();
        if (p.contains("nu")) cfg.params.nu = p["nu"].get<double>();
        if (p.contains("rho")) cfg.params.rho = p["rho"].get<double>();
        if (p.contains("m_tilde")) cfg.params.m_tilde = p["m_tilde"].get<double>();
        if (p.contains("alpha")) cfg.params.alpha = alpha_from_json(p["alpha"]);
        if (p.contains("eps")) cfg.params.eps = p["eps"].get<double>();
    }
    if (j.contains("profile")) {
        const json& p = j["profile"];
        if (p.contains("delta")) cfg.profile_delta = p["delta"].get<double>();
        if (p.contains("tabulation_panels"))
            cfg.profile_tabulation_panels = p["tabulation_panels"].get<std::size_t>();
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (g.contains("cells")) cfg.cells = g["cells"].get<std::size_t>();
        if (g.contains("eps_per_h")) cfg.eps_per_h = g["eps_per_h"].get<double>();
    }
    if (j.contains("stepping")) {
        const json& s = j["stepping"];
        if (s.contains("dt")) cfg.dt = s["dt"].get<double>();
        if (s.contains("cfl_safety")) cfg.cfl_safety = s["cfl_safety"].get<double>();
        if (s.contains("stabilization")) cfg.stabilization = s["stabilization"].get<double>();
        if (s.contains("max_abs_c")) cfg.max_abs_c = s["max_abs_c"].get<double>();
    }
    if (j.contains("t_end")) cfg.t_end = j["t_end"].get<double>();
    if (j.contains("probe_times")) cfg.probe_times = j["probe_times"].get<std::vector<double>>();
    if (cfg.probe_times.empty()) cfg.probe_times = {cfg.t_end};
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (s.contains("eps")) cfg.sweep_eps = s["eps"].get<std::vector<double>>();
        if (s.contains("alpha")) {
            cfg.sweep_alpha.clear();
            for (const json& a : s["alpha"]) cfg.sweep_alpha.push_back(alpha_from_json(a));
        }
    }
    if (j.contains("jump_probe") && j["jump_probe"].contains("delta"))
        cfg.jump_probe_delta = j["jump_probe"]["delta"].get<double>();
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<unsigned>();
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
    json j;
    j["params"] = {{"n_dim", cfg.params.n_dim}, {"a", cfg.params.a},
                   {"r0", cfg.params.r0},       {"M", cfg.params.M},
                   {"nu", cfg.params.nu},       {"rho", cfg.params.rho},
                   {"m_tilde", cfg.params.m_tilde}, {"alpha", alpha_to_json(cfg.params.alpha)},
                   {"eps", cfg.params.eps}};
    j["profile"] = {{"delta", cfg.profile_delta},
                    {"tabulation_panels", cfg.profile_tabulation_panels}};
    j["grid"] = {{"cells", cfg.cells}, {"eps_per_h", cfg.eps_per_h}};
    j["stepping"] = {{"dt", cfg.dt},
                     {"cfl_safety", cfg.cfl_safety},
                     {"stabilization", cfg.stabilization},
                     {"max_abs_c", cfg.max_abs_c}};
    j["t_end"] = cfg.t_end;
    j["probe_times"] = cfg.probe_times;
    json sweep_alpha = json::array();
    for (double a : cfg.sweep_alpha) sweep_alpha.push_back(alpha_to_json(a));
    j["sweep"] = {{"eps", cfg.sweep_eps}, {"alpha", sweep_alpha}};
    j["jump_probe"] = {{"delta", cfg.jump_probe_delta}};
    j["output_dir"] = cfg.output_dir;
    j["workers"] = cfg.workers;
    return j.dump(2);
}

namespace {

ProbeRow make_probe_row(double t, const Field& c, const ModelParams& params, const Profile& prof,
                        const Potential& pot, double jump_delta) {
    ProbeRow row;
    row.eps = params.eps;
    row.alpha = params.alpha;
    row.t_probe = t;
    const InterfaceState st = interface_state(t, params);
    row.R_analytic = st.R;
    row.kappa_target = st.kappa;
    row.jump_young_laplace = young_laplace_jump(t, params, prof.sigma_profile());

    const DiagnosticsRecord rec = diagnostics_record(t, c, params, pot);
    row.R_measured = rec.interface_radius;
    row.energy = rec.energy;
    row.discrepancy_pos = rec.discrepancy_pos;
    row.bv_seminorm = rec.bv_seminorm;
    row.mass = rec.mass;

    const RadialGrid& g = c.grid();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (st.R - jump_delta > g.r_min() && st.R + jump_delta < g.r_max()) {
        const PressureDecomposition dec = decompose(c, params);
        const JumpMeasurement m = jump(dec, st.R, jump_delta, t);
        row.jump_total = m.value;
        row.jump_p1 = m.p1;
        row.jump_p2 = m.p2;
        row.jump_p3 = m.p3;
    } else {
        row.jump_total = row.jump_p1 = row.jump_p2 = row.jump_p3 = nan;
    }

    const Field oracle = transport_solution_field(g, t, params, prof);
    const DeviationNorms dev = deviation(c, oracle, params);
    row.d_eps_l2 = dev.l2;
    row.d_eps_h1w = dev.h1_weighted;
    return row;
}

}  // namespace

RunReport run_single(const ExperimentConfig& cfg) {
    return run_single(cfg, cfg.params.eps, cfg.params.alpha);
}

RunReport run_single(const ExperimentConfig& cfg, double eps, double alpha) {
    RunReport report;
    report.eps = eps;
    report.alpha = alpha;
    const auto t0 = std::chrono::steady_clock::now();
    std::string stage = "setup";
    try {
        const ModelParams params = params_for(cfg, eps, alpha);
        params.validate();
        const Potential pot;
        const Profile prof(cfg.profile_delta, pot, cfg.profile_tabulation_panels);
        const RadialGrid grid = make_grid(1.0, params.M, cfg.cells_for(eps), params.n_dim);

        StepConfig step_cfg;
        step_cfg.dt = cfg.dt_for(eps, alpha);
        step_cfg.cfl_safety = cfg.cfl_safety;
        step_cfg.stabilization = cfg.stabilization;
        step_cfg.max_abs_c = cfg.max_abs_c;

        // Trapezoid-in-time accumulators for the run-level integrals.
        double int_grad = 0.0, int_disc = 0.0;
        double q_grad_prev = 0.0, q_disc_prev = 0.0;
        bool have_prev = false;
        long steps = 0;
        auto q_grad = [&](const SolverState& s) {
            const Field oracle = transport_solution_field(s.c.grid(), s.t, s.params, prof);
            return deviation(s.c, oracle, s.params).h1_weighted;
        };
        StepObserver observer = [&](const SolverState& before, const SolverState& after,
                                    double dt) {
            if (!have_prev) {
                q_grad_prev = q_grad(before);
                q_disc_prev = discrepancy_positive_part(before.c, before.params, pot);
                have_prev = true;
            }
            const double qg = q_grad(after);
            const double qd = discrepancy_positive_part(after.c, after.params, pot);
            int_grad += 0.5 * dt * (q_grad_prev + qg);
            int_disc += 0.5 * dt * (q_disc_prev + qd);
            q_grad_prev = qg;
            q_disc_prev = qd;
            ++steps;
        };

        stage = "simulate";
        std::vector<double> probes = cfg.probe_times;
        if (probes.empty()) probes = {cfg.t_end};
        const std::vector<SolverState> traj =
            simulate(params, prof, grid, step_cfg, cfg.t_end, probes, pot, observer);

        stage = "diagnostics";
        for (const SolverState& s : traj) {
            report.rows.push_back(
                make_probe_row(s.t, s.c, params, prof, pot, cfg.jump_probe_delta));
            DiagnosticsRecord rec = diagnostics_record(s.t, s.c, params, pot);
            // standard test function 0: smooth bump of half-width 1/2 at R(t)
            const InterfaceState st = interface_state(s.t, params);
            Field phi(grid);
            for (std::size_t i = 0; i < grid.nodes(); ++i) {
                const double x = (grid.r(i) - st.R) / 0.5;
                const double q = 1.0 - x * x;
                phi[i] = q > 0.0 ? std::exp(-1.0 / q) : 0.0;
            }
            rec.discrepancy_pairing.emplace_back(0, discrepancy_pairing(s.c, phi, params, pot));
            report.diagnostics.push_back(std::move(rec));
            const ProbeRow& row = report.rows.back();
            JumpMeasurement m;
            m.t = s.t;
            m.R_probe = row.R_analytic;
            m.delta_probe = cfg.jump_probe_delta;
            m.value = row.jump_total;
            m.p1 = row.jump_p1;
            m.p2 = row.jump_p2;
            m.p3 = row.jump_p3;
            report.jumps.push_back(m);
        }
        report.time_integral_eps_grad_d_sq = int_grad;
        report.time_integral_disc_pos = int_disc;
        report.steps = steps;
    } catch (const std::exception& e) {
        report.ok = false;
        report.failure_stage = stage;
        report.failure_message = e.what();
    }
    report.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

namespace {

void summarize(const ExperimentConfig& cfg, const std::vector<double>& eps_list,
               double alpha, const std::vector<const RunReport*>& runs, SweepResult& out) {
    const Potential pot;
    const Profile prof(cfg.profile_delta, pot, cfg.profile_tabulation_panels);
    bool all_ok = true;
    for (const RunReport* r : runs) all_ok &= r->ok;

    for (double tp : cfg.probe_times) {
        SweepSummaryRow srow;
        srow.alpha = alpha;
        srow.t_probe = tp;
        const ModelParams base = params_for(cfg, eps_list.front(), alpha);
        srow.kappa_target = interface_state(tp, base).kappa;
        if (all_ok && eps_list.size() >= 3) {
            std::vector<JumpMeasurement> series;
            bool have_all = true;
            for (const RunReport* r : runs) {
                const JumpMeasurement* found = nullptr;
                for (const JumpMeasurement& m : r->jumps)
                    if (std::fabs(m.t - tp) <= 1e-9 * std::max(1.0, tp)) found = &m;
                if (found == nullptr || !std::isfinite(found->value)) {
                    have_all = false;
                    break;
                }
                series.push_back(*found);
            }
            if (have_all) {
                const JumpMeasurement ex = jump_extrapolate(series, eps_list);
                srow.jump_extrapolated = ex.value;
                srow.extrapolation_clean = ex.clean;
                const double yl = young_laplace_jump(tp, base, prof.sigma_profile());
                srow.jump_ratio_young_laplace = -ex.value / yl;
            }
        }
        if (all_ok && eps_list.size() >= 3) {
            std::vector<std::pair<double, double>> grad_pairs, disc_pairs;
            for (std::size_t i = 0; i < runs.size(); ++i) {
                grad_pairs.emplace_back(eps_list[i], runs[i]->time_integral_eps_grad_d_sq);
                disc_pairs.emplace_back(eps_list[i], runs[i]->time_integral_disc_pos);
            }
            try {
                srow.slope_eps_grad_d = scaling_fit(grad_pairs).slope;
                srow.slope_disc_pos = scaling_fit(disc_pairs).slope;
                srow.slopes_valid = true;
            } catch (const std::invalid_argument&) {
                srow.slopes_valid = false;
            }
        }
        out.summaries.push_back(srow);
    }
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
    if (cfg.sweep_eps.empty() || cfg.sweep_alpha.empty())
        throw std::invalid_argument("sweep axes empty: sweep.eps and sweep.alpha required");
    cfg.validate();

    struct Task {
        double alpha, eps;
    };
    std::vector<Task> tasks;
    for (double a : cfg.sweep_alpha)
        for (double e : cfg.sweep_eps) tasks.push_back({a, e});

    SweepResult result;
    result.runs.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    unsigned k = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    k = std::min<unsigned>(k, static_cast<unsigned>(tasks.size()));
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            result.runs[i] = run_single(cfg, tasks[i].eps, tasks[i].alpha);
        }
    };
    if (k <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t ai = 0; ai < cfg.sweep_alpha.size(); ++ai) {
        std::vector<const RunReport*> runs;
        for (std::size_t ei = 0; ei < cfg.sweep_eps.size(); ++ei)
            runs.push_back(&result.runs[ai * cfg.sweep_eps.size() + ei]);
        summarize(cfg, cfg.sweep_eps, cfg.sweep_alpha[ai], runs, result);
    }
    return result;
}

SweepResult run_jump_sweep(const ExperimentConfig& cfg) {
    if (cfg.sweep_eps.empty())
        throw std::invalid_argument("sweep axes empty: sweep.eps required for jump-sweep");
    cfg.validate();
    const Potential pot;
    const Profile prof(cfg.profile_delta, pot, cfg.profile_tabulation_panels);
    const double inf_alpha = ModelParams::alpha_infinity();

    SweepResult result;
    for (double eps : cfg.sweep_eps) {
        RunReport report;
        report.eps = eps;
        report.alpha = inf_alpha;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const ModelParams params = params_for(cfg, eps, inf_alpha);
            const RadialGrid grid = make_grid(1.0, params.M, cfg.cells_for(eps), params.n_dim);
            for (double tp : cfg.probe_times) {
                const Field c = transport_solution_field(grid, tp, params, prof);
                report.rows.push_back(
                    make_probe_row(tp, c, params, prof, pot, cfg.jump_probe_delta));
                const ProbeRow& row = report.rows.back();
                JumpMeasurement m;
                m.t = tp;
                m.R_probe = row.R_analytic;
                m.delta_probe = cfg.jump_probe_delta;
                m.value = row.jump_total;
                m.p1 = row.jump_p1;
                m.p2 = row.jump_p2;
                m.p3 = row.jump_p3;
                report.jumps.push_back(m);
            }
        } catch (const std::exception& e) {
            report.ok = false;
            report.failure_stage = "jump-sweep";
            report.failure_message = e.what();
        }
        report.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.runs.push_back(std::move(report));
    }

    std::vector<const RunReport*> run_ptrs;
    for (const RunReport& r : result.runs) run_ptrs.push_back(&r);
    summarize(cfg, cfg.sweep_eps, inf_alpha, run_ptrs, result);
    return result;
}

namespace {

const char* kRowHeader =
    "eps,alpha,t_probe,R_analytic,R_measured,jump_total,jump_p1,jump_p2,jump_p3,"
    "jump_young_laplace,kappa_target,energy,discrepancy_pos,bv_seminorm,mass,"
    "d_eps_l2,d_eps_h1w";

std::string row_to_csv(const ProbeRow& r) {
    std::string s;
    s += fmt17(r.eps);
    for (double v : {r.alpha, r.t_probe, r.R_analytic, r.R_measured, r.jump_total, r.jump_p1,
                     r.jump_p2, r.jump_p3, r.jump_young_laplace, r.kappa_target, r.energy,
                     r.discrepancy_pos, r.bv_seminorm, r.mass, r.d_eps_l2, r.d_eps_h1w}) {
        s += ',';
        s += fmt17(v);
    }
    return s;
}

json row_to_json(const ProbeRow& r) {
    return json{{"eps", r.eps},
                {"alpha", alpha_to_json(r.alpha)},
                {"t_probe", r.t_probe},
                {"R_analytic", r.R_analytic},
                {"R_measured", r.R_measured},
                {"jump_total", r.jump_total},
                {"jump_p1", r.jump_p1},
                {"jump_p2", r.jump_p2},
                {"jump_p3", r.jump_p3},
                {"jump_young_laplace", r.jump_young_laplace},
                {"kappa_target", r.kappa_target},
                {"energy", r.energy},
                {"discrepancy_pos", r.discrepancy_pos},
                {"bv_seminorm", r.bv_seminorm},
                {"mass", r.mass},
                {"d_eps_l2", r.d_eps_l2},
                {"d_eps_h1w", r.d_eps_h1w}};
}

double json_num(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "infinity" || s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        return std::stod(s);
    }
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

ProbeRow row_from_json(const json& j) {
    ProbeRow r;
    r.eps = json_num(j.at("eps"));
    r.alpha = json_num(j.at("alpha"));
    r.t_probe = json_num(j.at("t_probe"));
    r.R_analytic = json_num(j.at("R_analytic"));
    r.R_measured = json_num(j.at("R_measured"));
    r.jump_total = json_num(j.at("jump_total"));
    r.jump_p1 = json_num(j.at("jump_p1"));
    r.jump_p2 = json_num(j.at("jump_p2"));
    r.jump_p3 = json_num(j.at("jump_p3"));
    r.jump_young_laplace = json_num(j.at("jump_young_laplace"));
    r.kappa_target = json_num(j.at("kappa_target"));
    r.energy = json_num(j.at("energy"));
    r.discrepancy_pos = json_num(j.at("discrepancy_pos"));
    r.bv_seminorm = json_num(j.at("bv_seminorm"));
    r.mass = json_num(j.at("mass"));
    r.d_eps_l2 = json_num(j.at("d_eps_l2"));
    r.d_eps_h1w = json_num(j.at("d_eps_h1w"));
    return r;
}

const char* kSummaryHeader =
    "alpha,t_probe,jump_extrapolated,jump_ratio_young_laplace,kappa_target,"
    "extrapolation_clean,slope_eps_grad_d,slope_disc_pos,slopes_valid";

std::string summary_to_csv(const SweepSummaryRow& s) {
    std::string out = fmt17(s.alpha);
    out += ',' + fmt17(s.t_probe);
    out += ',' + fmt17(s.jump_extrapolated);
    out += ',' + fmt17(s.jump_ratio_young_laplace);
    out += ',' + fmt17(s.kappa_target);
    out += ',' + std::string(s.extrapolation_clean ? "1" : "0");
    out += ',' + fmt17(s.slope_eps_grad_d);
    out += ',' + fmt17(s.slope_disc_pos);
    out += ',' + std::string(s.slopes_valid ? "1" : "0");
    return out;
}

json summary_to_json(const SweepSummaryRow& s) {
    return json{{"alpha", alpha_to_json(s.alpha)},
                {"t_probe", s.t_probe},
                {"jump_extrapolated", s.jump_extrapolated},
                {"jump_ratio_young_laplace", s.jump_ratio_young_laplace},
                {"kappa_target", s.kappa_target},
                {"extrapolation_clean", s.extrapolation_clean},
                {"slope_eps_grad_d", s.slope_eps_grad_d},
                {"slope_disc_pos", s.slope_disc_pos},
                {"slopes_valid", s.slopes_valid}};
}

SweepSummaryRow summary_from_json(const json& j) {
    SweepSummaryRow s;
    s.alpha = json_num(j.at("alpha"));
    s.t_probe = json_num(j.at("t_probe"));
    s.jump_extrapolated = json_num(j.at("jump_extrapolated"));
    s.jump_ratio_young_laplace = json_num(j.at("jump_ratio_young_laplace"));
    s.kappa_target = json_num(j.at("kappa_target"));
    s.extrapolation_clean = j.at("extrapolation_clean").get<bool>();
    s.slope_eps_grad_d = json_num(j.at("slope_eps_grad_d"));
    s.slope_disc_pos = json_num(j.at("slope_disc_pos"));
    s.slopes_valid = j.at("slopes_valid").get<bool>();
    return s;
}

json run_meta_json(const RunReport& r) {
    return json{{"eps", r.eps},
                {"alpha", alpha_to_json(r.alpha)},
                {"ok", r.ok},
                {"failure_stage", r.failure_stage},
                {"failure_message", r.failure_message},
                {"time_integral_eps_grad_d_sq", r.time_integral_eps_grad_d_sq},
                {"time_integral_disc_pos", r.time_integral_disc_pos},
                {"wall_clock_s", r.wall_clock_s},
                {"steps", r.steps}};
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot write " + path);
    out << bytes;
}

std::string csv_for_rows(const std::vector<const ProbeRow*>& rows) {
    std::string csv = kRowHeader;
    csv += '\n';
    for (const ProbeRow* r : rows) {
        csv += row_to_csv(*r);
        csv += '\n';
    }
    return csv;
}

EmitResult emit_tables(const json& manifest_base, const std::vector<const ProbeRow*>& rows,
                       const std::vector<SweepSummaryRow>* summaries, const std::string& format,
                       const std::string& dir) {
    std::filesystem::create_directories(dir);
    EmitResult out;
    json manifest = manifest_base;
    manifest["scheme"] = kSchemeId;
    manifest["code_version"] = kCodeVersion;

    json jrows = json::array();
    for (const ProbeRow* r : rows) jrows.push_back(row_to_json(*r));
    manifest["rows"] = jrows;
    if (summaries != nullptr) {
        json jsum = json::array();
        for (const SweepSummaryRow& s : *summaries) jsum.push_back(summary_to_json(s));
        manifest["summaries"] = jsum;
    }

    json checksums = json::object();
    if (format == "csv") {
        const std::string csv = csv_for_rows(rows);
        const std::string csv_path = dir + "/" + (summaries ? "sweep.csv" : "run.csv");
        write_file(csv_path, csv);
        out.files.push_back(csv_path);
        char hex[32];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(csv)));
        checksums[std::filesystem::path(csv_path).filename().string()] = hex;
        if (summaries != nullptr) {
            std::string sum = kSummaryHeader;
            sum += '\n';
            for (const SweepSummaryRow& s : *summaries) {
                sum += summary_to_csv(s);
                sum += '\n';
            }
            const std::string sum_path = dir + "/summary.csv";
            write_file(sum_path, sum);
            out.files.push_back(sum_path);
            std::snprintf(hex, sizeof hex, "%016llx",
                          static_cast<unsigned long long>(fnv1a64(sum)));
            checksums["summary.csv"] = hex;
        }
    } else if (format != "json") {
        throw std::invalid_argument("emit: format must be csv or json");
    }
    manifest["checksums"] = checksums;

    const std::string man_path = dir + "/manifest.json";
    write_file(man_path, manifest.dump(2) + "\n");
    out.files.push_back(man_path);
    return out;
}

}  // namespace

EmitResult emit_single(const RunReport& report, const ExperimentConfig& cfg,
                       const std::string& format, const std::string& dir) {
    json manifest;
    manifest["kind"] = "single";
    manifest["config"] = json::parse(config_to_json_text(cfg));
    manifest["run"] = run_meta_json(report);
    std::vector<const ProbeRow*> rows;
    for (const ProbeRow& r : report.rows) rows.push_back(&r);
    return emit_tables(manifest, rows, nullptr, format, dir);
}

EmitResult emit_sweep(const SweepResult& sweep, const ExperimentConfig& cfg,
                      const std::string& format, const std::string& dir) {
    json manifest;
    manifest["kind"] = "sweep";
    manifest["config"] = json::parse(config_to_json_text(cfg));
    json runs = json::array();
    for (const RunReport& r : sweep.runs) runs.push_back(run_meta_json(r));
    manifest["runs"] = runs;
    std::vector<const ProbeRow*> rows;
    for (const RunReport& r : sweep.runs)
        for (const ProbeRow& row : r.rows) rows.push_back(&row);
    return emit_tables(manifest, rows, &sweep.summaries, format, dir);
}

EmitResult reemit_from_manifest(const std::string& manifest_path, const std::string& dir) {
    std::ifstream in(manifest_path);
    if (!in) throw std::invalid_argument("report: cannot open " + manifest_path);
    json manifest;
    in >> manifest;
    std::vector<ProbeRow> rows;
    for (const json& j : manifest.at("rows")) rows.push_back(row_from_json(j));
    std::vector<SweepSummaryRow> summaries;
    if (manifest.contains("summaries"))
        for (const json& j : manifest["summaries"]) summaries.push_back(summary_from_json(j));

    std::filesystem::create_directories(dir);
    EmitResult out;
    std::vector<const ProbeRow*> row_ptrs;
    for (const ProbeRow& r : rows) row_ptrs.push_back(&r);
    const std::string csv = csv_for_rows(row_ptrs);
    const bool is_sweep = manifest.at("kind") != "single";
    const std::string csv_path = dir + "/" + (is_sweep ? "sweep.csv" : "run.csv");
    write_file(csv_path, csv);
    out.files.push_back(csv_path);
    if (is_sweep && !summaries.empty()) {
        std::string sum = kSummaryHeader;
        sum += '\n';
        for (const SweepSummaryRow& s : summaries) {
            sum += summary_to_csv(s);
            sum += '\n';
        }
        write_file(dir + "/summary.csv", sum);
        out.files.push_back(dir + "/summary.csv");
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace radch
