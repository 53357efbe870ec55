// harness.hpp
// Experiment orchestration: config ingestion and validation, single runs,
// (eps, alpha) sweeps over a worker pool, and CSV/JSON emission.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radch/diagnostics.hpp"
#include "radch/grid.hpp"
#include "radch/physics.hpp"
#include "radch/pressure.hpp"
#include "radch/solver.hpp"

namespace radch {

struct ExperimentConfig {
    ModelParams params;
    double profile_delta = 0.5;
    std::size_t profile_tabulation_panels = 4096;
    std::size_t cells = 0;     // 0: derive from eps_per_h
    double eps_per_h = 10.0;   // resolution target when cells == 0
    double dt = 0.0;           // 0: derive from the CFL bound (needs a > 0)
    double cfl_safety = 0.4;
    double stabilization = -1.0;
    double max_abs_c = 1.5;
    double t_end = 0.0;
    std::vector<double> probe_times;
    std::vector<double> sweep_eps;
    std::vector<double> sweep_alpha;
    double jump_probe_delta = 0.25;
    std::string output_dir = "out";
    unsigned workers = 0;  // 0: hardware concurrency

    std::size_t cells_for(double eps) const;
    double dt_for(double eps, double alpha) const;

    void validate() const;  // throws std::invalid_argument naming the rule
};

// One probe-time row of a run (the CSV payload).
struct ProbeRow {
    double eps = 0.0;
    double alpha = 0.0;
    double t_probe = 0.0;
    double R_analytic = 0.0;
    double R_measured = 0.0;
    double jump_total = 0.0;
    double jump_p1 = 0.0;
    double jump_p2 = 0.0;
    double jump_p3 = 0.0;
    double jump_young_laplace = 0.0;
    double kappa_target = 0.0;
    double energy = 0.0;
    double discrepancy_pos = 0.0;
    double bv_seminorm = 0.0;
    double mass = 0.0;
    double d_eps_l2 = 0.0;
    double d_eps_h1w = 0.0;
};

struct RunReport {
    double eps = 0.0;
    double alpha = 0.0;
    bool ok = true;
    std::string failure_stage;  // empty when ok
    std::string failure_message;
    std::vector<ProbeRow> rows;
    std::vector<DiagnosticsRecord> diagnostics;
    std::vector<JumpMeasurement> jumps;
    double time_integral_eps_grad_d_sq = 0.0;  // \int_0^T eps ||d_r d||^2 dt
    double time_integral_disc_pos = 0.0;       // \int_0^T \int (xi)^+ dt
    double wall_clock_s = 0.0;
    long steps = 0;
};

struct SweepSummaryRow {
    double alpha = 0.0;
    double t_probe = 0.0;
    double jump_extrapolated = 0.0;  // outward probe value after extrapolation
    double jump_ratio_young_laplace = 0.0;  // inward-oriented ratio (-jump)/YL
    double kappa_target = 0.0;
    bool extrapolation_clean = true;
    double slope_eps_grad_d = 0.0;  // log-log slope of the deviation integral
    double slope_disc_pos = 0.0;    // log-log slope of the discrepancy integral
    bool slopes_valid = false;
};

struct SweepResult {
    std::vector<RunReport> runs;  // row-major over (alpha, eps)
    std::vector<SweepSummaryRow> summaries;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& cfg);

RunReport run_single(const ExperimentConfig& cfg);
RunReport run_single(const ExperimentConfig& cfg, double eps, double alpha);

SweepResult run_sweep(const ExperimentConfig& cfg);

// Pressure-jump pipeline on analytic transport profiles, no time stepping.
SweepResult run_jump_sweep(const ExperimentConfig& cfg);

struct EmitResult {
    std::vector<std::string> files;
};

// format: "csv" writes tables plus a JSON manifest; "json" the manifest only.
EmitResult emit_single(const RunReport& report, const ExperimentConfig& cfg,
                       const std::string& format, const std::string& dir);
EmitResult emit_sweep(const SweepResult& sweep, const ExperimentConfig& cfg,
                      const std::string& format, const std::string& dir);

// Re-emit CSV tables from a stored manifest.
EmitResult reemit_from_manifest(const std::string& manifest_path, const std::string& dir);

std::uint64_t fnv1a64(const std::string& bytes);

extern const char* const kSchemeId;
extern const char* const kCodeVersion;

}  // namespace radch
