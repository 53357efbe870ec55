// radch_cli.cpp
// Command line front end. Subcommands:
//   simulate            one (eps, alpha) run
//   sweep               grid of runs over sweep.eps x sweep.alpha
//   validate-transport  zero-mobility run compared against the transport solution
//   jump-sweep          pressure-jump pipeline on analytic profiles (no solver)
//   report              re-emit CSV tables from a stored manifest
//
// Exit codes: 0 success, 1 validation failure, 2 runtime abort.

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "radch/analytic.hpp"
#include "radch/harness.hpp"

namespace {

int report_runs(const std::vector<radch::RunReport>& runs) {
    int failures = 0;
    for (const radch::RunReport& r : runs) {
        if (r.ok) {
            std::printf("run eps=%g alpha=%g ok (%ld steps, %.2fs)\n", r.eps, r.alpha, r.steps,
                        r.wall_clock_s);
        } else {
            std::printf("run eps=%g alpha=%g FAILED at %s: %s\n", r.eps, r.alpha,
                        r.failure_stage.c_str(), r.failure_message.c_str());
            ++failures;
        }
    }
    return failures;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"radial two-phase Cahn-Hilliard laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format = "csv";
    unsigned workers = 0;
    std::string manifest_path;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides config)");
        cmd->add_option("--workers", workers, "worker threads (0 = hardware)");
        cmd->add_option("--format", format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* cmd_sim = app.add_subcommand("simulate", "single run");
    add_common(cmd_sim, true);
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "grid of runs");
    add_common(cmd_sweep, true);
    CLI::App* cmd_vt = app.add_subcommand("validate-transport",
                                          "zero-mobility run vs the characteristics solution");
    add_common(cmd_vt, true);
    CLI::App* cmd_js = app.add_subcommand("jump-sweep",
                                          "pressure jumps on analytic profiles (no solver)");
    add_common(cmd_js, true);
    CLI::App* cmd_report = app.add_subcommand("report", "re-emit tables from a manifest");
    cmd_report->add_option("--manifest", manifest_path, "stored manifest.json")->required();
    cmd_report->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_report->parsed()) {
            const radch::EmitResult files = radch::reemit_from_manifest(manifest_path, out_dir);
            for (const std::string& f : files.files) std::printf("wrote %s\n", f.c_str());
            return 0;
        }

        radch::ExperimentConfig cfg;
        try {
            cfg = radch::load_config(config_path);
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            if (workers != 0) cfg.workers = workers;
        } catch (const std::invalid_argument& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 1;
        }

        if (cmd_sim->parsed()) {
            const radch::RunReport report = radch::run_single(cfg);
            radch::emit_single(report, cfg, format, cfg.output_dir);
            const int failures = report_runs({report});
            return failures == 0 ? 0 : 2;
        }

        if (cmd_sweep->parsed()) {
            const radch::SweepResult sweep = radch::run_sweep(cfg);
            radch::emit_sweep(sweep, cfg, format, cfg.output_dir);
            const int failures = report_runs(sweep.runs);
            return failures == 0 ? 0 : 2;
        }

        if (cmd_vt->parsed()) {
            radch::ExperimentConfig vt = cfg;
            vt.params.alpha = radch::ModelParams::alpha_infinity();
            vt.sweep_eps.clear();
            vt.sweep_alpha.clear();
            const radch::RunReport report = radch::run_single(vt);
            radch::emit_single(report, vt, format, vt.output_dir);
            if (!report.ok) {
                std::printf("run FAILED at %s: %s\n", report.failure_stage.c_str(),
                            report.failure_message.c_str());
                return 2;
            }
            for (const radch::ProbeRow& row : report.rows)
                std::printf("t=%-8g L2(c - transport)=%.6e  eps*||d_r d||^2=%.6e  "
                            "R_measured=%.6f R_analytic=%.6f\n",
                            row.t_probe, row.d_eps_l2, row.d_eps_h1w, row.R_measured,
                            row.R_analytic);
            return 0;
        }

        if (cmd_js->parsed()) {
            const radch::SweepResult sweep = radch::run_jump_sweep(cfg);
            radch::emit_sweep(sweep, cfg, format, cfg.output_dir);
            const int failures = report_runs(sweep.runs);
            for (const radch::SweepSummaryRow& s : sweep.summaries)
                if (std::isfinite(s.jump_ratio_young_laplace) && s.jump_ratio_young_laplace != 0.0)
                    std::printf("t=%-8g extrapolated jump ratio = %.6f (kappa law: %.6f)%s\n",
                                s.t_probe, s.jump_ratio_young_laplace, s.kappa_target,
                                s.extrapolation_clean ? "" : " [non-monotone series]");
            return failures == 0 ? 0 : 2;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime abort: %s\n", e.what());
        return 2;
    }
    return 0;
}
