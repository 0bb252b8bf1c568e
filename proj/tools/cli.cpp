// Command-line front end. Talks to the simulator exclusively through the
// public C interface.
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "sensejam/sensejam.h"

namespace {

int exit_code_for(sj_status status) {
    switch (status) {
        case SJ_OK: return 0;
        case SJ_ERR_CONFIG: return 2;
        case SJ_ERR_INFEASIBLE: return 3;
        default: return 1;
    }
}

int fail(const char* what) {
    std::fprintf(stderr, "%s: %s\n", what, sj_last_error());
    return exit_code_for(sj_last_status() == SJ_OK ? SJ_ERROR : sj_last_status());
}

struct CommonArgs {
    std::string scenario;
    std::string out = "out";
    uint64_t seed = 1;
    int trials = 500;
    int threads = 0;
    bool export_trials = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_trials) {
    cmd->add_option("--scenario", args.scenario, "scenario JSON file (defaults to the stock scene)");
    cmd->add_option("--out", args.out, "output directory")->capture_default_str();
    cmd->add_option("--seed", args.seed, "base seed")->capture_default_str();
    if (with_trials) {
        cmd->add_option("--trials", args.trials, "Monte Carlo trials per sweep point")
            ->capture_default_str();
        cmd->add_option("--threads", args.threads, "worker threads (0: all cores)")
            ->capture_default_str();
        cmd->add_flag("--export-trials", args.export_trials, "also write per-trial outcomes");
    }
}

sj_scenario* load(const CommonArgs& args) {
    return args.scenario.empty() ? sj_scenario_default() : sj_scenario_load_file(args.scenario.c_str());
}

int run_snapshot_cmd(const CommonArgs& args) {
    sj_scenario* sc = load(args);
    if (!sc) return fail("scenario");
    sj_snapshot* snap = sj_snapshot_run(sc, args.seed);
    sj_scenario_free(sc);
    if (!snap) return fail("snapshot");
    const sj_status st = sj_snapshot_export(snap, args.out.c_str());
    if (st != SJ_OK) {
        sj_snapshot_free(snap);
        return fail("export");
    }
    int q = 0, m = 0;
    sj_snapshot_rdm_dims(snap, &q, &m);
    std::printf("snapshot: locked_to=%s detections=%d rdm=%dx%d infeasible=%d -> %s\n",
                sj_snapshot_locked_to(snap), sj_snapshot_detection_count(snap), q, m,
                sj_snapshot_jam_infeasible(snap), args.out.c_str());
    const bool infeasible = sj_snapshot_jam_infeasible(snap) != 0;
    sj_snapshot_free(snap);
    return infeasible ? 3 : 0;
}

int run_sweep_cmd(const CommonArgs& args, sj_sweep_kind kind, const std::string& spacing) {
    sj_scenario* sc = load(args);
    if (!sc) return fail("scenario");
    sj_sweep_options opt{};
    opt.trials = args.trials;
    opt.base_seed = args.seed;
    opt.threads = args.threads;
    opt.export_trials = args.export_trials ? 1 : 0;
    opt.spacing = spacing.empty() ? nullptr : spacing.c_str();
    sj_sweep* sweep = sj_sweep_run(sc, kind, &opt);
    sj_scenario_free(sc);
    if (!sweep) return fail("sweep");
    const sj_status st = sj_sweep_export(sweep, args.out.c_str());
    if (st != SJ_OK) {
        sj_sweep_free(sweep);
        return fail("export");
    }
    const int n = sj_sweep_point_count(sweep);
    for (int i = 0; i < n; ++i) {
        sj_point_metrics pm{};
        if (sj_sweep_point(sweep, i, &pm) != SJ_OK) continue;
        std::printf("%-12s x=%-8g pd_real=%.3f [%.3f,%.3f] pd_art=%.3f [%.3f,%.3f] count=%.2f\n",
                    pm.series, pm.x, pm.pd_real, pm.pd_real_lo, pm.pd_real_hi, pm.pd_artificial,
                    pm.pd_artificial_lo, pm.pd_artificial_hi, pm.mean_detection_count);
    }
    sj_sweep_free(sweep);
    std::printf("wrote %s\n", args.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sensejam: OFDM WLAN-sensing spoofing and jamming simulator"};
    app.require_subcommand(1);

    CommonArgs snap_args, cfo_args, jsr_args, mdr_args, over_args;
    std::string spacing = "78k";

    auto* snap = app.add_subcommand("snapshot", "run one sensing measurement instance");
    add_common(snap, snap_args, false);

    auto* cfo = app.add_subcommand("sweep-cfo", "detection probability vs CFO difference");
    add_common(cfo, cfo_args, true);
    cfo->add_option("--spacing", spacing, "subcarrier spacing variant: 312k or 78k")
        ->check(CLI::IsMember({"312k", "78k"}))
        ->capture_default_str();

    auto* jsr = app.add_subcommand("sweep-jsr", "detection probability vs jammer-to-signal ratio");
    add_common(jsr, jsr_args, true);

    auto* mdr = app.add_subcommand("sweep-mdr-dr", "missed-detection vs detection-rate pairs");
    add_common(mdr, mdr_args, true);

    auto* over = app.add_subcommand("sweep-overcrowd", "detected count vs scatterer count and PFA");
    add_common(over, over_args, true);

    CLI11_PARSE(app, argc, argv);

    if (snap->parsed()) return run_snapshot_cmd(snap_args);
    if (cfo->parsed()) return run_sweep_cmd(cfo_args, SJ_SWEEP_CFO, spacing);
    if (jsr->parsed()) return run_sweep_cmd(jsr_args, SJ_SWEEP_JSR, "");
    if (mdr->parsed()) return run_sweep_cmd(mdr_args, SJ_SWEEP_MDR_DR, "");
    if (over->parsed()) return run_sweep_cmd(over_args, SJ_SWEEP_OVERCROWD, "");
    return 0;
}
