// C ABI over the simulation core: opaque handles, per-thread error state.
#include "sensejam/sensejam.h"

#include <cstring>
#include <string>

#include "../core/harness.hpp"
#include "../core/scenario.hpp"

using namespace sensejam;

namespace {

thread_local std::string g_error;
thread_local sj_status g_status = SJ_OK;

void set_error(sj_status status, const std::string& message) {
    g_status = status;
    g_error = message;
}

template <typename F>
auto wrap(F&& fn) -> decltype(fn()) {
    try {
        g_status = SJ_OK;
        g_error.clear();
        return fn();
    } catch (const ConfigError& e) {
        set_error(SJ_ERR_CONFIG, e.what());
    } catch (const InfeasibleError& e) {
        set_error(SJ_ERR_INFEASIBLE, e.what());
    } catch (const IoError& e) {
        set_error(SJ_ERR_IO, e.what());
    } catch (const std::exception& e) {
        set_error(SJ_ERROR, e.what());
    }
    return decltype(fn()){};
}

}  // namespace

struct sj_scenario {
    Scenario scenario;
};
struct sj_snapshot {
    SnapshotResult result;
};
struct sj_sweep {
    SweepResult result;
    bool export_trials = false;
};

extern "C" {

const char* sj_version(void) { return "0.1.0"; }

const char* sj_last_error(void) { return g_error.c_str(); }

sj_status sj_last_status(void) { return g_status; }

sj_scenario* sj_scenario_load_file(const char* path) {
    if (!path) {
        set_error(SJ_ERR_CONFIG, "null path");
        return nullptr;
    }
    return wrap([&]() { return new sj_scenario{load_scenario(path)}; });
}

sj_scenario* sj_scenario_parse(const char* json_text) {
    if (!json_text) {
        set_error(SJ_ERR_CONFIG, "null scenario text");
        return nullptr;
    }
    return wrap([&]() { return new sj_scenario{parse_scenario(json_text)}; });
}

sj_scenario* sj_scenario_default(void) {
    return wrap([]() { return new sj_scenario{default_scenario()}; });
}

void sj_scenario_free(sj_scenario* scenario) { delete scenario; }

sj_snapshot* sj_snapshot_run(const sj_scenario* scenario, uint64_t seed) {
    if (!scenario) {
        set_error(SJ_ERR_CONFIG, "null scenario");
        return nullptr;
    }
    return wrap([&]() { return new sj_snapshot{run_snapshot(scenario->scenario, seed)}; });
}

sj_status sj_snapshot_export(const sj_snapshot* snapshot, const char* out_dir) {
    if (!snapshot || !out_dir) {
        set_error(SJ_ERR_CONFIG, "null argument");
        return g_status;
    }
    wrap([&]() {
        export_snapshot(snapshot->result, out_dir);
        return 0;
    });
    return g_status;
}

int sj_snapshot_detection_count(const sj_snapshot* snapshot) {
    return snapshot ? int(snapshot->result.detections.size()) : -1;
}

const char* sj_snapshot_locked_to(const sj_snapshot* snapshot) {
    static thread_local std::string label;
    if (!snapshot) return "";
    label = to_string(snapshot->result.sync.locked_to);
    return label.c_str();
}

double sj_snapshot_cfo_estimate_hz(const sj_snapshot* snapshot) {
    return snapshot ? snapshot->result.sync.cfo_estimate : 0.0;
}

int sj_snapshot_jam_infeasible(const sj_snapshot* snapshot) {
    return snapshot && snapshot->result.jam_infeasible ? 1 : 0;
}

void sj_snapshot_rdm_dims(const sj_snapshot* snapshot, int* q, int* m) {
    if (!snapshot) return;
    if (q) *q = snapshot->result.rdm.values.q;
    if (m) *m = snapshot->result.rdm.values.m;
}

void sj_snapshot_free(sj_snapshot* snapshot) { delete snapshot; }

sj_sweep* sj_sweep_run(const sj_scenario* scenario, sj_sweep_kind kind,
                       const sj_sweep_options* options) {
    if (!scenario) {
        set_error(SJ_ERR_CONFIG, "null scenario");
        return nullptr;
    }
    return wrap([&]() {
        SweepOptions opt;
        if (options) {
            if (options->trials > 0) opt.trials = options->trials;
            opt.base_seed = options->base_seed;
            if (options->threads > 0) opt.threads = options->threads;
            opt.export_trials = options->export_trials != 0;
            if (options->spacing) opt.spacing = options->spacing;
        }
        SweepResult result;
        switch (kind) {
            case SJ_SWEEP_CFO: result = sweep_pd_vs_cfo(scenario->scenario, opt); break;
            case SJ_SWEEP_JSR: result = sweep_pd_vs_jsr(scenario->scenario, opt); break;
            case SJ_SWEEP_MDR_DR: result = sweep_mdr_dr(scenario->scenario, opt); break;
            case SJ_SWEEP_OVERCROWD: result = sweep_overcrowding(scenario->scenario, opt); break;
            default: throw ConfigError("unknown sweep kind");
        }
        return new sj_sweep{std::move(result), options && options->export_trials != 0};
    });
}

sj_status sj_sweep_export(const sj_sweep* sweep, const char* out_dir) {
    if (!sweep || !out_dir) {
        set_error(SJ_ERR_CONFIG, "null argument");
        return g_status;
    }
    wrap([&]() {
        export_sweep(sweep->result, out_dir, sweep->export_trials);
        return 0;
    });
    return g_status;
}

int sj_sweep_point_count(const sj_sweep* sweep) {
    return sweep ? int(sweep->result.points.size()) : -1;
}

sj_status sj_sweep_point(const sj_sweep* sweep, int index, sj_point_metrics* out) {
    if (!sweep || !out || index < 0 || index >= int(sweep->result.points.size())) {
        set_error(SJ_ERR_CONFIG, "bad sweep point request");
        return g_status;
    }
    const SweepPoint& p = sweep->result.points[size_t(index)];
    std::memset(out, 0, sizeof(*out));
    out->x = p.x;
    std::strncpy(out->series, p.series.c_str(), sizeof(out->series) - 1);
    out->trials = p.trials;
    out->pd_real = p.pd_real();
    const Interval ri = wilson_interval(p.real_detected, p.real_total);
    out->pd_real_lo = ri.lo;
    out->pd_real_hi = ri.hi;
    out->pd_artificial = p.pd_artificial();
    const Interval ai = wilson_interval(p.artificial_detected, p.artificial_total);
    out->pd_artificial_lo = ai.lo;
    out->pd_artificial_hi = ai.hi;
    out->mdr_real = p.mdr_real();
    out->dr_artificial = p.dr_artificial();
    out->mean_detection_count = p.mean_detection_count();
    g_status = SJ_OK;
    return SJ_OK;
}

void sj_sweep_free(sj_sweep* sweep) { delete sweep; }

}  // extern "C"
