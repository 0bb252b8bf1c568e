// End-to-end snapshot execution and the Monte Carlo sweep engine.
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "radar.hpp"
#include "scenario.hpp"

namespace sensejam {

struct SnapshotOptions {
    bool noise = true;
    // Eve clock offset draw. When unset, drawn uniformly over
    // ±min(24, q_cp/2) samples; pin it for reproducible single scenes.
    std::optional<double> alignment_offset_s;
    bool snap_delays = true;  // round path delays to the sample grid
    std::optional<RdmWindow> window;
};

struct SnapshotResult {
    Rdm rdm;
    std::vector<Detection> detections;
    SyncDecision sync;
    std::vector<TruthEntry> truths;
    AssociationResult association;
    AlignmentCase alignment = AlignmentCase::case3;
    bool jammed = false;
    bool jam_infeasible = false;
    std::string failure_reason;
    double eta_applied_hz = 0.0;       // CFO compensation actually applied
    double alignment_offset_s = 0.0;   // Eve clock offset used
    double eve_arrival_s = 0.0;
    double eve_tx_start_s = 0.0;       // jammer pulse-0 emission time
    Grid ctf;                          // estimated CTF (kept for oracle checks)
};

/// One full sensing measurement instance: propagate, synchronize, demodulate,
/// estimate the CTF, form the RDM, detect, and score against the model truth.
/// An infeasible jam strategy is recorded, not thrown; the chain then runs
/// without the jammer.
SnapshotResult run_snapshot(const Scenario& scenario, uint64_t seed,
                            const SnapshotOptions& options = {});

struct CfoRegions {
    double low_max_ppm = 1.0;
    double med_max_ppm = 4.0;
    double high_max_ppm = 7.0;  // kept inside the lag-T_o estimator range
};

struct SweepOptions {
    int trials = 500;
    uint64_t base_seed = 1;
    int threads = 0;  // 0: hardware concurrency
    bool export_trials = false;

    // Monte Carlo waveform: the PRI is shortened to this multiple of T_o so
    // thousands of chains stay tractable; single snapshots keep the scenario
    // PRI.
    double sweep_pri_symbols = 8.0;

    std::vector<double> cfo_ppm_values = {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0};
    std::string spacing = "78k";  // "312k" or "78k" subcarrier spacing
    std::vector<double> jsr_values_db = {-5, -2, 0, 2, 4, 6, 8, 10, 12, 15};
    CfoRegions regions;
    std::vector<int> overcrowd_targets = {1, 2, 3, 5};
    std::vector<double> overcrowd_pfa = {1e-4, 1e-6, 1e-8};
    double overcrowd_jsr_db = 10.0;

    double speed_min_mps = 1.0;  // real-target speed randomization
    double speed_max_mps = 5.0;
};

struct TrialRecord {
    int real_total = 0, real_detected = 0;
    int artificial_total = 0, artificial_detected = 0;
    int combined_total = 0, combined_detected = 0;
    int detections = 0;
    bool infeasible = false;
};

struct SweepPoint {
    double x = 0.0;
    std::string series;
    int trials = 0;
    long real_total = 0, real_detected = 0;
    long artificial_total = 0, artificial_detected = 0;
    long detections_sum = 0;
    long infeasible = 0;
    std::vector<TrialRecord> trial_records;  // kept when export_trials is set

    double pd_real() const { return real_total ? double(real_detected) / real_total : 0.0; }
    double pd_artificial() const {
        return artificial_total ? double(artificial_detected) / artificial_total : 0.0;
    }
    double mdr_real() const { return real_total ? 1.0 - pd_real() : 0.0; }
    double dr_artificial() const { return pd_artificial(); }
    double mean_detection_count() const { return trials ? double(detections_sum) / trials : 0.0; }
};

struct SweepResult {
    std::string kind;
    std::vector<SweepPoint> points;
};

/// Wilson 95% score interval for k successes out of n.
struct Interval {
    double lo = 0.0, hi = 0.0;
};
Interval wilson_interval(long successes, long n);

/// Detection probability of real and artificial targets versus the CFO
/// difference, one spacing variant per call; forced synchronization at 10 dB
/// JSR, real-target speed randomized per trial.
SweepResult sweep_pd_vs_cfo(const Scenario& base, const SweepOptions& opt);

/// PD versus JSR for the three CFO-difference regions.
SweepResult sweep_pd_vs_jsr(const Scenario& base, const SweepOptions& opt);

/// Missed-detection rate of real targets against detection rate of artificial
/// targets, same engine as the JSR sweep, exported as (MDR, DR) pairs.
SweepResult sweep_mdr_dr(const Scenario& base, const SweepOptions& opt);

/// Detected-target count under overcrowding plus preceding jamming, swept
/// over the number of jammer-side scatterers and the CFAR false-alarm rate.
SweepResult sweep_overcrowding(const Scenario& base, const SweepOptions& opt);

/// metrics.jsonl (one record per sweep point), a plot-ready CSV
/// (x, series, value, ci_low, ci_high) and, when requested, per-trial
/// outcomes. Reruns with identical config and seed are byte-identical.
void export_sweep(const SweepResult& result, const std::filesystem::path& out_dir,
                  bool export_trials = false);

/// rdm.f32 (+ sidecar) and snapshot.json with sync, detections, truth and
/// association summaries.
void export_snapshot(const SnapshotResult& result, const std::filesystem::path& out_dir);

}  // namespace sensejam
