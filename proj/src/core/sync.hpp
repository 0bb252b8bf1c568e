// Stage-1 receiver processing: lag autocorrelation, peak selection under the
// 3 dB rule, CFO estimation and compensation, alignment-case classification.
#pragma once

#include <optional>
#include <string>

#include "config.hpp"
#include "waveform.hpp"

namespace sensejam {

enum class LockedTo { alice, eve, ambiguous, unknown };
enum class AlignmentCase { case1, case2a, case2b, case3 };

std::string to_string(LockedTo v);
std::string to_string(AlignmentCase v);

struct CorrelatorOutput {
    std::vector<cplx> values;  // Ξ[k], one per candidate start sample
    int64_t base_index = 0;    // absolute sample index of values[0]
    int64_t lag_samples = 0;
    int64_t window_samples = 0;
    double lag_seconds = 0.0;

    cplx at_abs(int64_t abs_k) const { return values[size_t(abs_k - base_index)]; }
};

struct SyncDecision {
    int64_t sync_sample = 0;
    double cfo_estimate = 0.0;  // Hz
    LockedTo locked_to = LockedTo::unknown;
    AlignmentCase alignment_case = AlignmentCase::case2a;
};

/// Ξ[k] = Σ_{n=0}^{Q+Q_cp-1} r[k+n] conj(r[k+n+lag]). The lag is T_o·B by
/// default (full standards-style estimator range) or T_s·B for the literal
/// pulse-to-pulse correlation. Sliding sums keep this O(N).
CorrelatorOutput lag_autocorr(const OfdmConfig& cfg, const BasebandSignal& signal,
                              int64_t lag_samples);

/// Restrict the correlator scan to [first, last] absolute start samples
/// (receiver timing window). Bounds are clipped to the available span.
CorrelatorOutput lag_autocorr_window(const OfdmConfig& cfg, const BasebandSignal& signal,
                                     int64_t lag_samples, int64_t first, int64_t last);

/// Global-maximum pick with the 3 dB ambiguity rule over the two largest
/// well-separated peaks; ambiguous ties go to the earlier index.
SyncDecision select_sync_peak(const CorrelatorOutput& corr, double threshold_db = 3.0);

/// Harness variant: one candidate per transmitter, located by its expected
/// arrival window; the labels are scenario ground truth used for scoring.
struct SyncCandidate {
    LockedTo label = LockedTo::unknown;
    int64_t window_first = 0;
    int64_t window_last = 0;
};
SyncDecision select_sync_peak_labeled(const CorrelatorOutput& corr,
                                      const std::vector<SyncCandidate>& candidates,
                                      double threshold_db = 3.0);

/// η̂ = -∠Ξ[sync] / (2π lag), mapped to the principal interval ±1/(2 lag).
double estimate_cfo(const CorrelatorOutput& corr, int64_t sync_sample, double lag_seconds);

/// Multiply sample n (absolute index) by e^{-j2π η̂ n T}.
void compensate_cfo(BasebandSignal& signal, double eta_hat);

/// Partition by d = eve_arrival - alice_arrival: case1 for d <= -T_o (no
/// overlap, jammer first), case2a for d in (-T_o, 0], case2b for d in
/// (0, T_o], case3 beyond (receiver samples only the legitimate signal).
AlignmentCase classify_alignment(double alice_arrival_s, double eve_arrival_s, const OfdmConfig& cfg);

}  // namespace sensejam
