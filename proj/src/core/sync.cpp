#include "sync.hpp"

#include <algorithm>
#include <cmath>

namespace sensejam {

std::string to_string(LockedTo v) {
    switch (v) {
        case LockedTo::alice: return "alice";
        case LockedTo::eve: return "eve";
        case LockedTo::ambiguous: return "ambiguous";
        default: return "unknown";
    }
}

std::string to_string(AlignmentCase v) {
    switch (v) {
        case AlignmentCase::case1: return "case1";
        case AlignmentCase::case2a: return "case2a";
        case AlignmentCase::case2b: return "case2b";
        default: return "case3";
    }
}

CorrelatorOutput lag_autocorr_window(const OfdmConfig& cfg, const BasebandSignal& signal,
                                     int64_t lag_samples, int64_t first, int64_t last) {
    const int64_t window = cfg.symbol_samples();
    const int64_t lo = std::max(first, signal.origin_sample);
    const int64_t hi = std::min(last, signal.end_sample() - window - lag_samples);
    if (hi < lo) throw ConfigError("lag_autocorr: buffer too short for the requested lag");

    CorrelatorOutput out;
    out.base_index = lo;
    out.lag_samples = lag_samples;
    out.window_samples = window;
    out.lag_seconds = lag_samples * cfg.sample_interval();
    out.values.resize(size_t(hi - lo + 1));

    const cplx* r = signal.samples.data();
    const int64_t off = lo - signal.origin_sample;
    constexpr int64_t kRefresh = 4096;
    cplx acc{0.0, 0.0};
    for (int64_t k = 0; k <= hi - lo; ++k) {
        if (k % kRefresh == 0) {
            acc = {0.0, 0.0};
            for (int64_t n = 0; n < window; ++n)
                acc += r[size_t(off + k + n)] * std::conj(r[size_t(off + k + n + lag_samples)]);
        } else {
            acc += r[size_t(off + k + window - 1)] * std::conj(r[size_t(off + k + window - 1 + lag_samples)]);
        }
        out.values[size_t(k)] = acc;
        // retire the leading term for the next index
        acc -= r[size_t(off + k)] * std::conj(r[size_t(off + k + lag_samples)]);
    }
    return out;
}

CorrelatorOutput lag_autocorr(const OfdmConfig& cfg, const BasebandSignal& signal,
                              int64_t lag_samples) {
    return lag_autocorr_window(cfg, signal, lag_samples, signal.origin_sample,
                               signal.end_sample());
}

namespace {

int64_t argmax_abs(const std::vector<cplx>& v, int64_t lo, int64_t hi) {
    int64_t best = lo;
    double best_mag = -1.0;
    for (int64_t i = lo; i <= hi; ++i) {
        const double m = std::norm(v[size_t(i)]);
        if (m > best_mag) {  // strict: ties keep the earlier index
            best_mag = m;
            best = i;
        }
    }
    return best;
}

}  // namespace

SyncDecision select_sync_peak(const CorrelatorOutput& corr, double threshold_db) {
    if (corr.values.empty()) throw ConfigError("select_sync_peak: empty correlator output");
    const int64_t n = int64_t(corr.values.size());
    const int64_t k1 = argmax_abs(corr.values, 0, n - 1);
    const double p1 = std::norm(corr.values[size_t(k1)]);

    // Second candidate: best index at least half a symbol away from the max.
    const int64_t guard = std::max<int64_t>(corr.window_samples / 2, 1);
    int64_t k2 = -1;
    double p2 = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        if (std::llabs(i - k1) < guard) continue;
        const double m = std::norm(corr.values[size_t(i)]);
        if (m > p2) {
            p2 = m;
            k2 = i;
        }
    }

    SyncDecision d;
    d.locked_to = LockedTo::unknown;
    d.sync_sample = corr.base_index + k1;
    if (k2 >= 0 && p2 > 0.0) {
        const double ratio_db = 10.0 * std::log10(p1 / p2);
        if (ratio_db < threshold_db) {
            d.locked_to = LockedTo::ambiguous;
            d.sync_sample = corr.base_index + std::min(k1, k2);
        }
    }
    return d;
}

SyncDecision select_sync_peak_labeled(const CorrelatorOutput& corr,
                                      const std::vector<SyncCandidate>& candidates,
                                      double threshold_db) {
    if (candidates.empty()) return select_sync_peak(corr, threshold_db);
    struct Scored {
        LockedTo label;
        int64_t index;
        double power;
    };
    std::vector<Scored> scored;
    const int64_t lo_all = corr.base_index;
    const int64_t hi_all = corr.base_index + int64_t(corr.values.size()) - 1;
    for (const auto& c : candidates) {
        const int64_t lo = std::clamp(c.window_first, lo_all, hi_all) - corr.base_index;
        const int64_t hi = std::clamp(c.window_last, lo_all, hi_all) - corr.base_index;
        if (hi < lo) continue;
        const int64_t k = argmax_abs(corr.values, lo, hi);
        scored.push_back({c.label, corr.base_index + k, std::norm(corr.values[size_t(k)])});
    }
    if (scored.empty()) throw ConfigError("select_sync_peak: no candidate window overlaps the scan");

    auto strongest = std::max_element(scored.begin(), scored.end(),
                                      [](const Scored& a, const Scored& b) { return a.power < b.power; });
    SyncDecision d;
    d.locked_to = strongest->label;
    d.sync_sample = strongest->index;
    for (const auto& s : scored) {
        if (s.label == strongest->label) continue;
        const double ratio_db = 10.0 * std::log10(strongest->power / std::max(s.power, 1e-300));
        if (ratio_db < threshold_db) {
            d.locked_to = LockedTo::ambiguous;
            if (s.index < d.sync_sample) d.sync_sample = s.index;  // earlier peak wins
        }
    }
    return d;
}

double estimate_cfo(const CorrelatorOutput& corr, int64_t sync_sample, double lag_seconds) {
    const cplx xi = corr.at_abs(sync_sample);
    double eta = -std::arg(xi) / (2.0 * kPi * lag_seconds);
    // principal interval (-1/(2 lag), +1/(2 lag)]
    const double span = 1.0 / lag_seconds;
    eta -= span * std::floor(eta / span + 0.5);
    if (eta <= -span / 2.0) eta += span;
    return eta;
}

void compensate_cfo(BasebandSignal& signal, double eta_hat) {
    if (eta_hat == 0.0) return;
    const double dt = 1.0 / signal.sample_rate;
    const cplx step = cis(-2.0 * kPi * eta_hat * dt);
    constexpr size_t kRefresh = 4096;
    cplx phasor{1.0, 0.0};
    for (size_t i = 0; i < signal.samples.size(); ++i) {
        if (i % kRefresh == 0)
            phasor = cis(-2.0 * kPi * eta_hat * double(signal.origin_sample + int64_t(i)) * dt);
        signal.samples[i] *= phasor;
        phasor *= step;
    }
}

AlignmentCase classify_alignment(double alice_arrival_s, double eve_arrival_s, const OfdmConfig& cfg) {
    const double t_o = cfg.symbol_duration();
    const double d = eve_arrival_s - alice_arrival_s;
    if (d <= -t_o) return AlignmentCase::case1;
    if (d <= 0.0) return AlignmentCase::case2a;
    if (d <= t_o) return AlignmentCase::case2b;
    return AlignmentCase::case3;
}

}  // namespace sensejam
