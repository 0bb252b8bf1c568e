// OFDM waveform constants and derived quantities.
#pragma once

#include <cstdint>

#include "types.hpp"

namespace sensejam {

/// Waveform configuration. Defaults follow 802.11ac-style sensing at 80 MHz:
/// Q=1024, Q_cp=64, f_c=5 GHz, M=128 symbols, PRI 1.32 ms.
struct OfdmConfig {
    int q = 1024;            // subcarrier count (power of two)
    int q_cp = 64;           // cyclic prefix length in samples
    double bandwidth = 80e6; // B, Hz (also the complex sample rate)
    double carrier = 5e9;    // f_c, Hz
    int symbols = 128;       // M, slow-time pulse count
    // T_s. The nominal 1.32 ms spacing snapped to the nearest multiple of
    // T_o (97 * 13.6 us), keeping the PRI on the symbol grid.
    double pri = 97 * 1088 / 80e6;

    // Identical training-symbol repetitions per pulse. Two repetitions give the
    // lag-T_o correlator something to correlate against inside one pulse, the
    // role the repeated preamble training fields play in a standards frame.
    int sync_repeats = 2;

    double sample_interval() const { return 1.0 / bandwidth; }                   // T
    double subcarrier_spacing() const { return bandwidth / q; }                  // Δ_f
    double symbol_duration() const { return (q + q_cp) * sample_interval(); }    // T_o
    int64_t symbol_samples() const { return q + q_cp; }
    int64_t pulse_samples() const { return int64_t(sync_repeats) * (q + q_cp); }
    double pulse_duration() const { return pulse_samples() * sample_interval(); }
    int64_t pri_samples() const { return static_cast<int64_t>(std::llround(pri * bandwidth)); }
    int64_t frame_span_samples() const { return pri_samples() * (symbols - 1) + pulse_samples(); }

    /// Throws ConfigError when an invariant is violated.
    void validate() const;

    /// Same bandwidth and cyclic prefix (the guard interval is fixed in
    /// time), subcarrier count chosen for the given spacing, PRI kept at the
    /// same multiple of the new T_o.
    OfdmConfig with_subcarriers(int new_q) const;
};

}  // namespace sensejam
