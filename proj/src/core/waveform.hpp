// Training grid, pulsed-radar OFDM modulation and demodulation, raw I/Q export.
#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "config.hpp"
#include "types.hpp"

namespace sensejam {

/// Q x M complex grid, stored per-symbol (column m contiguous).
struct Grid {
    int q = 0;
    int m = 0;
    std::vector<cplx> data;

    Grid() = default;
    Grid(int q_, int m_) : q(q_), m(m_), data(size_t(q_) * size_t(m_)) {}

    cplx& at(int qi, int mi) { return data[size_t(mi) * q + qi]; }
    const cplx& at(int qi, int mi) const { return data[size_t(mi) * q + qi]; }
    std::span<cplx> column(int mi) { return {data.data() + size_t(mi) * q, size_t(q)}; }
    std::span<const cplx> column(int mi) const { return {data.data() + size_t(mi) * q, size_t(q)}; }
};

/// Complex baseband samples at rate B on a shared scene clock. samples[0]
/// sits at absolute sample index origin_sample (may be negative: a jammer can
/// transmit before the scene epoch). Gaps between pulses are explicit zeros so
/// overlapping transmissions superpose sample-wise.
struct BasebandSignal {
    std::vector<cplx> samples;
    int64_t origin_sample = 0;
    double sample_rate = 0.0;
    std::vector<int64_t> frame_starts;  // absolute indices of each pulse start

    int64_t end_sample() const { return origin_sample + int64_t(samples.size()); }
    double origin_time() const { return origin_sample / sample_rate; }

    cplx at(int64_t abs_index) const {
        const int64_t i = abs_index - origin_sample;
        if (i < 0 || i >= int64_t(samples.size())) return {0.0, 0.0};
        return samples[size_t(i)];
    }

    /// Sample-wise sum; the result spans both signals.
    void accumulate(const BasebandSignal& other);
};

/// Deterministic ±1 BPSK training grid with identical columns.
Grid make_training_grid(const OfdmConfig& cfg, uint64_t seed);

/// Per symbol m: unitary IDFT of column m, cyclic prefix prepended, the result
/// repeated cfg.sync_repeats times back to back, placed at m * PRI samples.
BasebandSignal modulate(const OfdmConfig& cfg, const Grid& grid);

/// Same, with start_sample shifting every frame start (jammer timing control).
BasebandSignal modulate_at(const OfdmConfig& cfg, const Grid& grid, int64_t start_sample);

/// For each m: take Q+Q_cp samples at sync_sample + m * PRI, drop the CP,
/// forward unitary DFT. Throws if any window overruns the buffer.
Grid demodulate(const OfdmConfig& cfg, const BasebandSignal& signal, int64_t sync_sample);

/// Interleaved float32 little-endian I/Q plus a JSON sidecar
/// {sample_rate_hz, origin_time_s, frame_starts}.
void export_iq(const BasebandSignal& signal, const std::filesystem::path& iq_path);
BasebandSignal import_iq(const std::filesystem::path& iq_path);

}  // namespace sensejam
