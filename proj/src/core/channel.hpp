// Frequency-domain channel construction and time-domain multipath propagation.
#pragma once

#include <vector>

#include "config.hpp"
#include "geometry.hpp"
#include "waveform.hpp"

namespace sensejam {

/// d(tau): entry q = e^{-j2π tau q Δf}.
std::vector<cplx> steering_delay(const OfdmConfig& cfg, double tau);

/// b(f): entry m = e^{-j2π f m T_s}. Channel grids use its Hermitian transpose.
std::vector<cplx> steering_doppler(const OfdmConfig& cfg, double f);

/// H = Σ_p α_p d(τ_p) b^H(f_p). Delays are used as given; pass τ_p - τ_0 for a
/// sync-relative grid.
Grid build_ctf(const OfdmConfig& cfg, const std::vector<PathParams>& paths);

struct PropagationSpec {
    std::vector<PathParams> paths;
    double cfo = 0.0;           // Hz, applied after path summation
    double clock_offset = 0.0;  // seconds, added to every path delay
    double noise_std = 0.0;     // per-sample complex std (E|z|^2 = std^2)

    // Tail padding budget in samples. Negative: size the output to fit the
    // largest delay. Non-negative: fixed pad, delays beyond it are an error.
    int64_t tail_pad = -1;
};

/// out(t) = [Σ_p gain_p tx(t - τ_p - δ_t) e^{j2π f_p t}] e^{j2π cfo t} + noise.
/// Doppler and CFO are continuous phasors in absolute scene time. Fractional
/// delays are realized as a frequency-domain phase ramp over the whole buffer;
/// delays within 1e-9 samples of the grid are applied as exact shifts.
BasebandSignal propagate(const OfdmConfig& cfg, const BasebandSignal& tx,
                         const PropagationSpec& spec, Rng& rng);

/// White circularly-symmetric noise over the whole buffer.
void add_noise(BasebandSignal& signal, double noise_std, Rng& rng);

/// Per-sample complex noise std that yields the requested post-demodulation
/// per-subcarrier SNR for a LOS-only channel with the given gain.
double noise_std_for_snr(const OfdmConfig& cfg, cplx los_gain, double snr_db);

}  // namespace sensejam
