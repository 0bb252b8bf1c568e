#include "channel.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"

namespace sensejam {

std::vector<cplx> steering_delay(const OfdmConfig& cfg, double tau) {
    std::vector<cplx> d(size_t(cfg.q));
    const double step = -2.0 * kPi * tau * cfg.subcarrier_spacing();
    for (int qi = 0; qi < cfg.q; ++qi) d[size_t(qi)] = cis(step * qi);
    return d;
}

std::vector<cplx> steering_doppler(const OfdmConfig& cfg, double f) {
    std::vector<cplx> b(size_t(cfg.symbols));
    const double step = -2.0 * kPi * f * cfg.pri;
    for (int mi = 0; mi < cfg.symbols; ++mi) b[size_t(mi)] = cis(step * mi);
    return b;
}

Grid build_ctf(const OfdmConfig& cfg, const std::vector<PathParams>& paths) {
    if (paths.empty()) throw ConfigError("build_ctf: need at least one path");
    Grid h(cfg.q, cfg.symbols);
    for (const auto& p : paths) {
        const auto d = steering_delay(cfg, p.delay);
        const auto b = steering_doppler(cfg, p.doppler);
        for (int mi = 0; mi < cfg.symbols; ++mi) {
            const cplx col = p.gain * std::conj(b[size_t(mi)]);
            cplx* dst = h.column(mi).data();
            for (int qi = 0; qi < cfg.q; ++qi) dst[qi] += col * d[size_t(qi)];
        }
    }
    return h;
}

namespace {

// Circular fractional shift by mu samples (|mu| <= 0.5) via a spectral phase
// ramp. Exact for band-limited content; callers guarantee tail headroom.
std::vector<cplx> fractional_shift(const std::vector<cplx>& x, double mu, size_t padded_len) {
    size_t n = 1;
    while (n < padded_len) n <<= 1;
    std::vector<cplx> buf(n, cplx{0.0, 0.0});
    std::copy(x.begin(), x.end(), buf.begin());
    fft_forward(buf);
    for (size_t k = 0; k < n; ++k) {
        // signed bin frequency in cycles/sample
        const double f_cyc = (k <= n / 2) ? double(k) / double(n) : (double(k) - double(n)) / double(n);
        buf[k] *= cis(-2.0 * kPi * f_cyc * mu);
    }
    fft_inverse(buf);
    const double scale = 1.0 / double(n);
    for (auto& v : buf) v *= scale;
    return buf;
}

// Multiply dst[i] += gain * src[i] * e^{j2π f (origin+i) T}, incremental
// rotation refreshed periodically to hold phase error at machine level.
void accumulate_with_phasor(std::vector<cplx>& dst, int64_t dst_offset, const cplx* src,
                            size_t count, cplx gain, double f_hz, int64_t abs_start, double dt) {
    if (f_hz == 0.0) {
        for (size_t i = 0; i < count; ++i) dst[size_t(dst_offset) + i] += gain * src[i];
        return;
    }
    const cplx step = cis(2.0 * kPi * f_hz * dt);
    constexpr size_t kRefresh = 4096;
    cplx phasor = cis(2.0 * kPi * f_hz * double(abs_start) * dt);
    for (size_t i = 0; i < count; ++i) {
        if (i % kRefresh == 0)
            phasor = cis(2.0 * kPi * f_hz * (double(abs_start) + double(i)) * dt);
        dst[size_t(dst_offset) + i] += gain * src[i] * phasor;
        phasor *= step;
    }
}

}  // namespace

BasebandSignal propagate(const OfdmConfig& cfg, const BasebandSignal& tx,
                         const PropagationSpec& spec, Rng& rng) {
    if (tx.sample_rate != cfg.bandwidth)
        throw ConfigError("propagate: signal sample rate does not match the configuration");
    const double dt = cfg.sample_interval();

    int64_t max_shift = 0;
    for (const auto& p : spec.paths) {
        const double samples = (p.delay + spec.clock_offset) / dt;
        if (samples < 0.0) throw ConfigError("propagate: negative total path delay");
        max_shift = std::max(max_shift, int64_t(std::ceil(samples)) + 1);
    }
    if (spec.tail_pad >= 0 && max_shift > spec.tail_pad)
        throw ConfigError("propagate: path delay exceeds the buffer tail padding");
    const int64_t pad = spec.tail_pad >= 0 ? spec.tail_pad : max_shift;

    BasebandSignal out;
    out.sample_rate = tx.sample_rate;
    out.origin_sample = tx.origin_sample;
    out.frame_starts = tx.frame_starts;
    out.samples.assign(tx.samples.size() + size_t(pad), cplx{0.0, 0.0});

    for (const auto& p : spec.paths) {
        const double delay_samples = (p.delay + spec.clock_offset) / dt;
        const int64_t n_int = int64_t(std::llround(delay_samples));
        const double frac = delay_samples - double(n_int);
        if (std::abs(frac) < 1e-9) {
            accumulate_with_phasor(out.samples, n_int, tx.samples.data(), tx.samples.size(),
                                   p.gain, p.doppler, tx.origin_sample + n_int, dt);
        } else {
            const auto shifted = fractional_shift(tx.samples, frac, tx.samples.size() + size_t(pad));
            const size_t count = std::min(shifted.size(), out.samples.size() - size_t(n_int));
            accumulate_with_phasor(out.samples, n_int, shifted.data(), count, p.gain, p.doppler,
                                   tx.origin_sample + n_int, dt);
        }
    }

    if (spec.cfo != 0.0) {
        const cplx step = cis(2.0 * kPi * spec.cfo * dt);
        constexpr size_t kRefresh = 4096;
        cplx phasor{1.0, 0.0};
        for (size_t i = 0; i < out.samples.size(); ++i) {
            if (i % kRefresh == 0)
                phasor = cis(2.0 * kPi * spec.cfo * double(out.origin_sample + int64_t(i)) * dt);
            out.samples[i] *= phasor;
            phasor *= step;
        }
    }

    if (spec.noise_std > 0.0) add_noise(out, spec.noise_std, rng);
    return out;
}

void add_noise(BasebandSignal& signal, double noise_std, Rng& rng) {
    if (noise_std <= 0.0) return;
    for (auto& s : signal.samples) s += rng.cgaussian(noise_std);
}

double noise_std_for_snr(const OfdmConfig& cfg, cplx los_gain, double snr_db) {
    (void)cfg;  // unitary transforms keep time and grid noise variances equal
    if (los_gain == cplx{0.0, 0.0}) throw ConfigError("noise_std_for_snr: zero LOS gain");
    return std::abs(los_gain) * std::pow(10.0, -snr_db / 20.0);
}

}  // namespace sensejam
