#include "waveform.hpp"

#include <cstring>
#include <fstream>

#include "fft.hpp"
#include "json.hpp"

namespace sensejam {

void BasebandSignal::accumulate(const BasebandSignal& other) {
    if (other.samples.empty()) return;
    if (samples.empty()) {
        *this = other;
        return;
    }
    const int64_t new_origin = std::min(origin_sample, other.origin_sample);
    const int64_t new_end = std::max(end_sample(), other.end_sample());
    std::vector<cplx> merged(size_t(new_end - new_origin), cplx{0.0, 0.0});
    for (size_t i = 0; i < samples.size(); ++i)
        merged[size_t(origin_sample - new_origin) + i] = samples[i];
    for (size_t i = 0; i < other.samples.size(); ++i)
        merged[size_t(other.origin_sample - new_origin) + i] += other.samples[i];
    samples = std::move(merged);
    origin_sample = new_origin;
    frame_starts.insert(frame_starts.end(), other.frame_starts.begin(), other.frame_starts.end());
}

Grid make_training_grid(const OfdmConfig& cfg, uint64_t seed) {
    Grid grid(cfg.q, cfg.symbols);
    Rng rng(seed);
    std::vector<double> bits(cfg.q);
    for (int qi = 0; qi < cfg.q; ++qi) bits[qi] = (rng.next_u64() & 1) ? 1.0 : -1.0;
    for (int mi = 0; mi < cfg.symbols; ++mi)
        for (int qi = 0; qi < cfg.q; ++qi) grid.at(qi, mi) = {bits[qi], 0.0};
    return grid;
}

namespace {

// One pulse from a frequency-domain column: CP + body, repeated.
void synthesize_pulse(const OfdmConfig& cfg, std::span<const cplx> column, std::span<cplx> out) {
    std::vector<cplx> body(column.begin(), column.end());
    fft_inverse_unitary(body);
    const int sym = cfg.q + cfg.q_cp;
    for (int rep = 0; rep < cfg.sync_repeats; ++rep) {
        cplx* dst = out.data() + size_t(rep) * sym;
        for (int i = 0; i < cfg.q_cp; ++i) dst[i] = body[size_t(cfg.q - cfg.q_cp + i)];
        std::memcpy(dst + cfg.q_cp, body.data(), sizeof(cplx) * cfg.q);
    }
}

}  // namespace

BasebandSignal modulate_at(const OfdmConfig& cfg, const Grid& grid, int64_t start_sample) {
    if (grid.q != cfg.q || grid.m != cfg.symbols)
        throw ConfigError("modulate: grid shape does not match the configuration");
    BasebandSignal sig;
    sig.sample_rate = cfg.bandwidth;
    sig.origin_sample = start_sample;
    const int64_t pulse_len = cfg.pulse_samples();
    const int64_t pri = cfg.pri_samples();
    sig.samples.assign(size_t(pri * (cfg.symbols - 1) + pulse_len), cplx{0.0, 0.0});
    sig.frame_starts.resize(cfg.symbols);
    for (int mi = 0; mi < cfg.symbols; ++mi) {
        sig.frame_starts[mi] = start_sample + pri * mi;
        synthesize_pulse(cfg, grid.column(mi),
                         {sig.samples.data() + size_t(pri * mi), size_t(pulse_len)});
    }
    return sig;
}

BasebandSignal modulate(const OfdmConfig& cfg, const Grid& grid) { return modulate_at(cfg, grid, 0); }

Grid demodulate(const OfdmConfig& cfg, const BasebandSignal& signal, int64_t sync_sample) {
    Grid grid(cfg.q, cfg.symbols);
    const int64_t pri = cfg.pri_samples();
    std::vector<cplx> window(size_t(cfg.q));
    for (int mi = 0; mi < cfg.symbols; ++mi) {
        const int64_t body_start = sync_sample + pri * mi + cfg.q_cp;
        if (body_start < signal.origin_sample || body_start + cfg.q > signal.end_sample())
            throw ConfigError("demodulate: sample window overruns the buffer");
        const cplx* src = signal.samples.data() + size_t(body_start - signal.origin_sample);
        std::copy(src, src + cfg.q, window.begin());
        fft_forward_unitary(window);
        std::copy(window.begin(), window.end(), grid.column(mi).begin());
    }
    return grid;
}

void export_iq(const BasebandSignal& signal, const std::filesystem::path& iq_path) {
    std::ofstream out(iq_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + iq_path.string());
    std::vector<float> interleaved(signal.samples.size() * 2);
    for (size_t i = 0; i < signal.samples.size(); ++i) {
        interleaved[2 * i] = static_cast<float>(signal.samples[i].real());
        interleaved[2 * i + 1] = static_cast<float>(signal.samples[i].imag());
    }
    out.write(reinterpret_cast<const char*>(interleaved.data()),
              std::streamsize(interleaved.size() * sizeof(float)));
    if (!out) throw IoError("short write to " + iq_path.string());

    nlohmann::json meta;
    meta["sample_rate_hz"] = signal.sample_rate;
    meta["origin_time_s"] = signal.origin_time();
    meta["frame_starts"] = signal.frame_starts;
    std::ofstream side(iq_path.string() + ".json");
    if (!side) throw IoError("cannot write sidecar for " + iq_path.string());
    side << meta.dump(2) << "\n";
}

BasebandSignal import_iq(const std::filesystem::path& iq_path) {
    std::ifstream in(iq_path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("cannot read " + iq_path.string());
    const auto bytes = in.tellg();
    in.seekg(0);
    std::vector<float> interleaved(size_t(bytes) / sizeof(float));
    in.read(reinterpret_cast<char*>(interleaved.data()), bytes);

    std::ifstream side(iq_path.string() + ".json");
    if (!side) throw IoError("missing sidecar for " + iq_path.string());
    nlohmann::json meta = nlohmann::json::parse(side);

    BasebandSignal sig;
    sig.sample_rate = meta.at("sample_rate_hz").get<double>();
    sig.origin_sample = static_cast<int64_t>(std::llround(meta.at("origin_time_s").get<double>() * sig.sample_rate));
    sig.frame_starts = meta.at("frame_starts").get<std::vector<int64_t>>();
    sig.samples.resize(interleaved.size() / 2);
    for (size_t i = 0; i < sig.samples.size(); ++i)
        sig.samples[i] = {double(interleaved[2 * i]), double(interleaved[2 * i + 1])};
    return sig;
}

}  // namespace sensejam
