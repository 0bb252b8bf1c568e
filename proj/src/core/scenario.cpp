#include "scenario.hpp"

#include <fstream>

#include "json.hpp"

namespace sensejam {

using nlohmann::json;

namespace {

Vec2 parse_vec2(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(std::string("scenario: ") + what + " must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

cplx parse_gain(const json& j) {
    if (j.contains("gain_db")) {
        return {std::pow(10.0, j.at("gain_db").get<double>() / 20.0), 0.0};
    }
    if (j.contains("gain")) {
        const auto& g = j.at("gain");
        if (g.is_array() && g.size() == 2) return {g[0].get<double>(), g[1].get<double>()};
        if (g.is_number()) return {g.get<double>(), 0.0};
    }
    return {0.5, 0.0};
}

ArtificialTarget parse_artificial(const json& j, const OfdmConfig& ofdm) {
    ArtificialTarget t;
    t.gain = parse_gain(j);
    if (j.contains("delay_s")) t.delay = j.at("delay_s").get<double>();
    else if (j.contains("range_m")) t.delay = j.at("range_m").get<double>() / kSpeedOfLight;
    else if (j.contains("range_bins"))
        t.delay = j.at("range_bins").get<double>() * ofdm.sample_interval();
    else throw ConfigError("scenario: artificial target needs delay_s, range_m or range_bins");
    if (j.contains("doppler_hz")) t.doppler = j.at("doppler_hz").get<double>();
    else if (j.contains("speed_mps"))
        t.doppler = j.at("speed_mps").get<double>() * ofdm.carrier / kSpeedOfLight;
    else if (j.contains("doppler_bins"))
        t.doppler = j.at("doppler_bins").get<double>() / (ofdm.symbols * ofdm.pri);
    return t;
}

StrategyConfig parse_strategy(const json& j, const OfdmConfig& ofdm) {
    StrategyConfig s;
    if (j.contains("inject")) {
        const auto v = j.at("inject").get<std::string>();
        if (v == "overcrowd" || v == "a1") s.inject = StrategyConfig::Inject::overcrowd_a1;
        else if (v == "selective" || v == "a2") s.inject = StrategyConfig::Inject::selective_a2;
        else throw ConfigError("scenario: unknown inject mode '" + v + "'");
    }
    if (j.contains("invalidate")) {
        const auto v = j.at("invalidate").get<std::string>();
        if (v == "none") s.invalidate = StrategyConfig::Invalidate::none;
        else if (v == "preceding" || v == "b1") s.invalidate = StrategyConfig::Invalidate::preceding_b1;
        else if (v == "forced_sync" || v == "b2")
            s.invalidate = StrategyConfig::Invalidate::forced_sync_b2;
        else throw ConfigError("scenario: unknown invalidate mode '" + v + "'");
    }
    if (j.contains("jsr_db")) s.jsr_db = j.at("jsr_db").get<double>();
    if (j.contains("eve_cfo_hz")) s.eve_cfo_hz = j.at("eve_cfo_hz").get<double>();
    else if (j.contains("eve_cfo_ppm"))
        s.eve_cfo_hz = j.at("eve_cfo_ppm").get<double>() * 1e-6 * ofdm.carrier;
    if (j.contains("timing_advance_s")) s.timing_advance_s = j.at("timing_advance_s").get<double>();
    if (j.contains("targets"))
        for (const auto& t : j.at("targets")) s.targets.push_back(parse_artificial(t, ofdm));
    if (j.contains("array")) {
        const auto& a = j.at("array");
        ArrayConfig arr;
        arr.element_count = a.value("elements", 4);
        arr.spacing_wavelengths = a.value("spacing_wavelengths", 0.5);
        if (a.contains("beam_angle_deg")) arr.beam_angle = a.at("beam_angle_deg").get<double>() * kPi / 180.0;
        if (a.contains("null_angles_deg"))
            for (const auto& v : a.at("null_angles_deg"))
                arr.null_angles.push_back(v.get<double>() * kPi / 180.0);
        s.array = arr;
    }
    if (j.contains("mimicry")) {
        const auto& m = j.at("mimicry");
        Mimicry mim;
        mim.initial.position = parse_vec2(m.at("pos"), "mimicry pos");
        if (m.contains("vel")) mim.initial.velocity = parse_vec2(m.at("vel"), "mimicry vel");
        if (m.contains("accel")) mim.initial.acceleration = parse_vec2(m.at("accel"), "mimicry accel");
        mim.gain = parse_gain(m);
        if (m.contains("micro_doppler")) {
            const auto& md = m.at("micro_doppler");
            MicroDopplerSignature sig;
            sig.amplitude_hz = md.value("amplitude_hz", 0.0);
            sig.rate_hz = md.value("rate_hz", 0.0);
            sig.phase0 = md.value("phase0", 0.0);
            mim.micro_doppler = sig;
        }
        s.mimicry = mim;
    }
    return s;
}

OfdmConfig parse_ofdm(const json& j) {
    OfdmConfig cfg;
    if (j.contains("subcarriers")) cfg.q = j.at("subcarriers").get<int>();
    if (j.contains("cyclic_prefix")) cfg.q_cp = j.at("cyclic_prefix").get<int>();
    if (j.contains("bandwidth_hz")) cfg.bandwidth = j.at("bandwidth_hz").get<double>();
    if (j.contains("carrier_hz")) cfg.carrier = j.at("carrier_hz").get<double>();
    if (j.contains("symbols")) cfg.symbols = j.at("symbols").get<int>();
    if (j.contains("sync_repeats")) cfg.sync_repeats = j.at("sync_repeats").get<int>();
    if (j.contains("pri_s")) cfg.pri = j.at("pri_s").get<double>();
    else if (j.contains("pri_symbols"))
        cfg.pri = j.at("pri_symbols").get<double>() * cfg.symbol_duration();
    return cfg;
}

}  // namespace

void Scenario::validate() const {
    topology.validate();
    ofdm.validate();
    cfar.validate();
    if (jammer) jammer->validate();
    if (!std::isfinite(snr_db)) throw ConfigError("scenario: snr_db must be finite");
}

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    try {
        Scenario sc = default_scenario();
        if (j.contains("alice")) sc.topology.alice = parse_vec2(j.at("alice"), "alice");
        if (j.contains("bob")) sc.topology.bob = parse_vec2(j.at("bob"), "bob");
        if (j.contains("eve")) sc.topology.eve = parse_vec2(j.at("eve"), "eve");
        if (j.contains("targets")) {
            sc.topology.targets.clear();
            for (const auto& t : j.at("targets")) {
                Target tgt;
                tgt.position = parse_vec2(t.at("pos"), "target pos");
                if (t.contains("vel")) tgt.velocity = parse_vec2(t.at("vel"), "target vel");
                tgt.rcs = t.value("rcs", 1.0);
                sc.topology.targets.push_back(tgt);
            }
        }
        if (j.contains("eve_power_gain_db"))
            sc.topology.eve_power_gain_db = j.at("eve_power_gain_db").get<double>();
        if (j.contains("ofdm")) sc.ofdm = parse_ofdm(j.at("ofdm"));
        if (j.contains("snr_db")) sc.snr_db = j.at("snr_db").get<double>();
        if (j.contains("alice_cfo_hz")) sc.alice_cfo_hz = j.at("alice_cfo_hz").get<double>();
        else if (j.contains("alice_cfo_ppm"))
            sc.alice_cfo_hz = j.at("alice_cfo_ppm").get<double>() * 1e-6 * sc.ofdm.carrier;
        if (j.contains("jammer")) sc.jammer = parse_strategy(j.at("jammer"), sc.ofdm);
        if (j.contains("cfar")) {
            const auto& c = j.at("cfar");
            sc.cfar.pfa = c.value("pfa", sc.cfar.pfa);
            sc.cfar.guard_cells = c.value("guard", sc.cfar.guard_cells);
            sc.cfar.training_cells = c.value("training", sc.cfar.training_cells);
            sc.cfar.os_rank = c.value("os_rank", sc.cfar.os_rank);
        }
        if (j.contains("sync")) {
            const auto& s = j.at("sync");
            if (s.contains("lag")) {
                const auto v = s.at("lag").get<std::string>();
                if (v == "t_o") sc.sync.lag = CorrelatorLag::t_o;
                else if (v == "t_s") sc.sync.lag = CorrelatorLag::t_s;
                else throw ConfigError("scenario: sync lag must be t_o or t_s");
            }
            if (s.contains("cfo_compensation")) {
                const auto v = s.at("cfo_compensation").get<std::string>();
                if (v == "genie") sc.sync.cfo = CfoCompensation::genie;
                else if (v == "estimated") sc.sync.cfo = CfoCompensation::estimated;
                else throw ConfigError("scenario: cfo_compensation must be genie or estimated");
            }
            sc.sync.threshold_db = s.value("threshold_db", sc.sync.threshold_db);
            if (s.contains("window_before_s")) sc.sync.window_before_s = s.at("window_before_s").get<double>();
            if (s.contains("window_after_s")) sc.sync.window_after_s = s.at("window_after_s").get<double>();
        }
        sc.validate();
        return sc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario(text);
}

Scenario default_scenario() {
    Scenario sc;
    sc.topology.alice = {10.0, 0.0};
    sc.topology.bob = {0.0, 0.0};
    sc.topology.eve = {5.0, 10.0};
    sc.topology.targets = {Target{{5.0, 10.0}, {-3.0, -3.0}, 0.1}};
    sc.ofdm = OfdmConfig{};
    sc.snr_db = 30.0;
    return sc;
}

}  // namespace sensejam
