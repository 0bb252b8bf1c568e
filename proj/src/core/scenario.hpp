// Scenario ingestion: topology, waveform, jammer strategy, receiver options.
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "config.hpp"
#include "geometry.hpp"
#include "jammer.hpp"
#include "radar.hpp"
#include "sync.hpp"

namespace sensejam {

enum class CfoCompensation {
    genie,     // compensate with the locked transmitter's true CFO
    estimated  // compensate with the correlator-phase estimate
};
enum class CorrelatorLag { t_o, t_s };

struct SyncOptions {
    CorrelatorLag lag = CorrelatorLag::t_o;
    CfoCompensation cfo = CfoCompensation::genie;
    double threshold_db = 3.0;  // forced-synchronization power rule

    // Optional receiver timing window, seconds relative to the expected
    // legitimate arrival. A narrow window models the Case-1-immune receiver.
    std::optional<double> window_before_s;
    std::optional<double> window_after_s;
};

struct Scenario {
    ScenarioTopology topology;
    OfdmConfig ofdm;
    std::optional<StrategyConfig> jammer;
    double snr_db = 30.0;
    double alice_cfo_hz = 0.0;  // Alice-Bob oscillator offset, Hz
    CfarConfig cfar;
    SyncOptions sync;
    uint64_t training_seed = 0x57a71c5eedULL;  // standardized grid is fixed

    void validate() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// The stock indoor scene: Alice (10,0), Bob (0,0), Eve (5,10), one 0.1 m^2
/// target at (5,10) moving (-3,-3) m/s, 30 dB SNR.
Scenario default_scenario();

}  // namespace sensejam
