#include "config.hpp"

#include <cmath>
#include <string>

#include "fft.hpp"

namespace sensejam {

void OfdmConfig::validate() const {
    if (q <= 0 || !is_pow2(static_cast<size_t>(q)))
        throw ConfigError("ofdm: subcarrier count must be a power of two, got " + std::to_string(q));
    if (q_cp <= 0 || q_cp >= q)
        throw ConfigError("ofdm: cyclic prefix must satisfy 0 < q_cp < q");
    if (bandwidth <= 0.0) throw ConfigError("ofdm: bandwidth must be positive");
    if (carrier <= 0.0) throw ConfigError("ofdm: carrier frequency must be positive");
    if (symbols < 1) throw ConfigError("ofdm: need at least one symbol");
    if (sync_repeats < 1) throw ConfigError("ofdm: sync_repeats must be >= 1");
    const double t_o = symbol_duration();
    if (pri < t_o - 1e-15) throw ConfigError("ofdm: PRI shorter than the OFDM symbol");
    const double multiple = pri / t_o;
    if (std::abs(multiple - std::round(multiple)) > 1e-6)
        throw ConfigError("ofdm: PRI must be an integer multiple of T_o");
    if (pri_samples() < pulse_samples())
        throw ConfigError("ofdm: pulse (with repetitions) does not fit in one PRI");
}

OfdmConfig OfdmConfig::with_subcarriers(int new_q) const {
    OfdmConfig out = *this;
    const double pri_multiple = std::round(pri / symbol_duration());
    out.q = new_q;
    // the guard interval is fixed in time (0.8 us at 80 MHz), not a fraction
    // of the transform size
    out.pri = pri_multiple * out.symbol_duration();
    out.validate();
    return out;
}

}  // namespace sensejam
