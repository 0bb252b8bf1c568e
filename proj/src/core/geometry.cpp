#include "geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sensejam {

namespace {
constexpr double kMinSeparation = 1e-9;  // meters; below this a scatter leg is degenerate
}

void ScenarioTopology::validate() const {
    if (norm(alice - bob) <= 0.0 || norm(alice - eve) <= 0.0 || norm(bob - eve) <= 0.0)
        throw ConfigError("topology: device positions must be pairwise distinct");
    for (const auto& t : targets)
        if (t.rcs <= 0.0) throw ConfigError("topology: target rcs must be positive");
}

double bistatic_delay(const Vec2& tx, const Vec2& rx, std::optional<Vec2> point) {
    if (!point) return norm(tx - rx) / kSpeedOfLight;
    return (norm(tx - *point) + norm(*point - rx)) / kSpeedOfLight;
}

double bistatic_doppler(const Vec2& tx, const Vec2& rx, const Target& target, double carrier_hz) {
    const double d_tx = norm(target.position - tx);
    const double d_rx = norm(target.position - rx);
    if (d_tx <= kMinSeparation || d_rx <= kMinSeparation) return 0.0;
    const Vec2 u_tx = (1.0 / d_tx) * (target.position - tx);
    const Vec2 u_rx = (1.0 / d_rx) * (target.position - rx);
    const double range_rate = dot(target.velocity, u_tx) + dot(target.velocity, u_rx);
    return -(carrier_hz / kSpeedOfLight) * range_rate;
}

cplx path_gain_los(const Vec2& tx, const Vec2& rx, double carrier_hz) {
    const double d = norm(tx - rx);
    const double lambda = kSpeedOfLight / carrier_hz;
    const double mag = lambda / (4.0 * kPi * d);
    const double tau = d / kSpeedOfLight;
    return mag * cis(-2.0 * kPi * tau * carrier_hz);
}

cplx path_gain_scatter(const Vec2& tx, const Vec2& rx, const Vec2& point, double rcs, double carrier_hz) {
    const double d_tx = norm(tx - point);
    const double d_rx = norm(point - rx);
    const double lambda = kSpeedOfLight / carrier_hz;
    const double mag = lambda * std::sqrt(rcs) / (std::pow(4.0 * kPi, 1.5) * d_tx * d_rx);
    const double tau = (d_tx + d_rx) / kSpeedOfLight;
    return mag * cis(-2.0 * kPi * tau * carrier_hz);
}

std::vector<PathParams> build_paths(const ScenarioTopology& topo, const Vec2& tx, const Vec2& rx,
                                    double carrier_hz, double tx_power_scale) {
    if (norm(tx - rx) <= 0.0) throw ConfigError("build_paths: tx and rx coincide");
    const double amp = std::sqrt(tx_power_scale);

    std::vector<PathParams> paths;
    PathParams los;
    los.gain = amp * path_gain_los(tx, rx, carrier_hz);
    los.delay = bistatic_delay(tx, rx, std::nullopt);
    los.doppler = 0.0;  // devices are stationary
    los.angle = bearing(rx, tx);
    los.departure_angle = bearing(tx, rx);
    los.is_los = true;
    paths.push_back(los);

    for (const auto& t : topo.targets) {
        if (norm(t.position - tx) <= kMinSeparation || norm(t.position - rx) <= kMinSeparation)
            continue;  // scatterer sits on an endpoint: no far-field echo path
        PathParams p;
        p.gain = amp * path_gain_scatter(tx, rx, t.position, t.rcs, carrier_hz);
        p.delay = bistatic_delay(tx, rx, t.position);
        p.doppler = bistatic_doppler(tx, rx, t, carrier_hz);
        p.angle = bearing(rx, t.position);
        p.departure_angle = bearing(tx, t.position);
        p.is_los = false;
        if (std::abs(p.delay - los.delay) <= 1e-15 * std::max(1.0, los.delay) + 1e-18)
            throw ConfigError("build_paths: target echo delay coincides with the LOS delay");
        paths.push_back(p);
    }
    std::sort(paths.begin() + 1, paths.end(),
              [](const PathParams& a, const PathParams& b) { return a.delay < b.delay; });
    return paths;
}

RttEavesdropResult rtt_eavesdrop(const RttMeasurements& meas) {
    if (!(meas.c1 < meas.c2 && meas.c2 < meas.c3 && meas.c3 < meas.c4))
        throw ConfigError("rtt: measurements must be strictly increasing");
    if (meas.tau_x < 0.0) throw ConfigError("rtt: idle time must be non-negative");
    RttEavesdropResult r{};
    r.tau_abx = (meas.c3 - meas.c1) / 2.0;
    r.tau_be = (3.0 * meas.c1 - meas.c3) / 2.0;
    r.tau_ae = meas.c2 - meas.c3 + meas.c1;
    if (r.tau_abx <= 0.0 || r.tau_be <= 0.0 || r.tau_ae <= 0.0)
        throw ConfigError("rtt: inconsistent measurement set (non-positive delay)");
    return r;
}

RttLegitimateResult rtt_legitimate(double tau_ab_true, double tau_x) {
    if (tau_ab_true <= 0.0 || tau_x <= 0.0)
        throw ConfigError("rtt: tau_ab and tau_x must be positive");
    // Alice transmits at 0, Bob replies tau_x after reception, Alice replies
    // tau_x after that reception. Each side subtracts the known idle time.
    const double alice_rx_elapsed = 2.0 * tau_ab_true + tau_x;       // on Alice's clock from her tx
    const double bob_rx_elapsed = 2.0 * tau_ab_true + 2.0 * tau_x;   // on Bob's clock from his first rx
    RttLegitimateResult r{};
    r.alice_estimate = (alice_rx_elapsed - tau_x) / 2.0;
    r.bob_estimate = (bob_rx_elapsed - 2.0 * tau_x) / 2.0;
    return r;
}

RttMeasurements simulate_rtt_timeline(double tau_ab, double tau_be, double tau_ae, double tau_x) {
    // Alternating exchange: Alice transmits at 0, then each device replies
    // tau_x after its reception, so transmission k happens at k*(tau_ab+tau_x).
    // Eve pins its clock to Alice's first transmission: at Bob's first signal
    // it knows tau_ab + tau_x + tau_be seconds have elapsed.
    const double step = tau_ab + tau_x;
    RttMeasurements m{};
    m.c1 = 1.0 * step + tau_be;  // Bob's 1st transmission
    m.c2 = 2.0 * step + tau_ae;  // Alice's 2nd
    m.c3 = 3.0 * step + tau_be;  // Bob's 2nd
    m.c4 = 4.0 * step + tau_ae;  // Alice's 3rd
    m.tau_x = tau_x;
    return m;
}

double bearing(const Vec2& from, const Vec2& to) {
    return std::atan2(to[1] - from[1], to[0] - from[0]);
}

}  // namespace sensejam
