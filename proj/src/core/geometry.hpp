// Physical topology, bistatic path parameters and RTT distance estimation.
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "config.hpp"
#include "types.hpp"

namespace sensejam {

using Vec2 = std::array<double, 2>;

inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }
inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

struct Target {
    Vec2 position{};
    Vec2 velocity{};
    double rcs = 1.0;  // m^2
};

/// Device positions and mobile targets (2D, meters).
struct ScenarioTopology {
    Vec2 alice{10.0, 0.0};
    Vec2 bob{0.0, 0.0};
    Vec2 eve{5.0, 10.0};
    std::vector<Target> targets;
    double eve_power_gain_db = 0.0;  // Eve transmit power relative to Alice

    /// All pairwise device distances strictly positive, every rcs > 0.
    void validate() const;
};

/// One propagation path. Delay is absolute bistatic (seconds); the LOS entry
/// comes first in any path list built here, then targets by increasing delay.
struct PathParams {
    cplx gain{};
    double delay = 0.0;    // seconds
    double doppler = 0.0;  // Hz, positive for closing geometry
    double angle = 0.0;    // radians, AoA at the receiver
    double departure_angle = 0.0;  // radians, AoD at the transmitter
    bool is_los = false;
};

/// Only the arrival clock readings Eve keeps; see rtt_eavesdrop.
struct RttMeasurements {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;  // seconds on Eve's clock
    double tau_x = 0.0;                             // standardized idle time
};

struct RttEavesdropResult {
    double tau_abx;  // tau_ab + tau_x
    double tau_be;
    double tau_ae;
};

/// Total path length over c. `point` reflects tx->point->rx; pass nullopt for LOS.
double bistatic_delay(const Vec2& tx, const Vec2& rx, std::optional<Vec2> point);

/// -(f_c/c) d/dt(|T-tx| + |T-rx|) with stationary endpoints.
double bistatic_doppler(const Vec2& tx, const Vec2& rx, const Target& target, double carrier_hz);

/// Complex gain with phase -2π·delay·f_c. LOS magnitude is free-space
/// (λ/4πd); scattered paths follow the bistatic radar equation.
cplx path_gain_los(const Vec2& tx, const Vec2& rx, double carrier_hz);
cplx path_gain_scatter(const Vec2& tx, const Vec2& rx, const Vec2& point, double rcs, double carrier_hz);

/// LOS first, then one entry per target sorted by increasing delay.
/// Targets co-located with an endpoint do not form a far-field scatter path
/// and are skipped; a genuine delay tie with the LOS is an error.
std::vector<PathParams> build_paths(const ScenarioTopology& topo, const Vec2& tx, const Vec2& rx,
                                    double carrier_hz, double tx_power_scale = 1.0);

/// Appendix-style inversion of the eavesdropped arrival times.
RttEavesdropResult rtt_eavesdrop(const RttMeasurements& meas);

/// Noiseless legitimate two-way protocol; both estimates equal tau_ab exactly.
struct RttLegitimateResult {
    double alice_estimate;
    double bob_estimate;
};
RttLegitimateResult rtt_legitimate(double tau_ab_true, double tau_x);

/// Arrival clock readings for the eavesdropper given the true geometry; the
/// independent timeline simulation used to validate rtt_eavesdrop.
RttMeasurements simulate_rtt_timeline(double tau_ab, double tau_be, double tau_ae, double tau_x);

/// Angle of the direction from `from` towards `to`, radians in (-π, π].
double bearing(const Vec2& from, const Vec2& to);

}  // namespace sensejam
