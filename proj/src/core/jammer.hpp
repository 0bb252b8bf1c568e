// Eve's transmitter: artificial CTF synthesis, strategy execution, the ICI
// closed form, and the analytic jammed-CTF oracle the full chain is checked
// against.
#pragma once

#include <optional>
#include <span>

#include "channel.hpp"
#include "config.hpp"
#include "geometry.hpp"
#include "sync.hpp"
#include "waveform.hpp"

namespace sensejam {

/// One injected target: delay is relative to the jammer's own reference peak
/// and must stay positive and unaliased (< Q*T).
struct ArtificialTarget {
    cplx gain{0.5, 0.0};
    double delay = 0.0;    // seconds, > 0
    double doppler = 0.0;  // Hz
};

/// All-ones reference plus one rank-one term per artificial target.
Grid make_artificial_ctf(const OfdmConfig& cfg, const std::vector<ArtificialTarget>& targets);

struct MicroDopplerSignature {
    double amplitude_hz = 0.0;
    double rate_hz = 0.0;
    double phase0 = 0.0;
};

/// Instantaneous Doppler offset at slow-time index m:
/// amplitude * sin(2π rate m T_s + phase0).
double micro_doppler_signature(const MicroDopplerSignature& sig, int snapshot_index, double pri);

struct KinematicState {
    Vec2 position{};
    Vec2 velocity{};
    Vec2 acceleration{};
};

/// Newtonian step: pos += v dt + a dt^2/2, v += a dt.
KinematicState kinematic_update(const KinematicState& state, double dt);

/// The (gain, delay, doppler) a fake scatterer at the given state would show
/// in the surveillance geometry (delay relative to the Alice-Bob LOS).
ArtificialTarget emulate_target(const KinematicState& state, cplx gain, const Vec2& alice,
                                const Vec2& bob, double carrier_hz);

struct ArrayConfig {
    int element_count = 4;
    double spacing_wavelengths = 0.5;
    double beam_angle = 0.0;             // radians
    std::vector<double> null_angles;     // radians
};

/// Minimum-norm ULA weights with unit gain at the beam angle and exact nulls;
/// returns the array factor evaluated at each path angle. Throws when the
/// constraints are rank-deficient (angles closer than about a beamwidth).
std::vector<cplx> illumination_weights(const ArrayConfig& array, std::span<const double> path_angles);

/// Inter-carrier interference closed form. P follows the subcarrier-mixing
/// geometric sum, Lambda the slow-time phase ramp; at eta_w = 0 these reduce
/// to Q*I and the identity.
struct IciModel {
    std::vector<cplx> p_matrix;     // Q x Q, row-major: P[q*Q + i]
    std::vector<cplx> lambda_diag;  // length M
    double eta_w = 0.0;
    int q = 0;

    cplx p(int row, int col) const { return p_matrix[size_t(row) * q + col]; }
    /// C = P S Lambda on demand.
    Grid c_matrix(const Grid& s) const;
};
IciModel ici_matrices(const OfdmConfig& cfg, double eta_w);

struct Mimicry {
    KinematicState initial{};
    cplx gain{0.5, 0.0};
    std::optional<MicroDopplerSignature> micro_doppler;
};

struct StrategyConfig {
    enum class Inject { overcrowd_a1, selective_a2 };
    enum class Invalidate { none, preceding_b1, forced_sync_b2 };

    Inject inject = Inject::overcrowd_a1;
    Invalidate invalidate = Invalidate::forced_sync_b2;
    std::optional<Mimicry> mimicry;  // A3 layered on top of A1/A2
    std::optional<double> jsr_db;    // Eve-LOS to Alice-LOS power at Bob
    double eve_cfo_hz = 0.0;         // deliberate carrier offset
    double timing_advance_s = 0.0;   // extra margin for preceding jamming
    std::optional<ArrayConfig> array;
    std::vector<ArtificialTarget> targets;

    void validate() const;
};

/// Scene facts the jammer needs for timing and power control.
struct JamContext {
    double alice_arrival_s = 0.0;     // Alice pulse-0 start at Bob
    double eve_bob_los_delay_s = 0.0;
    cplx alice_los_gain{};            // as received at Bob
    cplx eve_bob_los_gain{};          // at unit Eve transmit power
    double alignment_offset_s = 0.0;  // Eve clock offset, drawn per trial
    double ndpa_lead_s = 40e-6;       // how early Eve learns the schedule
    Vec2 alice_pos{};                 // for mimicry trajectories
    Vec2 bob_pos{};
};

struct JamSignal {
    BasebandSignal signal;      // Eve's transmitted baseband
    Grid tx_grid;               // what was modulated (scaled H̄ ⊙ S)
    double amplitude_scale = 1.0;
    double eve_arrival_s = 0.0; // pulse-0 start at Bob
    std::vector<ArtificialTarget> effective_targets;  // per-snapshot A3 state folded in
};

/// Modulates H̄ ⊙ S with transmit power set so the received Eve-LOS to
/// Alice-LOS power ratio equals jsr_db, timed per the invalidate mode.
/// Preceding jamming that would require transmitting before the jammer knows
/// the schedule throws InfeasibleError.
JamSignal synthesize_jam_signal(const OfdmConfig& cfg, const Grid& training,
                                const StrategyConfig& strategy, const JamContext& ctx);

/// Inputs for the closed-form jammed CTF (the deterministic oracle).
struct JammedCtfInputs {
    std::vector<PathParams> eve_bob_paths;    // absolute delays, gains incl. jam scale
    std::vector<ArtificialTarget> artificial;
    std::vector<PathParams> alice_bob_paths;  // absolute delays
    double eve_tx_start_s = 0.0;     // jammer pulse-0 emission time (scene epoch)
    double alice_clock_offset = 0.0; // emission shift of the legitimate frames
    double eta_w = 0.0;              // residual CFO on the surveillance signal
    double tau_prime = 0.0;          // Bob's sync instant, seconds
    AlignmentCase alignment = AlignmentCase::case2a;
};

/// Case 1: jammer-only Hadamard product. Case 2: adds the desynchronized
/// surveillance term with per-path subcarrier-mixing kernels (the exact form
/// of the separable H' ⊙ C model). Case 3: the plain surveillance CTF.
/// Noise-free by construction.
Grid analytic_jammed_ctf(const OfdmConfig& cfg, const JammedCtfInputs& in,
                         std::span<const cplx> training_column);

}  // namespace sensejam
