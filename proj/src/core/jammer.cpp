#include "jammer.hpp"

#include <algorithm>
#include <cmath>

namespace sensejam {

namespace {

/// Geometric sum Σ_{n=0}^{count-1} e^{j n theta}, stable at multiples of 2π.
cplx dirichlet_sum(double theta, int count) {
    const double half = 0.5 * theta;
    const double s = std::sin(half);
    if (std::abs(s) < 1e-12) return {double(count), 0.0};
    const double ratio = std::sin(count * half) / s;
    return ratio * cis((count - 1) * half);
}

}  // namespace

Grid make_artificial_ctf(const OfdmConfig& cfg, const std::vector<ArtificialTarget>& targets) {
    const double unambiguous = cfg.q * cfg.sample_interval();
    for (const auto& t : targets) {
        if (t.delay <= 0.0) throw ConfigError("artificial target delay must be positive");
        if (t.delay >= unambiguous)
            throw ConfigError("artificial target delay aliases (delay >= Q*T)");
    }
    Grid h(cfg.q, cfg.symbols);
    std::fill(h.data.begin(), h.data.end(), cplx{1.0, 0.0});
    for (const auto& t : targets) {
        const double dstep = -2.0 * kPi * t.delay * cfg.subcarrier_spacing();
        for (int mi = 0; mi < cfg.symbols; ++mi) {
            const cplx col = t.gain * cis(2.0 * kPi * t.doppler * mi * cfg.pri);
            cplx* dst = h.column(mi).data();
            for (int qi = 0; qi < cfg.q; ++qi) dst[qi] += col * cis(dstep * qi);
        }
    }
    return h;
}

double micro_doppler_signature(const MicroDopplerSignature& sig, int snapshot_index, double pri) {
    return sig.amplitude_hz * std::sin(2.0 * kPi * sig.rate_hz * snapshot_index * pri + sig.phase0);
}

KinematicState kinematic_update(const KinematicState& state, double dt) {
    if (dt <= 0.0) throw ConfigError("kinematic_update: dt must be positive");
    KinematicState next = state;
    next.position = state.position + dt * state.velocity + (0.5 * dt * dt) * state.acceleration;
    next.velocity = state.velocity + dt * state.acceleration;
    return next;
}

ArtificialTarget emulate_target(const KinematicState& state, cplx gain, const Vec2& alice,
                                const Vec2& bob, double carrier_hz) {
    ArtificialTarget t;
    t.gain = gain;
    t.delay = bistatic_delay(alice, bob, state.position) - bistatic_delay(alice, bob, std::nullopt);
    Target phys{state.position, state.velocity, 1.0};
    t.doppler = bistatic_doppler(alice, bob, phys, carrier_hz);
    return t;
}

std::vector<cplx> illumination_weights(const ArrayConfig& array, std::span<const double> path_angles) {
    const int n = array.element_count;
    const int c = 1 + int(array.null_angles.size());
    if (n < 2) throw ConfigError("illumination: need at least two elements");
    if (c > n) throw ConfigError("illumination: more constraints than elements");
    for (double nullang : array.null_angles)
        if (std::abs(nullang - array.beam_angle) < 1e-12)
            throw ConfigError("illumination: beam angle coincides with a null");

    auto steer = [&](double theta) {
        std::vector<cplx> a(static_cast<size_t>(n));
        const double step = 2.0 * kPi * array.spacing_wavelengths * std::sin(theta);
        for (int i = 0; i < n; ++i) a[size_t(i)] = cis(step * i);
        return a;
    };

    // Exact-constraint minimum-norm weights: w = C^H (C C^H)^{-1} d with
    // C rows the steering vectors, d = [1, 0, ..., 0].
    std::vector<std::vector<cplx>> rows;
    rows.push_back(steer(array.beam_angle));
    for (double nullang : array.null_angles) rows.push_back(steer(nullang));

    std::vector<std::vector<cplx>> gram(static_cast<size_t>(c), std::vector<cplx>(static_cast<size_t>(c)));
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j) {
            cplx acc{0.0, 0.0};
            for (int e = 0; e < n; ++e) acc += rows[size_t(i)][size_t(e)] * std::conj(rows[size_t(j)][size_t(e)]);
            gram[size_t(i)][size_t(j)] = acc;
        }

    std::vector<cplx> rhs(static_cast<size_t>(c), cplx{0.0, 0.0});
    rhs[0] = {1.0, 0.0};

    // Gaussian elimination with partial pivoting; tiny pivots mean the
    // constraint angles are unresolvable with this aperture.
    double max_pivot = 0.0;
    for (int col = 0; col < c; ++col) {
        int pivot = col;
        for (int r = col + 1; r < c; ++r)
            if (std::abs(gram[size_t(r)][size_t(col)]) > std::abs(gram[size_t(pivot)][size_t(col)])) pivot = r;
        std::swap(gram[size_t(col)], gram[size_t(pivot)]);
        std::swap(rhs[size_t(col)], rhs[size_t(pivot)]);
        const double mag = std::abs(gram[size_t(col)][size_t(col)]);
        max_pivot = std::max(max_pivot, mag);
        if (mag < 1e-9 * std::max(1.0, max_pivot))
            throw ConfigError("illumination: constraint angles are rank-deficient");
        for (int r = col + 1; r < c; ++r) {
            const cplx f = gram[size_t(r)][size_t(col)] / gram[size_t(col)][size_t(col)];
            for (int k = col; k < c; ++k) gram[size_t(r)][size_t(k)] -= f * gram[size_t(col)][size_t(k)];
            rhs[size_t(r)] -= f * rhs[size_t(col)];
        }
    }
    std::vector<cplx> lambda(static_cast<size_t>(c));
    for (int r = c - 1; r >= 0; --r) {
        cplx acc = rhs[size_t(r)];
        for (int k = r + 1; k < c; ++k) acc -= gram[size_t(r)][size_t(k)] * lambda[size_t(k)];
        lambda[size_t(r)] = acc / gram[size_t(r)][size_t(r)];
    }

    std::vector<cplx> weights(static_cast<size_t>(n), cplx{0.0, 0.0});
    for (int i = 0; i < c; ++i)
        for (int e = 0; e < n; ++e) weights[size_t(e)] += std::conj(rows[size_t(i)][size_t(e)]) * lambda[size_t(i)];

    std::vector<cplx> gains;
    gains.reserve(path_angles.size());
    for (double theta : path_angles) {
        const auto a = steer(theta);
        cplx af{0.0, 0.0};
        for (int e = 0; e < n; ++e) af += a[size_t(e)] * weights[size_t(e)];
        gains.push_back(af);
    }
    return gains;
}

IciModel ici_matrices(const OfdmConfig& cfg, double eta_w) {
    IciModel model;
    model.eta_w = eta_w;
    model.q = cfg.q;
    model.p_matrix.resize(size_t(cfg.q) * size_t(cfg.q));
    const double eta_t = eta_w * cfg.sample_interval();
    // P depends only on (q - i); evaluate the Q distinct values once.
    std::vector<cplx> by_diff(size_t(2 * cfg.q - 1));
    for (int d = -(cfg.q - 1); d <= cfg.q - 1; ++d) {
        const double theta = 2.0 * kPi * (double(d) / cfg.q - eta_t);
        by_diff[size_t(d + cfg.q - 1)] = dirichlet_sum(theta, cfg.q);
    }
    for (int q = 0; q < cfg.q; ++q)
        for (int i = 0; i < cfg.q; ++i)
            model.p_matrix[size_t(q) * cfg.q + i] = by_diff[size_t(q - i + cfg.q - 1)];

    model.lambda_diag.resize(size_t(cfg.symbols));
    for (int mi = 0; mi < cfg.symbols; ++mi)
        model.lambda_diag[size_t(mi)] = cis(-2.0 * kPi * eta_w * mi * cfg.pri);
    return model;
}

Grid IciModel::c_matrix(const Grid& s) const {
    Grid c(s.q, s.m);
    for (int mi = 0; mi < s.m; ++mi) {
        const auto col = s.column(mi);
        for (int row = 0; row < s.q; ++row) {
            cplx acc{0.0, 0.0};
            for (int i = 0; i < s.q; ++i) acc += p(row, i) * col[size_t(i)];
            c.at(row, mi) = acc * lambda_diag[size_t(mi)];
        }
    }
    return c;
}

void StrategyConfig::validate() const {
    if (inject == Inject::selective_a2) {
        if (!array || array->element_count < 2)
            throw ConfigError("strategy: selective injection needs an array with >= 2 elements");
    }
    for (const auto& t : targets)
        if (t.delay <= 0.0) throw ConfigError("strategy: artificial target delay must be positive");
    if (jsr_db && !std::isfinite(*jsr_db)) throw ConfigError("strategy: jsr_db must be finite");
}

JamSignal synthesize_jam_signal(const OfdmConfig& cfg, const Grid& training,
                                const StrategyConfig& strategy, const JamContext& ctx) {
    strategy.validate();
    JamSignal out;
    out.effective_targets = strategy.targets;

    // Build the jam grid. A static target set is the plain Eq.-style product;
    // a mimicry target evolves per pulse with accumulated slow-time phase.
    Grid hbar = make_artificial_ctf(cfg, strategy.targets);
    if (strategy.mimicry) {
        const Mimicry& mim = *strategy.mimicry;
        KinematicState state = mim.initial;
        double phase = 0.0;
        for (int mi = 0; mi < cfg.symbols; ++mi) {
            ArtificialTarget t =
                emulate_target(state, mim.gain, ctx.alice_pos, ctx.bob_pos, cfg.carrier);
            if (mim.micro_doppler)
                t.doppler += micro_doppler_signature(*mim.micro_doppler, mi, cfg.pri);
            if (mi > 0) phase += 2.0 * kPi * t.doppler * cfg.pri;
            const double dstep = -2.0 * kPi * t.delay * cfg.subcarrier_spacing();
            cplx* dst = hbar.column(mi).data();
            const cplx col = t.gain * cis(phase);
            for (int qi = 0; qi < cfg.q; ++qi) dst[qi] += col * cis(dstep * qi);
            state = kinematic_update(state, cfg.pri);
            if (mi == 0) out.effective_targets.push_back(t);
        }
    }

    double content_power = 0.0;
    for (const auto& v : hbar.data) content_power += std::norm(v);
    content_power /= double(hbar.data.size());

    // Transmit power: received Eve-LOS over Alice-LOS equals jsr_db, counting
    // the jam grid's own content power (the training grid has unit power).
    double scale = 1.0;
    if (strategy.jsr_db) {
        const double jsr_lin = std::pow(10.0, *strategy.jsr_db / 10.0);
        scale = std::sqrt(jsr_lin * std::norm(ctx.alice_los_gain) /
                          (std::norm(ctx.eve_bob_los_gain) * content_power));
    }
    out.amplitude_scale = scale;

    Grid tx(cfg.q, cfg.symbols);
    for (size_t i = 0; i < tx.data.size(); ++i) tx.data[i] = scale * hbar.data[i] * training.data[i];
    out.tx_grid = tx;

    // Timing. Forced sync rides alongside the легitimate arrival with the
    // drawn clock offset; preceding jamming clears the whole pulse plus margin.
    double arrival = ctx.alice_arrival_s + ctx.alignment_offset_s;
    if (strategy.invalidate == StrategyConfig::Invalidate::preceding_b1) {
        const double margin = 32.0 * cfg.sample_interval() + strategy.timing_advance_s;
        arrival = ctx.alice_arrival_s - cfg.pulse_duration() - margin;
        const double tx_start = arrival - ctx.eve_bob_los_delay_s;
        // Scene time zero is Alice's pulse-0 emission; the announcement frame
        // gives Eve only ndpa_lead seconds of warning.
        if (tx_start < -ctx.ndpa_lead_s)
            throw InfeasibleError("preceding jamming: required transmit time precedes the announcement");
    }
    const int64_t start_sample =
        int64_t(std::llround((arrival - ctx.eve_bob_los_delay_s) * cfg.bandwidth));
    out.eve_arrival_s = start_sample * cfg.sample_interval() + ctx.eve_bob_los_delay_s;
    out.signal = modulate_at(cfg, tx, start_sample);
    return out;
}

Grid analytic_jammed_ctf(const OfdmConfig& cfg, const JammedCtfInputs& in,
                         std::span<const cplx> training_column) {
    if (int(training_column.size()) != cfg.q)
        throw ConfigError("analytic_jammed_ctf: training column size mismatch");

    // Every term is gain * v[q] * e^{j2π F m T_s}: v the demodulated
    // subcarrier profile of content delayed by `delay` seconds relative to
    // the sync instant, rotating at xi Hz inside the sampling window.
    struct Contribution {
        cplx gain;
        double delay;  // seconds, relative to tau_prime
        double slow_freq;  // F, Hz
        double fast_freq;  // xi, Hz (kernel + static phase)
    };
    std::vector<Contribution> contributions;

    const bool jammed = in.alignment != AlignmentCase::case3;
    if (jammed) {
        for (const auto& l : in.eve_bob_paths) {
            const double rel = l.delay + in.eve_tx_start_s - in.tau_prime;
            contributions.push_back({l.gain, rel, l.doppler, l.doppler});
            for (const auto& t : in.artificial)
                contributions.push_back(
                    {l.gain * t.gain, rel + t.delay, l.doppler + t.doppler, l.doppler});
        }
    }
    const bool surveillance_present =
        in.alignment == AlignmentCase::case2a || in.alignment == AlignmentCase::case2b ||
        in.alignment == AlignmentCase::case3;
    if (surveillance_present) {
        const double eta = jammed ? in.eta_w : 0.0;
        for (const auto& p : in.alice_bob_paths) {
            const double rel = p.delay + in.alice_clock_offset - in.tau_prime;
            contributions.push_back({p.gain, rel, p.doppler + eta, p.doppler + eta});
        }
    }

    Grid h(cfg.q, cfg.symbols);
    const double t = cfg.sample_interval();
    std::vector<cplx> profile(size_t(cfg.q));
    std::vector<cplx> kernel(size_t(cfg.q));
    for (const auto& c : contributions) {
        const auto d = steering_delay(cfg, c.delay);
        if (c.fast_freq == 0.0) {
            std::copy(d.begin(), d.end(), profile.begin());
        } else {
            // Subcarrier-mixing kernel at this residual frequency; same
            // geometric sum as the P matrix, applied around the circle.
            for (int diff = 0; diff < cfg.q; ++diff) {
                const double theta = 2.0 * kPi * (double(diff) / cfg.q + c.fast_freq * t);
                kernel[size_t(diff)] = dirichlet_sum(theta, cfg.q);
            }
            for (int q = 0; q < cfg.q; ++q) {
                cplx acc{0.0, 0.0};
                for (int qp = 0; qp < cfg.q; ++qp) {
                    const int diff = qp - q + (qp < q ? cfg.q : 0);
                    acc += kernel[size_t(diff)] * d[size_t(qp)] * training_column[size_t(qp)];
                }
                profile[size_t(q)] = acc / (double(cfg.q) * training_column[size_t(q)]);
            }
        }
        const cplx static_phase =
            cis(2.0 * kPi * c.fast_freq * (in.tau_prime + cfg.q_cp * t));
        for (int mi = 0; mi < cfg.symbols; ++mi) {
            const cplx col = c.gain * static_phase * cis(2.0 * kPi * c.slow_freq * mi * cfg.pri);
            cplx* dst = h.column(mi).data();
            for (int qi = 0; qi < cfg.q; ++qi) dst[qi] += col * profile[size_t(qi)];
        }
    }
    return h;
}

}  // namespace sensejam
