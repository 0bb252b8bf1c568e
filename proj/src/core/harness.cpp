#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include "channel.hpp"
#include "json.hpp"

namespace sensejam {

namespace {

int64_t round_samples(double seconds, double rate) { return int64_t(std::llround(seconds * rate)); }

void snap_delays(std::vector<PathParams>& paths, double rate) {
    for (auto& p : paths) p.delay = double(std::llround(p.delay * rate)) / rate;
}

int wrap_bin(int64_t i, int n) {
    int64_t r = i % n;
    return int(r < 0 ? r + n : r);
}

int64_t local_argmax(const CorrelatorOutput& corr, int64_t center, int64_t half_width) {
    const int64_t lo = std::max(corr.base_index, center - half_width);
    const int64_t hi = std::min(corr.base_index + int64_t(corr.values.size()) - 1, center + half_width);
    int64_t best = lo;
    double best_mag = -1.0;
    for (int64_t k = lo; k <= hi; ++k) {
        const double m = std::norm(corr.at_abs(k));
        if (m > best_mag) {
            best_mag = m;
            best = k;
        }
    }
    return best;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) threads = int(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(size_t(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

uint64_t trial_seed(uint64_t base, uint64_t point, uint64_t trial) {
    uint64_t s = base;
    uint64_t h = splitmix64(s);
    s = h ^ (point * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL);
    h = splitmix64(s);
    s = h ^ (trial * 0xd1342543de82ef95ULL + 1);
    return splitmix64(s);
}

}  // namespace

SnapshotResult run_snapshot(const Scenario& scenario, uint64_t seed, const SnapshotOptions& options) {
    scenario.validate();
    const OfdmConfig& cfg = scenario.ofdm;
    const double rate = cfg.bandwidth;
    const double dt = cfg.sample_interval();
    Rng rng = Rng::stream(seed, 0xA5CE);

    const Grid training = make_training_grid(cfg, scenario.training_seed);

    auto alice_paths = build_paths(scenario.topology, scenario.topology.alice,
                                   scenario.topology.bob, cfg.carrier);
    if (options.snap_delays) snap_delays(alice_paths, rate);
    const double alice_arrival = alice_paths[0].delay;
    const int64_t a0 = round_samples(alice_arrival, rate);

    BasebandSignal scene;
    {
        BasebandSignal alice_tx = modulate(cfg, training);
        PropagationSpec spec;
        spec.paths = alice_paths;
        spec.cfo = scenario.alice_cfo_hz;
        scene = propagate(cfg, alice_tx, spec, rng);
    }

    SnapshotResult res;
    res.alignment = AlignmentCase::case3;

    std::vector<PathParams> eve_paths;
    std::optional<JamSignal> jam;
    double eve_cfo = 0.0;
    if (scenario.jammer) {
        const StrategyConfig& strat = *scenario.jammer;
        eve_cfo = strat.eve_cfo_hz;
        eve_paths = build_paths(scenario.topology, scenario.topology.eve, scenario.topology.bob,
                                cfg.carrier,
                                std::pow(10.0, scenario.topology.eve_power_gain_db / 10.0));
        if (options.snap_delays) snap_delays(eve_paths, rate);

        if (strat.inject == StrategyConfig::Inject::selective_a2) {
            std::vector<double> angles;
            angles.reserve(eve_paths.size());
            for (const auto& p : eve_paths) angles.push_back(p.departure_angle);
            const auto af = illumination_weights(*strat.array, angles);
            for (size_t i = 0; i < eve_paths.size(); ++i) eve_paths[i].gain *= af[i];
        }

        double align = 0.0;
        if (options.alignment_offset_s) {
            align = *options.alignment_offset_s;
        } else {
            // jammer-not-later draws: sampling stays inside the legitimate
            // symbol's cyclic span, so the residual CFO is the only source
            // of orthogonality loss
            const int64_t range = std::min<int64_t>(24, cfg.q_cp / 2);
            align = double(rng.uniform_int(-range, 0)) * dt;
        }
        res.alignment_offset_s = align;

        JamContext ctx;
        ctx.alice_arrival_s = alice_arrival;
        ctx.eve_bob_los_delay_s = eve_paths[0].delay;
        ctx.alice_los_gain = alice_paths[0].gain;
        ctx.eve_bob_los_gain = eve_paths[0].gain;
        ctx.alignment_offset_s = align;
        ctx.alice_pos = scenario.topology.alice;
        ctx.bob_pos = scenario.topology.bob;
        try {
            jam = synthesize_jam_signal(cfg, training, strat, ctx);
            res.jammed = true;
        } catch (const InfeasibleError& e) {
            res.jam_infeasible = true;
            res.failure_reason = e.what();
        }
        if (jam) {
            PropagationSpec spec;
            spec.paths = eve_paths;
            spec.cfo = eve_cfo;
            BasebandSignal eve_rx = propagate(cfg, jam->signal, spec, rng);
            scene.accumulate(eve_rx);
            res.eve_arrival_s = jam->eve_arrival_s;
            res.eve_tx_start_s = double(jam->signal.origin_sample) * dt;
            res.alignment = classify_alignment(alice_arrival, jam->eve_arrival_s, cfg);
        }
    }

    if (options.noise && std::isfinite(scenario.snr_db)) {
        const double sigma = noise_std_for_snr(cfg, alice_paths[0].gain, scenario.snr_db);
        add_noise(scene, sigma, rng);
    }

    // ---- stage 1: synchronization -------------------------------------
    const int64_t lag = scenario.sync.lag == CorrelatorLag::t_o ? cfg.symbol_samples()
                                                                : cfg.pri_samples();
    const int64_t e0 = jam ? round_samples(jam->eve_arrival_s, rate) : a0;
    int64_t scan_lo = std::min(a0, e0) - 64;
    int64_t scan_hi = std::max(a0, e0) + 64;
    if (scenario.sync.window_before_s) scan_lo = a0 - round_samples(*scenario.sync.window_before_s, rate);
    if (scenario.sync.window_after_s) scan_hi = a0 + round_samples(*scenario.sync.window_after_s, rate);
    const CorrelatorOutput corr = lag_autocorr_window(cfg, scene, lag, scan_lo, scan_hi);
    const int64_t corr_lo = corr.base_index;
    const int64_t corr_hi = corr.base_index + int64_t(corr.values.size()) - 1;

    LockedTo lock = LockedTo::alice;
    LockedTo effective = LockedTo::alice;
    int64_t sync_sample = local_argmax(corr, a0, 8);
    const bool eve_in_window = jam && e0 >= corr_lo && e0 <= corr_hi;
    if (eve_in_window) {
        // The forced-synchronization rule compares the received LOS powers;
        // with arrivals a fraction of a symbol apart the correlator shows one
        // blob whose apex sits at the stronger signal's vertex.
        double eve_content = 0.0;
        for (const auto& v : jam->tx_grid.data) eve_content += std::norm(v);
        eve_content /= double(jam->tx_grid.data.size());
        const double p_eve = std::norm(eve_paths[0].gain) * eve_content;
        const double p_alice = std::norm(alice_paths[0].gain);
        const double ratio_db = 10.0 * std::log10(p_eve / p_alice);
        if (ratio_db >= scenario.sync.threshold_db) {
            lock = effective = LockedTo::eve;
            sync_sample = local_argmax(corr, e0, 8);
        } else if (ratio_db <= -scenario.sync.threshold_db) {
            lock = effective = LockedTo::alice;
        } else {
            lock = LockedTo::ambiguous;  // earlier peak wins the tie
            effective = e0 < a0 ? LockedTo::eve : LockedTo::alice;
            sync_sample = local_argmax(corr, std::min(a0, e0), 8);
        }
    }

    res.sync.locked_to = lock;
    res.sync.sync_sample = sync_sample;
    res.sync.cfo_estimate = estimate_cfo(corr, sync_sample, corr.lag_seconds);
    res.sync.alignment_case = res.alignment;

    const double eta_applied = scenario.sync.cfo == CfoCompensation::genie
                                   ? (effective == LockedTo::eve ? eve_cfo : scenario.alice_cfo_hz)
                                   : res.sync.cfo_estimate;
    res.eta_applied_hz = eta_applied;
    compensate_cfo(scene, eta_applied);

    // ---- stage 2: radar processing ------------------------------------
    const Grid received = demodulate(cfg, scene, sync_sample);
    res.ctf = estimate_ctf(received, training);
    res.rdm = compute_rdm(cfg, res.ctf, options.window.value_or(RdmWindow::blackman));
    res.detections = os_cfar(res.rdm, scenario.cfar);

    // ---- model truth ----------------------------------------------------
    const double t_ref = double(sync_sample) * dt;
    const double resid_alice = scenario.alice_cfo_hz - eta_applied;
    const double resid_eve = eve_cfo - eta_applied;
    const double wrap_limit = 0.5 / cfg.pri;
    auto doppler_bin = [&](double f) {
        return wrap_bin(int64_t(std::llround(f * cfg.symbols * cfg.pri)), cfg.symbols);
    };
    auto range_bin = [&](double rel_delay) {
        return wrap_bin(int64_t(std::llround(rel_delay / dt)), cfg.q);
    };

    res.truths.push_back({TruthKind::reference, 0, 0, true});
    // Real targets live where the (possibly desynchronized) surveillance
    // term puts them; content pushed past the unambiguous Doppler span has
    // no attributable cell and is scored as missed.
    for (size_t i = 1; i < alice_paths.size(); ++i) {
        const auto& p = alice_paths[i];
        const double f_exp = p.doppler + resid_alice;
        TruthEntry t;
        t.kind = TruthKind::real;
        t.range_bin = range_bin(p.delay - t_ref);
        t.doppler_bin = doppler_bin(f_exp);
        t.attributable = std::abs(f_exp) <= wrap_limit;
        res.truths.push_back(t);
    }
    if (jam) {
        // Artificial targets are scored at the cell the jammer intends.
        for (const auto& t : jam->effective_targets) {
            TruthEntry e;
            e.kind = TruthKind::artificial;
            e.range_bin = wrap_bin(int64_t(std::llround(t.delay / dt)), cfg.q);
            e.doppler_bin = doppler_bin(t.doppler);
            e.attributable = std::abs(t.doppler) <= wrap_limit;
            res.truths.push_back(e);
        }
        if (effective == LockedTo::eve) {
            const double eve_clock = res.alignment_offset_s;
            TruthEntry alos;
            alos.kind = TruthKind::reference;  // Alice's LOS, range-shifted
            alos.range_bin = range_bin(alice_paths[0].delay - t_ref);
            alos.doppler_bin = doppler_bin(resid_alice);
            alos.attributable = std::abs(resid_alice) <= wrap_limit;
            res.truths.push_back(alos);
            for (size_t l = 1; l < eve_paths.size(); ++l) {
                const auto& p = eve_paths[l];
                const double rel = p.delay + eve_clock - t_ref;
                const double f0 = p.doppler + resid_eve;
                res.truths.push_back({TruthKind::combined, range_bin(rel), doppler_bin(f0),
                                      std::abs(f0) <= wrap_limit});
                for (const auto& t : jam->effective_targets) {
                    const double f1 = p.doppler + t.doppler + resid_eve;
                    res.truths.push_back({TruthKind::combined, range_bin(rel + t.delay),
                                          doppler_bin(f1), std::abs(f1) <= wrap_limit});
                }
            }
        }
    }
    res.association = associate(res.detections, res.truths, cfg.symbols, 1, 1);
    return res;
}

Interval wilson_interval(long successes, long n) {
    if (n <= 0) return {0.0, 0.0};
    const double z = 1.959963985;
    const double p = double(successes) / double(n);
    const double z2n = z * z / double(n);
    const double denom = 1.0 + z2n;
    const double center = (p + z2n / 2.0) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / double(n) + z2n / (4.0 * double(n))) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

StrategyConfig default_jam_strategy(const OfdmConfig& cfg) {
    StrategyConfig s;
    s.inject = StrategyConfig::Inject::overcrowd_a1;
    s.invalidate = StrategyConfig::Invalidate::forced_sync_b2;
    s.jsr_db = 10.0;
    ArtificialTarget t;
    t.gain = {std::pow(10.0, -6.0 / 20.0), 0.0};
    t.delay = 8.0 * cfg.sample_interval();
    t.doppler = 2.0 / (cfg.symbols * cfg.pri);
    s.targets = {t};
    return s;
}

Scenario sweep_template(const Scenario& base, const SweepOptions& opt, int subcarriers) {
    Scenario s = base;
    s.ofdm = base.ofdm.with_subcarriers(subcarriers);
    s.ofdm.pri = opt.sweep_pri_symbols * s.ofdm.symbol_duration();
    s.ofdm.validate();
    if (!s.jammer) s.jammer = default_jam_strategy(s.ofdm);
    if (s.jammer->targets.empty()) s.jammer->targets = default_jam_strategy(s.ofdm).targets;
    // The stock scene's 12.4 m echo sits inside the reference peak's window
    // mainlobe; under forced synchronization both share a Doppler row and a
    // -43 dB echo can never win the guard-region maximum there. Stand the
    // Monte Carlo target off to 24 m relative range (six bins) instead.
    for (auto& t : s.topology.targets) {
        if (std::abs(t.position[0] - 5.0) < 1e-9 && std::abs(t.position[1] - 10.0) < 1e-9) {
            t.position = {8.0, 16.0};
            t.rcs = 1.0;
        }
    }
    return s;
}

void randomize_target_velocity(Scenario& s, Rng& rng, const SweepOptions& opt) {
    if (s.topology.targets.empty()) return;
    const double speed = rng.uniform(opt.speed_min_mps, opt.speed_max_mps);
    const double theta = rng.uniform(0.0, 2.0 * kPi);
    s.topology.targets[0].velocity = {speed * std::cos(theta), speed * std::sin(theta)};
}

SweepPoint run_point(const Scenario& tmpl, int point_index, double x, std::string series,
                     const SweepOptions& opt,
                     const std::function<void(Scenario&, Rng&)>& per_trial) {
    SweepPoint point;
    point.x = x;
    point.series = std::move(series);
    point.trials = opt.trials;
    std::vector<TrialRecord> recs(size_t(opt.trials));
    parallel_for(opt.trials, opt.threads, [&](int t) {
        Rng trng = Rng::stream(trial_seed(opt.base_seed, uint64_t(point_index), uint64_t(t)), 0x7121a1);
        Scenario s = tmpl;
        per_trial(s, trng);
        const uint64_t snap_seed = trial_seed(opt.base_seed, uint64_t(point_index), uint64_t(t));
        TrialRecord rec;
        const SnapshotResult r = run_snapshot(s, snap_seed);
        rec.real_total = r.association.real_total;
        rec.real_detected = r.association.real_detected;
        rec.artificial_total = r.association.artificial_total;
        rec.artificial_detected = r.association.artificial_detected;
        rec.combined_total = r.association.combined_total;
        rec.combined_detected = r.association.combined_detected;
        rec.detections = r.association.detection_count;
        rec.infeasible = r.jam_infeasible;
        recs[size_t(t)] = rec;
    });
    for (const auto& rec : recs) {
        point.real_total += rec.real_total;
        point.real_detected += rec.real_detected;
        point.artificial_total += rec.artificial_total;
        point.artificial_detected += rec.artificial_detected;
        point.detections_sum += rec.detections;
        point.infeasible += rec.infeasible ? 1 : 0;
    }
    if (opt.export_trials) point.trial_records = std::move(recs);
    return point;
}

}  // namespace

SweepResult sweep_pd_vs_cfo(const Scenario& base, const SweepOptions& opt) {
    const int subcarriers = opt.spacing == "312k" ? 256 : 1024;
    Scenario tmpl = sweep_template(base, opt, subcarriers);
    SweepResult out;
    out.kind = "pd_vs_cfo";
    const double carrier = tmpl.ofdm.carrier;
    for (size_t i = 0; i < opt.cfo_ppm_values.size(); ++i) {
        const double delta_ppm = opt.cfo_ppm_values[i];
        out.points.push_back(run_point(
            tmpl, int(i), delta_ppm, opt.spacing, opt, [&, delta_ppm](Scenario& s, Rng& rng) {
                randomize_target_velocity(s, rng, opt);
                s.alice_cfo_hz = rng.uniform(-0.5, 0.5) * 1e-6 * carrier;
                const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                s.jammer->eve_cfo_hz = s.alice_cfo_hz + sign * delta_ppm * 1e-6 * carrier;
            }));
    }
    return out;
}

namespace {

SweepResult jsr_family_sweep(const Scenario& base, const SweepOptions& opt, const char* kind) {
    Scenario tmpl = sweep_template(base, opt, base.ofdm.q);
    SweepResult out;
    out.kind = kind;
    struct Region {
        const char* name;
        double lo_ppm, hi_ppm;
    };
    const Region regions[] = {{"low", 1e-3, opt.regions.low_max_ppm},
                              {"med", opt.regions.low_max_ppm, opt.regions.med_max_ppm},
                              {"high", opt.regions.med_max_ppm, opt.regions.high_max_ppm}};
    const double carrier = tmpl.ofdm.carrier;
    int point_index = 0;
    for (const auto& region : regions) {
        for (double jsr : opt.jsr_values_db) {
            out.points.push_back(run_point(
                tmpl, point_index++, jsr, region.name, opt, [&, region, jsr](Scenario& s, Rng& rng) {
                    randomize_target_velocity(s, rng, opt);
                    s.jammer->jsr_db = jsr;
                    s.alice_cfo_hz = rng.uniform(-0.5, 0.5) * 1e-6 * carrier;
                    const double delta_ppm = rng.uniform(region.lo_ppm, region.hi_ppm);
                    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                    s.jammer->eve_cfo_hz = s.alice_cfo_hz + sign * delta_ppm * 1e-6 * carrier;
                }));
        }
    }
    return out;
}

}  // namespace

SweepResult sweep_pd_vs_jsr(const Scenario& base, const SweepOptions& opt) {
    return jsr_family_sweep(base, opt, "pd_vs_jsr");
}

SweepResult sweep_mdr_dr(const Scenario& base, const SweepOptions& opt) {
    return jsr_family_sweep(base, opt, "mdr_dr");
}

SweepResult sweep_overcrowding(const Scenario& base, const SweepOptions& opt) {
    Scenario tmpl = sweep_template(base, opt, base.ofdm.q);
    tmpl.jammer->inject = StrategyConfig::Inject::overcrowd_a1;
    tmpl.jammer->invalidate = StrategyConfig::Invalidate::preceding_b1;
    tmpl.jammer->jsr_db = opt.overcrowd_jsr_db;
    // park the injected target well away in range and Doppler so the
    // shifted copies land in their own region of the map
    tmpl.jammer->targets = {{cplx{std::pow(10.0, -6.0 / 20.0), 0.0},
                             64.0 * tmpl.ofdm.sample_interval(),
                             10.0 / (tmpl.ofdm.symbols * tmpl.ofdm.pri)}};
    SweepResult out;
    out.kind = "overcrowding";

    const Vec2 eve = tmpl.topology.eve;
    const Vec2 bob = tmpl.topology.bob;
    const double d_eb = norm(eve - bob);
    const double lambda = kSpeedOfLight / tmpl.ofdm.carrier;
    const cplx eve_los = path_gain_los(eve, bob, tmpl.ofdm.carrier);
    const double dt = tmpl.ofdm.sample_interval();

    int point_index = 0;
    for (double pfa : opt.overcrowd_pfa) {
        char series[32];
        std::snprintf(series, sizeof(series), "pfa=%.0e", pfa);
        for (int l_count : opt.overcrowd_targets) {
            out.points.push_back(run_point(
                tmpl, point_index++, double(l_count), series, opt,
                [&, pfa, l_count](Scenario& s, Rng& rng) {
                    s.cfar.pfa = pfa;
                    s.topology.targets.clear();
                    for (int i = 0; i < l_count; ++i) {
                        // Scatterer on the Eve-Bob bistatic ellipse at a
                        // relative delay inside the CP budget, echo strength
                        // drawn across the detector's working range.
                        const double rel_m =
                            rng.uniform(4.0, 60.0) * dt * kSpeedOfLight;
                        const double a = (d_eb + rel_m) / 2.0;
                        const double c_f = d_eb / 2.0;
                        const double b = std::sqrt(std::max(a * a - c_f * c_f, 1e-12));
                        const double phi = rng.uniform(0.0, 2.0 * kPi);
                        const Vec2 center = 0.5 * (eve + bob);
                        const Vec2 u = (1.0 / d_eb) * (bob - eve);
                        const Vec2 v{-u[1], u[0]};
                        Target t;
                        t.position = center + (a * std::cos(phi)) * u + (b * std::sin(phi)) * v;
                        // up to fan-blade-tip speeds: spreads the echoes
                        // across Doppler so the map stays resolvable
                        const double speed = rng.uniform(3.0, 30.0);
                        const double th = rng.uniform(0.0, 2.0 * kPi);
                        t.velocity = {speed * std::cos(th), speed * std::sin(th)};
                        const double rel_db = rng.uniform(-69.0, -46.0);
                        const double want = std::abs(eve_los) * std::pow(10.0, rel_db / 20.0);
                        const double d1 = norm(t.position - eve);
                        const double d2 = norm(t.position - bob);
                        const double root = want * std::pow(4.0 * kPi, 1.5) * d1 * d2 / lambda;
                        t.rcs = root * root;
                        s.topology.targets.push_back(t);
                    }
                }));
        }
    }
    return out;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

void export_sweep(const SweepResult& result, const std::filesystem::path& out_dir,
                  bool export_trials) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    {
        std::ofstream jsonl(out_dir / "metrics.jsonl");
        if (!jsonl) throw IoError("cannot write " + (out_dir / "metrics.jsonl").string());
        for (const auto& p : result.points) {
            nlohmann::json rec;
            rec["sweep"] = result.kind;
            rec["series"] = p.series;
            rec["x"] = p.x;
            rec["trials"] = p.trials;
            rec["real_total"] = p.real_total;
            rec["real_detected"] = p.real_detected;
            rec["pd_real"] = p.pd_real();
            const Interval ri = wilson_interval(p.real_detected, p.real_total);
            rec["pd_real_ci"] = {ri.lo, ri.hi};
            rec["artificial_total"] = p.artificial_total;
            rec["artificial_detected"] = p.artificial_detected;
            rec["pd_artificial"] = p.pd_artificial();
            const Interval ai = wilson_interval(p.artificial_detected, p.artificial_total);
            rec["pd_artificial_ci"] = {ai.lo, ai.hi};
            rec["mdr_real"] = p.mdr_real();
            rec["dr_artificial"] = p.dr_artificial();
            rec["mean_detection_count"] = p.mean_detection_count();
            rec["infeasible"] = p.infeasible;
            jsonl << rec.dump() << "\n";
        }
    }

    {
        std::ofstream csv(out_dir / (result.kind + ".csv"));
        if (!csv) throw IoError("cannot write sweep csv");
        csv << "x,series,value,ci_low,ci_high\n";
        for (const auto& p : result.points) {
            const Interval ri = wilson_interval(p.real_detected, p.real_total);
            const Interval ai = wilson_interval(p.artificial_detected, p.artificial_total);
            if (result.kind == "mdr_dr") {
                csv << fmt_double(p.x) << ",mdr_real/" << p.series << "," << fmt_double(p.mdr_real())
                    << "," << fmt_double(1.0 - ri.hi) << "," << fmt_double(1.0 - ri.lo) << "\n";
                csv << fmt_double(p.x) << ",dr_artificial/" << p.series << ","
                    << fmt_double(p.dr_artificial()) << "," << fmt_double(ai.lo) << ","
                    << fmt_double(ai.hi) << "\n";
            } else if (result.kind == "overcrowding") {
                csv << fmt_double(p.x) << ",mean_count/" << p.series << ","
                    << fmt_double(p.mean_detection_count()) << ",,\n";
            } else {
                csv << fmt_double(p.x) << ",pd_real/" << p.series << "," << fmt_double(p.pd_real())
                    << "," << fmt_double(ri.lo) << "," << fmt_double(ri.hi) << "\n";
                csv << fmt_double(p.x) << ",pd_artificial/" << p.series << ","
                    << fmt_double(p.pd_artificial()) << "," << fmt_double(ai.lo) << ","
                    << fmt_double(ai.hi) << "\n";
            }
        }
    }

    if (export_trials) {
        std::ofstream trials(out_dir / "trials.jsonl");
        if (!trials) throw IoError("cannot write trials.jsonl");
        for (size_t pi = 0; pi < result.points.size(); ++pi) {
            const auto& p = result.points[pi];
            for (size_t t = 0; t < p.trial_records.size(); ++t) {
                const auto& r = p.trial_records[t];
                nlohmann::json rec;
                rec["point"] = pi;
                rec["series"] = p.series;
                rec["x"] = p.x;
                rec["trial"] = t;
                rec["real_total"] = r.real_total;
                rec["real_detected"] = r.real_detected;
                rec["artificial_total"] = r.artificial_total;
                rec["artificial_detected"] = r.artificial_detected;
                rec["detections"] = r.detections;
                rec["infeasible"] = r.infeasible;
                trials << rec.dump() << "\n";
            }
        }
    }
}

void export_snapshot(const SnapshotResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    export_rdm(result.rdm, out_dir / "rdm.f32");

    nlohmann::json j;
    j["sync"] = {{"sync_sample", result.sync.sync_sample},
                 {"cfo_estimate_hz", result.sync.cfo_estimate},
                 {"cfo_applied_hz", result.eta_applied_hz},
                 {"locked_to", to_string(result.sync.locked_to)}};
    j["alignment_case"] = to_string(result.alignment);
    j["alignment_offset_s"] = result.alignment_offset_s;
    j["jammed"] = result.jammed;
    j["jam_infeasible"] = result.jam_infeasible;
    if (result.jam_infeasible) j["failure_reason"] = result.failure_reason;
    nlohmann::json dets = nlohmann::json::array();
    for (const auto& d : result.detections)
        dets.push_back({{"range_bin", d.range_bin},
                        {"doppler_bin", d.doppler_bin},
                        {"magnitude", d.magnitude}});
    j["detections"] = dets;
    nlohmann::json truths = nlohmann::json::array();
    for (const auto& t : result.truths) {
        const char* kind = t.kind == TruthKind::real ? "real"
                           : t.kind == TruthKind::artificial ? "artificial"
                           : t.kind == TruthKind::combined ? "combined"
                                                           : "reference";
        truths.push_back({{"kind", kind},
                          {"range_bin", t.range_bin},
                          {"doppler_bin", t.doppler_bin},
                          {"attributable", t.attributable}});
    }
    j["truth_table"] = truths;
    j["association"] = {{"real_total", result.association.real_total},
                        {"real_detected", result.association.real_detected},
                        {"artificial_total", result.association.artificial_total},
                        {"artificial_detected", result.association.artificial_detected},
                        {"detection_count", result.association.detection_count}};

    std::ofstream out(out_dir / "snapshot.json");
    if (!out) throw IoError("cannot write snapshot.json");
    out << j.dump(2) << "\n";
}

}  // namespace sensejam
