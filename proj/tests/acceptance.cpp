// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and trial counts are fixed here, not tuned at runtime.
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "core/channel.hpp"
#include "core/harness.hpp"
#include "core/jammer.hpp"
#include "core/radar.hpp"

using namespace sensejam;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %2d: %-28s %s\n", pass ? "PASS" : "FAIL", number, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

OfdmConfig sweep_ofdm() {
    OfdmConfig cfg;  // stock table values, Monte Carlo PRI
    cfg.pri = 8 * cfg.symbol_duration();
    cfg.validate();
    return cfg;
}

Scenario base_scenario() {
    Scenario sc = default_scenario();
    sc.ofdm = sweep_ofdm();
    return sc;
}

// ---- criterion 1: chain vs closed form --------------------------------

struct OracleScene {
    Scenario scenario;
    double alignment_offset_s = 0.0;
};

OracleScene random_oracle_scene(Rng& rng, bool preceding) {
    Scenario sc = base_scenario();
    sc.topology.targets.clear();
    const OfdmConfig& cfg = sc.ofdm;
    const double dt = cfg.sample_interval();

    // Targets whose relative delays stay inside the cyclic-prefix budget for
    // both bistatic channels, with Doppler below the per-symbol model bound.
    const int n_targets = int(rng.uniform_int(1, 2));
    int placed = 0, guard = 0;
    while (placed < n_targets && guard++ < 400) {
        Target t;
        t.position = {rng.uniform(-6.0, 16.0), rng.uniform(0.5, 16.0)};
        const double rel_ab = bistatic_delay(sc.topology.alice, sc.topology.bob, t.position) -
                              bistatic_delay(sc.topology.alice, sc.topology.bob, std::nullopt);
        const double rel_eb = bistatic_delay(sc.topology.eve, sc.topology.bob, t.position) -
                              bistatic_delay(sc.topology.eve, sc.topology.bob, std::nullopt);
        if (rel_ab < 4 * dt || rel_ab > 30 * dt) continue;
        if (rel_eb < 2 * dt || rel_eb > 30 * dt) continue;
        if (norm(t.position - sc.topology.alice) < 1.0 ||
            norm(t.position - sc.topology.bob) < 1.0 || norm(t.position - sc.topology.eve) < 1.0)
            continue;
        const double speed = rng.uniform(0.2, 1.8);
        const double th = rng.uniform(0.0, 2.0 * kPi);
        t.velocity = {speed * std::cos(th), speed * std::sin(th)};
        t.rcs = rng.uniform(0.5, 4.0);
        sc.topology.targets.push_back(t);
        ++placed;
    }

    sc.alice_cfo_hz = rng.uniform(-0.3, 0.3) * 1e-6 * cfg.carrier;
    StrategyConfig strat;
    strat.inject = StrategyConfig::Inject::overcrowd_a1;
    strat.invalidate = preceding ? StrategyConfig::Invalidate::preceding_b1
                                 : StrategyConfig::Invalidate::forced_sync_b2;
    strat.jsr_db = rng.uniform(6.0, 15.0);
    const double delta_ppm = rng.uniform(0.5, 6.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    strat.eve_cfo_hz = sc.alice_cfo_hz + delta_ppm * 1e-6 * cfg.carrier;
    const int n_art = int(rng.uniform_int(1, 2));
    for (int i = 0; i < n_art; ++i) {
        ArtificialTarget t;
        t.gain = rng.cgaussian(0.5);
        t.delay = double(rng.uniform_int(3, 40)) * dt;
        t.doppler = double(rng.uniform_int(-10, 10)) / (cfg.symbols * cfg.pri);
        strat.targets.push_back(t);
    }
    sc.jammer = strat;

    OracleScene scene;
    scene.scenario = sc;
    // preceding jamming fixes its own timing; overlap scenes stay on the
    // jammer-first side so every delay sits inside the cyclic span
    scene.alignment_offset_s = preceding ? 0.0 : -double(rng.uniform_int(0, 20)) * dt;
    return scene;
}

double oracle_scene_nrmse_db(const OracleScene& scene, uint64_t seed) {
    const Scenario& sc = scene.scenario;
    SnapshotOptions opt;
    opt.noise = false;
    opt.alignment_offset_s = scene.alignment_offset_s;
    const auto r = run_snapshot(sc, seed, opt);

    auto alice_paths = build_paths(sc.topology, sc.topology.alice, sc.topology.bob, sc.ofdm.carrier);
    auto eve_paths = build_paths(sc.topology, sc.topology.eve, sc.topology.bob, sc.ofdm.carrier);
    const double rate = sc.ofdm.bandwidth;
    for (auto& p : alice_paths) p.delay = double(std::llround(p.delay * rate)) / rate;
    for (auto& p : eve_paths) p.delay = double(std::llround(p.delay * rate)) / rate;

    const StrategyConfig& strat = *sc.jammer;
    Grid hbar = make_artificial_ctf(sc.ofdm, strat.targets);
    double content = 0.0;
    for (const auto& v : hbar.data) content += std::norm(v);
    content /= double(hbar.data.size());
    const double scale = std::sqrt(std::pow(10.0, *strat.jsr_db / 10.0) *
                                   std::norm(alice_paths[0].gain) /
                                   (std::norm(eve_paths[0].gain) * content));

    JammedCtfInputs in;
    in.eve_bob_paths = eve_paths;
    for (auto& p : in.eve_bob_paths) p.gain *= scale;
    in.artificial = strat.targets;
    in.alice_bob_paths = alice_paths;
    in.eve_tx_start_s = r.eve_tx_start_s;
    in.eta_w = sc.alice_cfo_hz - r.eta_applied_hz;
    in.tau_prime = double(r.sync.sync_sample) * sc.ofdm.sample_interval();
    in.alignment = r.alignment;
    const Grid s = make_training_grid(sc.ofdm, sc.training_seed);
    const Grid oracle = analytic_jammed_ctf(sc.ofdm, in, s.column(0));

    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < oracle.data.size(); ++i) {
        num += std::norm(r.ctf.data[i] - oracle.data[i]);
        den += std::norm(oracle.data[i]);
    }
    return 10.0 * std::log10(num / den);
}

bool criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(0xC1);
    double worst = -1e9;
    int case1 = 0, case2 = 0;
    for (int i = 0; i < 50; ++i) {
        const bool preceding = i % 2 == 0;
        const OracleScene scene = random_oracle_scene(rng, preceding);
        const double nrmse = oracle_scene_nrmse_db(scene, 1000 + uint64_t(i));
        worst = std::max(worst, nrmse);
        (preceding ? case1 : case2)++;
    }
    const double elapsed = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "worst NRMSE %.1f dB over %d case-1 + %d case-2 scenes (limit -40), %.1f s",
                  worst, case1, case2, elapsed);
    const bool pass = worst <= -40.0 && elapsed < 120.0;
    report(1, "chain vs closed form", pass, buf);
    return pass;
}

// ---- criterion 2: grid model equivalence --------------------------------

bool criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    OfdmConfig cfg = sweep_ofdm();
    const Grid training = make_training_grid(cfg, 0x57a71c5eedULL);
    const auto tx = modulate(cfg, training);
    Rng rng(0xC2);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<PathParams> paths;
        const int64_t n0 = rng.uniform_int(0, 16);
        PathParams los;
        los.gain = cplx{0.5, 0.2} * (0.5 + rng.uniform());
        los.delay = n0 * cfg.sample_interval();
        paths.push_back(los);
        const int extra = int(rng.uniform_int(1, 4));
        for (int i = 0; i < extra; ++i) {
            PathParams p;
            p.gain = rng.cgaussian(0.3);
            p.delay = (n0 + rng.uniform_int(1, cfg.q_cp - 20)) * cfg.sample_interval();
            paths.push_back(p);
        }
        PropagationSpec spec;
        spec.paths = paths;
        Rng prng(0);
        const auto rx = propagate(cfg, tx, spec, prng);
        const Grid ctf = estimate_ctf(demodulate(cfg, rx, n0), training);
        std::vector<PathParams> rel = paths;
        for (auto& p : rel) p.delay -= paths[0].delay;
        const Grid expect = build_ctf(cfg, rel);
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < expect.data.size(); ++i) {
            num += std::norm(ctf.data[i] - expect.data[i]);
            den += std::norm(expect.data[i]);
        }
        worst = std::max(worst, std::sqrt(num / den));
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "worst relative error %.2e over 20 path sets (limit 1e-9), %.1f s", worst,
                  seconds_since(t0));
    const bool pass = worst <= 1e-9;
    report(2, "grid-model equivalence", pass, buf);
    return pass;
}

// ---- criterion 3: ICI closed form ---------------------------------------

bool criterion3() {
    OfdmConfig cfg;  // Q = 1024
    bool pass = true;
    std::string why;

    const auto zero = ici_matrices(cfg, 0.0);
    double worst_zero = 0.0;
    for (int q = 0; q < cfg.q; q += 37)
        for (int i = 0; i < cfg.q; i += 41) {
            const cplx expect = q == i ? cplx{double(cfg.q), 0.0} : cplx{0.0, 0.0};
            worst_zero = std::max(worst_zero, std::abs(zero.p(q, i) - expect));
        }
    if (worst_zero > 1e-9) {
        pass = false;
        why += "zero-limit deviates; ";
    }
    for (const auto& v : zero.lambda_diag)
        if (std::abs(v - cplx{1.0, 0.0}) > 1e-12) pass = false;

    const double half = 0.5 / (cfg.q * cfg.sample_interval());
    const auto half_model = ici_matrices(cfg, half);
    const double diag = std::abs(half_model.p(17, 17));
    const double expect_diag = 2.0 * cfg.q / kPi;
    if (std::abs(diag - expect_diag) / expect_diag > 0.005) {
        pass = false;
        why += "half-subcarrier diagonal off; ";
    }

    Rng rng(0xC3);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const double eta_w = rng.uniform(-0.45, 0.45) / cfg.sample_interval() / cfg.q;
        const auto model = ici_matrices(cfg, eta_w);
        for (int probe = 0; probe < 40; ++probe) {
            const int q = int(rng.uniform_int(0, cfg.q - 1));
            const int i = int(rng.uniform_int(0, cfg.q - 1));
            cplx direct{0.0, 0.0};
            const double theta =
                2.0 * kPi * (double(q - i) / cfg.q - eta_w * cfg.sample_interval());
            for (int n = 0; n < cfg.q; ++n) direct += cis(theta * n);
            worst = std::max(worst, std::abs(model.p(q, i) - direct) / double(cfg.q));
        }
    }
    if (worst > 1e-9) {
        pass = false;
        why += "entries deviate from the geometric sum; ";
    }

    char buf[200];
    std::snprintf(buf, sizeof(buf), "diag %.2f vs 2Q/pi %.2f at 10 random residuals%s%s", diag,
                  expect_diag, why.empty() ? "" : " [", why.empty() ? "" : (why + "]").c_str());
    report(3, "ICI closed form", pass, buf);
    return pass;
}

// ---- criteria 4-6: Monte Carlo sweeps -----------------------------------

const SweepPoint* find_point(const SweepResult& r, const std::string& series, double x) {
    for (const auto& p : r.points)
        if (p.series == series && std::abs(p.x - x) < 1e-9) return &p;
    return nullptr;
}

bool criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario sc = base_scenario();
    SweepOptions opt;
    opt.trials = 500;
    opt.base_seed = 0xF17;
    opt.cfo_ppm_values = {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0};

    opt.spacing = "312k";
    const auto wide = sweep_pd_vs_cfo(sc, opt);
    opt.spacing = "78k";
    const auto narrow = sweep_pd_vs_cfo(sc, opt);

    bool pass = true;
    const auto* w1 = find_point(wide, "312k", 1.0);
    const auto* w6 = find_point(wide, "312k", 6.0);
    const auto* w2 = find_point(wide, "312k", 2.0);
    const auto* n2 = find_point(narrow, "78k", 2.0);
    if (!w1 || !w6 || !w2 || !n2) {
        report(4, "PD vs CFO trend", false, "missing sweep points");
        return false;
    }
    double min_art = 1.0;
    for (const auto& p : wide.points) min_art = std::min(min_art, p.pd_artificial());
    for (const auto& p : narrow.points) min_art = std::min(min_art, p.pd_artificial());
    if (w1->pd_real() < 0.9) pass = false;
    if (w6->pd_real() > 0.2) pass = false;
    if (min_art < 0.8) pass = false;
    if (!(n2->pd_real() < w2->pd_real())) pass = false;

    const double elapsed = seconds_since(t0);
    if (elapsed >= 900.0) pass = false;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "312k: pd_real(1ppm)=%.3f (>=0.9), pd_real(6ppm)=%.3f (<=0.2); knee shift "
                  "pd78(2)=%.3f < pd312(2)=%.3f; min pd_art=%.3f; %.0f s",
                  w1->pd_real(), w6->pd_real(), n2->pd_real(), w2->pd_real(), min_art, elapsed);
    report(4, "PD vs CFO trend", pass, buf);
    return pass;
}

bool criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario sc = base_scenario();
    SweepOptions opt;
    opt.trials = 500;
    opt.base_seed = 0xF18;
    opt.jsr_values_db = {-5, -2, 0, 3, 6, 9, 12, 15};
    const auto r = sweep_pd_vs_jsr(sc, opt);

    bool pass = true;
    std::string why;
    const auto* h12 = find_point(r, "high", 12.0);
    const auto* h15 = find_point(r, "high", 15.0);
    if (!h12 || !h15) {
        report(5, "PD vs JSR crossover", false, "missing sweep points");
        return false;
    }
    if (h12->pd_artificial() < 0.9 || h15->pd_artificial() < 0.9) {
        pass = false;
        why += "high-region pd_artificial low; ";
    }
    if (h12->pd_real() > 0.2 || h15->pd_real() > 0.2) {
        pass = false;
        why += "high-region pd_real high; ";
    }
    for (const char* series : {"low", "med", "high"}) {
        const auto* lo = find_point(r, series, -5.0);
        if (!lo || lo->pd_real() < 0.9) {
            pass = false;
            why += std::string(series) + ": pd_real(-5) low; ";
        }
    }
    // monotone within the confidence intervals
    for (const char* series : {"low", "med", "high"}) {
        std::vector<const SweepPoint*> curve;
        for (const auto& p : r.points)
            if (p.series == series) curve.push_back(&p);
        for (size_t i = 1; i < curve.size(); ++i) {
            const auto a_real =
                wilson_interval(curve[i - 1]->real_detected, curve[i - 1]->real_total);
            const auto b_real = wilson_interval(curve[i]->real_detected, curve[i]->real_total);
            const double slack_r = (a_real.hi - a_real.lo) / 2 + (b_real.hi - b_real.lo) / 2;
            if (curve[i]->pd_real() > curve[i - 1]->pd_real() + slack_r) {
                pass = false;
                why += std::string(series) + ": pd_real not monotone; ";
            }
            const auto a_art = wilson_interval(curve[i - 1]->artificial_detected,
                                               curve[i - 1]->artificial_total);
            const auto b_art =
                wilson_interval(curve[i]->artificial_detected, curve[i]->artificial_total);
            const double slack_a = (a_art.hi - a_art.lo) / 2 + (b_art.hi - b_art.lo) / 2;
            if (curve[i]->pd_artificial() < curve[i - 1]->pd_artificial() - slack_a) {
                pass = false;
                why += std::string(series) + ": pd_artificial not monotone; ";
            }
        }
    }

    // calibration: at 0 dB JSR the jammer-to-noise ratio equals the 30 dB SNR
    Scenario cal = base_scenario();
    StrategyConfig strat;
    strat.jsr_db = 0.0;
    ArtificialTarget t;
    t.gain = {0.5, 0.0};
    t.delay = 8 * cal.ofdm.sample_interval();
    t.doppler = 2.0 / (cal.ofdm.symbols * cal.ofdm.pri);
    strat.targets = {t};
    cal.jammer = strat;
    const Grid training = make_training_grid(cal.ofdm, cal.training_seed);
    auto alice_paths =
        build_paths(cal.topology, cal.topology.alice, cal.topology.bob, cal.ofdm.carrier);
    auto eve_paths = build_paths(cal.topology, cal.topology.eve, cal.topology.bob, cal.ofdm.carrier);
    JamContext ctx;
    ctx.alice_arrival_s = alice_paths[0].delay;
    ctx.eve_bob_los_delay_s = eve_paths[0].delay;
    ctx.alice_los_gain = alice_paths[0].gain;
    ctx.eve_bob_los_gain = eve_paths[0].gain;
    ctx.alice_pos = cal.topology.alice;
    ctx.bob_pos = cal.topology.bob;
    const auto jam = synthesize_jam_signal(cal.ofdm, training, *cal.jammer, ctx);
    const double sigma = noise_std_for_snr(cal.ofdm, alice_paths[0].gain, cal.snr_db);
    double eve_grid_power = 0.0;
    for (const auto& v : jam.tx_grid.data) eve_grid_power += std::norm(v);
    eve_grid_power = eve_grid_power / double(jam.tx_grid.data.size()) * std::norm(eve_paths[0].gain);
    const double snr_db = 10.0 * std::log10(std::norm(alice_paths[0].gain) / (sigma * sigma));
    const double jnr_db = 10.0 * std::log10(eve_grid_power / (sigma * sigma));
    if (std::abs(snr_db - 30.0) > 0.5 || std::abs(jnr_db - 30.0) > 0.5) {
        pass = false;
        why += "calibration off; ";
    }

    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "high: pd_art(12)=%.3f pd_real(12)=%.3f, pd_real(-5)>=0.9 all regions; "
                  "SNR=%.2f JNR=%.2f dB at 0 dB JSR; %.0f s%s%s",
                  h12->pd_artificial(), h12->pd_real(), snr_db, jnr_db, seconds_since(t0),
                  why.empty() ? "" : " [", why.empty() ? "" : (why + "]").c_str());
    report(5, "PD vs JSR crossover", pass, buf);
    return pass;
}

bool criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario sc = base_scenario();
    SweepOptions opt;
    opt.trials = 500;
    opt.base_seed = 0xF19;
    opt.overcrowd_targets = {1, 2, 3, 5};
    opt.overcrowd_pfa = {1e-4, 1e-6, 1e-8};
    const auto r = sweep_overcrowding(sc, opt);

    bool pass = true;
    std::string why;
    char cell[64];
    std::string table;
    for (int l : {1, 2, 3, 5}) {
        const double expect = 2.0 * (l + 1);
        const auto* loose = find_point(r, "pfa=1e-04", double(l));
        const auto* nominal = find_point(r, "pfa=1e-06", double(l));
        const auto* strict = find_point(r, "pfa=1e-08", double(l));
        if (!loose || !nominal || !strict) {
            pass = false;
            why += "missing point; ";
            continue;
        }
        std::snprintf(cell, sizeof(cell), " L=%d:%.2f/%.2f/%.2f", l, loose->mean_detection_count(),
                      nominal->mean_detection_count(), strict->mean_detection_count());
        table += cell;
        if (std::abs(nominal->mean_detection_count() - expect) > 1.0) {
            pass = false;
            why += "nominal off; ";
        }
        if (!(loose->mean_detection_count() > expect)) {
            pass = false;
            why += "loose not above; ";
        }
        if (!(strict->mean_detection_count() < expect)) {
            pass = false;
            why += "strict not below; ";
        }
    }
    char buf[360];
    std::snprintf(buf, sizeof(buf), "counts(1e-4/1e-6/1e-8) vs 2(L+1):%s; %.0f s%s%s", table.c_str(),
                  seconds_since(t0), why.empty() ? "" : " [", why.empty() ? "" : (why + "]").c_str());
    report(6, "overcrowding counts", pass, buf);
    return pass;
}

// ---- criterion 7: CFAR calibration --------------------------------------

bool criterion7() {
    const auto t0 = std::chrono::steady_clock::now();
    OfdmConfig cfg = sweep_ofdm();
    CfarConfig cc;
    cc.pfa = 1e-4;
    const long cells_per_grid = long(cfg.q) * cfg.symbols;
    const int grids = int((100000000 + cells_per_grid - 1) / cells_per_grid);

    std::atomic<long> alarms{0};
    std::atomic<int> next{0};
    auto worker = [&]() {
        long local = 0;
        for (int g = next.fetch_add(1); g < grids; g = next.fetch_add(1)) {
            Rdm rdm;
            rdm.range_bin_m = 1.0;
            rdm.speed_bin_mps = 1.0;
            rdm.values = Grid(cfg.q, cfg.symbols);
            Rng rng = Rng::stream(0xCFA7, uint64_t(g));
            for (auto& v : rdm.values.data) v = rng.cgaussian(1.0);
            local += long(os_cfar(rdm, cc).size());
        }
        alarms += local;
    };
    std::thread t1(worker), t2(worker);
    t1.join();
    t2.join();

    const long total_cells = long(grids) * cells_per_grid;
    const double rate = double(alarms.load()) / double(total_cells);
    const double ratio = rate / cc.pfa;
    bool pass = ratio >= 0.3 && ratio <= 3.0;

    // detection bins invariant under grid scaling
    Rdm rdm;
    rdm.range_bin_m = 1.0;
    rdm.speed_bin_mps = 1.0;
    rdm.values = Grid(cfg.q, cfg.symbols);
    Rng rng(0x5CA1E);
    for (auto& v : rdm.values.data) v = rng.cgaussian(1.0);
    rdm.values.at(100, 30) = {50.0, 0.0};
    rdm.values.at(600, 90) = {30.0, 0.0};
    const auto base = os_cfar(rdm, cc);
    for (auto& v : rdm.values.data) v *= 10.0;
    const auto scaled = os_cfar(rdm, cc);
    bool same = base.size() == scaled.size();
    for (size_t i = 0; same && i < base.size(); ++i)
        same = base[i].range_bin == scaled[i].range_bin &&
               base[i].doppler_bin == scaled[i].doppler_bin;
    if (!same) pass = false;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "false-alarm rate %.3e over %ld cells = %.2fx pfa (in [0.3,3]); scaling %s; %.0f s",
                  rate, total_cells, ratio, same ? "invariant" : "NOT invariant", seconds_since(t0));
    report(7, "CFAR calibration", pass, buf);
    return pass;
}

// ---- criterion 8: synchronization rules ----------------------------------

bool criterion8() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string why;

    // 3 dB forced-synchronization rule over random geometries, noiseless
    int locked = 0;
    {
        Rng rng(0xC8);
        const int geometries = 100;
        for (int g = 0; g < geometries; ++g) {
            Scenario sc = base_scenario();
            const double radius = rng.uniform(4.0, 20.0);
            const double th = rng.uniform(0.2, kPi - 0.2);
            sc.topology.eve = {radius * std::cos(th), radius * std::sin(th)};
            sc.topology.targets.clear();
            StrategyConfig strat;
            strat.invalidate = StrategyConfig::Invalidate::forced_sync_b2;
            strat.jsr_db = rng.uniform(3.0, 15.0);
            ArtificialTarget t;
            t.gain = {0.5, 0.0};
            t.delay = 8 * sc.ofdm.sample_interval();
            t.doppler = 2.0 / (sc.ofdm.symbols * sc.ofdm.pri);
            strat.targets = {t};
            strat.eve_cfo_hz = rng.uniform(-2.0, 2.0) * 1e-6 * sc.ofdm.carrier;
            sc.jammer = strat;
            SnapshotOptions opt;
            opt.noise = false;
            opt.alignment_offset_s = double(rng.uniform_int(-24, 24)) * sc.ofdm.sample_interval();
            const auto res = run_snapshot(sc, 3000 + uint64_t(g), opt);
            const int64_t e0 = int64_t(std::llround(res.eve_arrival_s * sc.ofdm.bandwidth));
            // the rule itself: the receiver locks to the jammer
            if (res.sync.locked_to == LockedTo::eve) ++locked;
            // with clear dominance the correlator apex must also sit on the
            // jammer's arrival; near the 3 dB boundary the combined blob's
            // apex legitimately wanders between the two vertices
            if (*sc.jammer->jsr_db >= 6.0 && std::llabs(res.sync.sync_sample - e0) > 2) {
                pass = false;
                why += "apex off the jammer arrival at clear dominance; ";
            }
        }
        if (locked < 99) {
            pass = false;
            why += "forced-sync rule below 99/100; ";
        }
    }

    // CFO estimator: exact noiseless, sub-100 Hz at 30 dB with the T_o lag
    OfdmConfig cfg = sweep_ofdm();  // stock Q=1024 waveform, Monte Carlo PRI
    const double lag_s = cfg.symbol_duration();
    const double span = 1.0 / lag_s;
    Grid grid = make_training_grid(cfg, 77);
    const double scale = 1.0 / std::sqrt(double(cfg.q + cfg.q_cp));
    for (auto& v : grid.data) v *= scale;
    const auto tx = modulate(cfg, grid);

    auto received = [&](double eta, double noise_std, uint64_t seed) {
        PropagationSpec spec;
        PathParams p;
        p.gain = {1.0, 0.0};
        p.delay = 40 * cfg.sample_interval();
        spec.paths = {p};
        spec.cfo = eta;
        spec.noise_std = noise_std;
        Rng rng(seed);
        return propagate(cfg, tx, spec, rng);
    };

    double worst_rel = 0.0;
    Rng rng(0xC8F);
    for (int t = 0; t < 20; ++t) {
        const double eta = rng.uniform(0.02, 0.49) * span * (rng.uniform() < 0.5 ? -1 : 1);
        const auto rx = received(eta, 0.0, 0);
        const auto corr = lag_autocorr_window(cfg, rx, cfg.symbol_samples(), 0, 128);
        const double est = estimate_cfo(corr, 40, lag_s);
        worst_rel = std::max(worst_rel, std::abs(est - eta) / std::abs(eta));
    }
    if (worst_rel > 1e-6) {
        pass = false;
        why += "noiseless estimator above 1e-6; ";
    }

    const double sigma = std::pow(10.0, -30.0 / 20.0) / std::sqrt(double(cfg.q + cfg.q_cp));
    double worst_hz = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const double eta = rng.uniform(-0.4, 0.4) * span;
        const auto rx = received(eta, sigma, 5000 + uint64_t(t));
        const auto corr = lag_autocorr_window(cfg, rx, cfg.symbol_samples(), 0, 128);
        int64_t best = corr.base_index;
        for (int64_t k = corr.base_index; k < corr.base_index + int64_t(corr.values.size()); ++k)
            if (std::abs(corr.at_abs(k)) > std::abs(corr.at_abs(best))) best = k;
        worst_hz = std::max(worst_hz, std::abs(estimate_cfo(corr, best, lag_s) - eta));
    }
    if (worst_hz >= 100.0) {
        pass = false;
        why += "30 dB error reaches 100 Hz; ";
    }

    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "forced-sync %d/100; noiseless rel err %.1e; worst 30 dB error %.1f Hz over "
                  "1000 trials; %.0f s%s%s",
                  locked, worst_rel, worst_hz, seconds_since(t0), why.empty() ? "" : " [",
                  why.empty() ? "" : (why + "]").c_str());
    report(8, "synchronization rules", pass, buf);
    return pass;
}

// ---- criterion 9: round-trip-time protocols ------------------------------

bool criterion9() {
    Rng rng(0xC9);
    bool pass = true;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        // random device triangle: geometric delays always keep the
        // eavesdropper's reception order consistent
        const Vec2 a{rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
        const Vec2 b{a[0] + rng.uniform(0.5, 200.0), a[1] + rng.uniform(0.5, 200.0)};
        const Vec2 e{rng.uniform(-100.0, 100.0), rng.uniform(100.5, 300.0)};
        const double tau_ab = norm(a - b) / kSpeedOfLight;
        const double tau_be = norm(b - e) / kSpeedOfLight;
        const double tau_ae = norm(a - e) / kSpeedOfLight;
        const double tau_x = rng.uniform(1e-9, 1e-4);
        const auto meas = simulate_rtt_timeline(tau_ab, tau_be, tau_ae, tau_x);
        const auto r = rtt_eavesdrop(meas);
        worst = std::max({worst, std::abs(r.tau_abx - (tau_ab + tau_x)) / (tau_ab + tau_x),
                          std::abs(r.tau_be - tau_be) / tau_be,
                          std::abs(r.tau_ae - tau_ae) / tau_ae});
    }
    if (worst > 1e-9) pass = false;

    double worst_leg = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double tau = rng.uniform(1e-9, 1e-6);
        const double idle = rng.uniform(1e-6, 1e-3);
        const auto est = rtt_legitimate(tau, idle);
        worst_leg = std::max({worst_leg, std::abs(est.alice_estimate - tau) / tau,
                              std::abs(est.bob_estimate - tau) / tau});
    }
    if (worst_leg > 1e-9) pass = false;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "eavesdrop inversion worst rel %.1e, legitimate worst rel %.1e over 1000 each",
                  worst, worst_leg);
    report(9, "round-trip-time protocols", pass, buf);
    return pass;
}

// ---- criterion 10: determinism -------------------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

bool criterion10() {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario sc = base_scenario();
    SweepOptions opt;
    opt.trials = 20;
    opt.base_seed = 0xDE7;
    opt.cfo_ppm_values = {0.5, 5.0};
    opt.export_trials = true;

    auto run_with_threads = [&](int threads, const char* dir_name) {
        SweepOptions o = opt;
        o.threads = threads;
        const auto r = sweep_pd_vs_cfo(sc, o);
        const auto dir = std::filesystem::temp_directory_path() / dir_name;
        std::filesystem::remove_all(dir);
        export_sweep(r, dir, true);
        const std::string all = slurp(dir / "metrics.jsonl") + slurp(dir / "pd_vs_cfo.csv") +
                                slurp(dir / "trials.jsonl");
        std::filesystem::remove_all(dir);
        return all;
    };
    const std::string one = run_with_threads(1, "sensejam_det_1");
    const std::string two = run_with_threads(2, "sensejam_det_2");
    const std::string again = run_with_threads(2, "sensejam_det_3");

    const bool pass = !one.empty() && one == two && two == again;
    char buf[120];
    std::snprintf(buf, sizeof(buf),
                  "%zu export bytes identical across 1/2 workers and reruns, %.0f s", one.size(),
                  seconds_since(t0));
    report(10, "determinism", pass, buf);
    return pass;
}

}  // namespace

int main() {
    std::printf("sensejam acceptance suite\n");
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::printf("%d of 10 criteria passed in %.0f s\n", 10 - g_failures, seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
