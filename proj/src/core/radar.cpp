#include "radar.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "fft.hpp"
#include "json.hpp"

namespace sensejam {

Grid estimate_ctf(const Grid& received, const Grid& training) {
    if (received.q != training.q || received.m != training.m)
        throw ConfigError("estimate_ctf: grid shapes differ");
    Grid h(received.q, received.m);
    for (size_t i = 0; i < h.data.size(); ++i) {
        if (training.data[i] == cplx{0.0, 0.0})
            throw ConfigError("estimate_ctf: training grid contains a zero entry");
        h.data[i] = received.data[i] / training.data[i];
    }
    return h;
}

namespace {

std::vector<double> window_coeffs(RdmWindow w, int n) {
    std::vector<double> c(size_t(n), 1.0);
    if (w == RdmWindow::blackman && n > 1) {
        for (int i = 0; i < n; ++i) {
            const double x = 2.0 * kPi * i / (n - 1);
            c[size_t(i)] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
        }
    }
    return c;
}

}  // namespace

Rdm compute_rdm(const OfdmConfig& cfg, const Grid& ctf, RdmWindow window) {
    if (ctf.q != cfg.q || ctf.m != cfg.symbols)
        throw ConfigError("compute_rdm: grid shape does not match the configuration");
    Rdm rdm;
    rdm.window = window;
    rdm.range_bin_m = kSpeedOfLight * cfg.sample_interval();
    rdm.speed_bin_mps = kSpeedOfLight / (cfg.carrier * cfg.symbols * cfg.pri);
    rdm.values = Grid(cfg.q, cfg.symbols);

    const auto wr = window_coeffs(window, cfg.q);
    const auto wd = window_coeffs(window, cfg.symbols);

    // range: unitary inverse transform over q, per symbol
    std::vector<cplx> col(size_t(cfg.q));
    for (int mi = 0; mi < cfg.symbols; ++mi) {
        const auto src = ctf.column(mi);
        for (int qi = 0; qi < cfg.q; ++qi) col[size_t(qi)] = src[size_t(qi)] * wr[size_t(qi)] * wd[size_t(mi)];
        fft_inverse_unitary(col);
        std::copy(col.begin(), col.end(), rdm.values.column(mi).begin());
    }
    // Doppler: unitary forward transform over m, per range bin
    std::vector<cplx> row(size_t(cfg.symbols));
    for (int qi = 0; qi < cfg.q; ++qi) {
        for (int mi = 0; mi < cfg.symbols; ++mi) row[size_t(mi)] = rdm.values.at(qi, mi);
        fft_forward_unitary(row);
        for (int mi = 0; mi < cfg.symbols; ++mi) rdm.values.at(qi, mi) = row[size_t(mi)];
    }
    return rdm;
}

void CfarConfig::validate() const {
    if (!(pfa > 0.0 && pfa < 1.0)) throw ConfigError("cfar: pfa must lie in (0, 1)");
    if (!(os_rank > 0.0 && os_rank <= 1.0)) throw ConfigError("cfar: os_rank must lie in (0, 1]");
    if (guard_cells < 0 || training_cells < 1) throw ConfigError("cfar: bad window sizes");
    if (training_count() < 4) throw ConfigError("cfar: need at least 4 training cells");
}

int CfarConfig::os_index() const {
    const int n = training_count();
    return std::clamp(int(std::lround(os_rank * n)), 1, n);
}

double os_cfar_alpha(const CfarConfig& cfg) {
    cfg.validate();
    const int n = cfg.training_count();
    const int k = cfg.os_index();
    auto log_pfa = [&](double alpha) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i)
            acc += std::log(double(n - i)) - std::log(double(n - i) + alpha);
        return acc;
    };
    const double target = std::log(cfg.pfa);
    double lo = 1e-6, hi = 1.0;
    while (log_pfa(hi) > target) hi *= 2.0;  // Pfa decreases with alpha
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (log_pfa(mid) > target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

inline int wrap_index(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

}  // namespace

std::vector<Detection> os_cfar(const Rdm& rdm, const CfarConfig& cfg) {
    cfg.validate();
    const int q = rdm.values.q;
    const int m = rdm.values.m;
    const int g = cfg.guard_cells;
    const int t = cfg.training_cells;
    const int outer = g + t;
    if (q <= 2 * outer || m <= 2 * outer)
        throw ConfigError("os_cfar: grid smaller than the CFAR kernel");

    std::vector<double> power(size_t(q) * size_t(m));
    for (int mi = 0; mi < m; ++mi)
        for (int qi = 0; qi < q; ++qi)
            power[size_t(mi) * q + qi] = std::norm(rdm.values.at(qi, mi));
    auto pw = [&](int r, int d) { return power[size_t(wrap_index(d, m)) * q + wrap_index(r, q)]; };

    const double alpha = os_cfar_alpha(cfg);
    const int k = cfg.os_index();
    std::vector<double> training(static_cast<size_t>(cfg.training_count()));
    std::vector<Detection> out;

    for (int d = 0; d < m; ++d) {
        for (int r = 0; r < q; ++r) {
            const double p = power[size_t(d) * q + r];
            if (p <= 0.0) continue;
            // cheap gate first: maximum of the guard box
            bool local_max = true;
            for (int dr = -g; dr <= g && local_max; ++dr)
                for (int dd = -g; dd <= g; ++dd) {
                    if (dr == 0 && dd == 0) continue;
                    if (pw(r + dr, d + dd) > p) {
                        local_max = false;
                        break;
                    }
                }
            if (!local_max) continue;

            size_t idx = 0;
            for (int dr = -outer; dr <= outer; ++dr)
                for (int dd = -outer; dd <= outer; ++dd) {
                    if (std::max(std::abs(dr), std::abs(dd)) <= g) continue;
                    training[idx++] = pw(r + dr, d + dd);
                }
            std::nth_element(training.begin(), training.begin() + (k - 1), training.end());
            const double noise_level = training[size_t(k - 1)];
            if (p > alpha * noise_level)
                out.push_back({r, d, std::sqrt(p)});
        }
    }
    return out;
}

AssociationResult associate(const std::vector<Detection>& detections,
                            const std::vector<TruthEntry>& truths, int doppler_size,
                            int tol_range, int tol_doppler) {
    if (tol_range < 0 || tol_doppler < 0) throw ConfigError("associate: negative tolerance");
    AssociationResult res;
    res.detection_count = int(detections.size());
    for (const auto& t : truths) {
        if (t.kind == TruthKind::real) ++res.real_total;
        if (t.kind == TruthKind::artificial) ++res.artificial_total;
        if (t.kind == TruthKind::combined) ++res.combined_total;
    }

    std::vector<const Detection*> sorted;
    sorted.reserve(detections.size());
    for (const auto& d : detections) sorted.push_back(&d);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Detection* a, const Detection* b) { return a->magnitude > b->magnitude; });

    std::vector<bool> taken(truths.size(), false);
    for (const auto* det : sorted) {
        int best = -1;
        for (size_t i = 0; i < truths.size(); ++i) {
            if (taken[i] || !truths[i].attributable) continue;
            const int dr = std::abs(det->range_bin - truths[i].range_bin);
            int dd = std::abs(det->doppler_bin - truths[i].doppler_bin);
            dd = std::min(dd, doppler_size - dd);
            if (dr <= tol_range && dd <= tol_doppler) {
                best = int(i);
                break;
            }
        }
        if (best < 0) continue;
        taken[size_t(best)] = true;
        switch (truths[size_t(best)].kind) {
            case TruthKind::real: ++res.real_detected; break;
            case TruthKind::artificial: ++res.artificial_detected; break;
            case TruthKind::combined: ++res.combined_detected; break;
            default: break;
        }
    }
    return res;
}

void export_rdm(const Rdm& rdm, const std::filesystem::path& path) {
    const int q = rdm.values.q;
    const int m = rdm.values.m;
    std::vector<float> mag(size_t(q) * size_t(m));
    for (int r = 0; r < q; ++r) {
        for (int j = 0; j < m; ++j) {
            const int d = wrap_index(j - m / 2, m);  // DC centered on the speed axis
            const double a = std::abs(rdm.values.at(r, d));
            mag[size_t(r) * m + j] = float(20.0 * std::log10(std::max(a, 1e-300)));
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(mag.data()), std::streamsize(mag.size() * sizeof(float)));
    if (!out) throw IoError("short write to " + path.string());

    nlohmann::json meta;
    meta["q"] = q;
    meta["m"] = m;
    meta["range_bin_m"] = rdm.range_bin_m;
    meta["speed_bin_mps"] = rdm.speed_bin_mps;
    meta["window"] = rdm.window == RdmWindow::blackman ? "blackman" : "rectangular";
    std::ofstream side(path.string() + ".json");
    if (!side) throw IoError("cannot write sidecar for " + path.string());
    side << meta.dump(2) << "\n";
}

RdmFile import_rdm(const std::filesystem::path& path) {
    std::ifstream side(path.string() + ".json");
    if (!side) throw IoError("missing sidecar for " + path.string());
    nlohmann::json meta = nlohmann::json::parse(side);
    RdmFile f;
    f.q = meta.at("q").get<int>();
    f.m = meta.at("m").get<int>();
    f.range_bin_m = meta.at("range_bin_m").get<double>();
    f.speed_bin_mps = meta.at("speed_bin_mps").get<double>();
    f.window = meta.at("window").get<std::string>();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    f.magnitude_db.resize(size_t(f.q) * size_t(f.m));
    in.read(reinterpret_cast<char*>(f.magnitude_db.data()),
            std::streamsize(f.magnitude_db.size() * sizeof(float)));
    if (!in) throw IoError("short read from " + path.string());
    return f;
}

}  // namespace sensejam
