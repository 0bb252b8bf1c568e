// Stage-2 receiver processing: CTF estimation, range-Doppler map, OS-CFAR
// detection and detection/truth association.
#pragma once

#include <filesystem>
#include <vector>

#include "config.hpp"
#include "waveform.hpp"

namespace sensejam {

enum class RdmWindow { rectangular, blackman };

struct Rdm {
    Grid values;             // range bin (row) x doppler bin (column)
    double range_bin_m = 0;  // c*T, relative bistatic meters per bin
    double speed_bin_mps = 0;  // c/(f_c*M*T_s) per bin
    RdmWindow window = RdmWindow::blackman;
};

/// Element-wise R ⊘ S. BPSK training keeps the noise variance unchanged.
Grid estimate_ctf(const Grid& received, const Grid& training);

/// Separable window, unitary inverse transform over subcarriers (range) and
/// unitary forward transform over slow time (Doppler).
Rdm compute_rdm(const OfdmConfig& cfg, const Grid& ctf, RdmWindow window = RdmWindow::blackman);

struct CfarConfig {
    double pfa = 1e-6;
    int guard_cells = 2;     // per side, per dimension
    int training_cells = 8;  // per side, per dimension, beyond the guard box
    double os_rank = 0.75;   // ordered-statistic rank fraction

    void validate() const;
    int training_count() const {
        const int outer = 2 * (guard_cells + training_cells) + 1;
        const int inner = 2 * guard_cells + 1;
        return outer * outer - inner * inner;
    }
    int os_index() const;  // k, 1-based rank of the order statistic
};

/// Threshold multiplier alpha solving the OS-CFAR false-alarm relation for
/// exponentially distributed power cells:
///   Pfa(alpha) = prod_{i=0}^{k-1} (N-i)/(N-i+alpha).
double os_cfar_alpha(const CfarConfig& cfg);

struct Detection {
    int range_bin = 0;
    int doppler_bin = 0;  // stored 0..M-1, DC at 0
    double magnitude = 0.0;
};

/// 2D OS-CFAR. A cell is declared iff its power exceeds alpha times the k-th
/// order statistic of its training ring and it is the maximum of its guard
/// box. Both axes wrap: the slow-time DFT is periodic and the range IDFT is
/// too, so the reference peak's mainlobe continues across the range edge.
std::vector<Detection> os_cfar(const Rdm& rdm, const CfarConfig& cfg);

enum class TruthKind { real, artificial, combined, reference };

struct TruthEntry {
    TruthKind kind = TruthKind::real;
    int range_bin = 0;
    int doppler_bin = 0;
    // False when the content is displaced off its attributable cell (apparent
    // Doppler beyond the unambiguous span); such a truth is scored as missed.
    bool attributable = true;
};

struct AssociationResult {
    int real_total = 0, real_detected = 0;
    int artificial_total = 0, artificial_detected = 0;
    int combined_total = 0, combined_detected = 0;
    int detection_count = 0;

    double pd_real() const { return real_total ? double(real_detected) / real_total : 0.0; }
    double pd_artificial() const {
        return artificial_total ? double(artificial_detected) / artificial_total : 0.0;
    }
    double mdr_real() const { return real_total ? 1.0 - pd_real() : 0.0; }
    double dr_artificial() const { return pd_artificial(); }
};

/// Greedy by detection magnitude; a detection confirms at most one truth
/// within ±tol bins per dimension (Doppler distance is circular).
AssociationResult associate(const std::vector<Detection>& detections,
                            const std::vector<TruthEntry>& truths, int doppler_size,
                            int tol_range = 1, int tol_doppler = 1);

/// Raw float32 little-endian row-major magnitude-dB grid (range rows, speed
/// columns, DC centered) plus a JSON sidecar {q, m, range_bin_m,
/// speed_bin_mps, window}.
void export_rdm(const Rdm& rdm, const std::filesystem::path& path);
struct RdmFile {
    int q = 0, m = 0;
    double range_bin_m = 0.0, speed_bin_mps = 0.0;
    std::string window;
    std::vector<float> magnitude_db;  // row-major, DC-centered speed axis
};
RdmFile import_rdm(const std::filesystem::path& path);

}  // namespace sensejam
