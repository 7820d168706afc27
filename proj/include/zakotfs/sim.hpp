#pragma once

#include <optional>
#include <string>

#include "zakotfs/detector.hpp"

namespace zakotfs {

enum class WindowSetKind { Rect, Rrc, Pswf, IotaPswf };
enum class CsiMode { Perfect, Estimated };
enum class NoiseCovMode { White, Colored };
enum class SweepAxis { SnrDb, PdrDb, Guard };

WindowSetKind window_set_from_string(const std::string& s);
std::string to_string(WindowSetKind k);

/** Full run configuration; parsed from a single JSON document with unknown
 *  keys rejected. */
struct SimConfig {
    LatticeParams lattice;

    WindowSetKind window = WindowSetKind::IotaPswf;
    double rolloff = 0.3;
    PswfShape pswf_freq{1.2, 2.0, 1024};
    PswfShape pswf_time{1.3, 2.0, 1024};

    int guard_l = 5;
    int guard_k = 7;
    int pilot_shrink = 2;

    std::string profile = "eva";          // or a JSON file path in profile_file
    std::optional<std::string> profile_file;
    double nu_max_hz = 815.0;

    double pdr_db = 0.0;
    double snr_db = 20.0;
    NoiseCovMode noise_cov = NoiseCovMode::White;
    CsiMode csi = CsiMode::Estimated;

    SweepAxis sweep_axis = SweepAxis::SnrDb;
    std::vector<double> sweep_points{0, 5, 10, 15, 20};

    int trials = 500;
    uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency
    std::string output;

    static SimConfig from_json(const std::string& json_text);
    std::string canonical_json() const;
};

struct SweepPointResult {
    double axis_value = 0.0;
    double ber = 0.0;
    double nmse = 0.0;
    int trials = 0;
    double ber_ci = 0.0;   // 95% normal-approximation half-width
    double nmse_ci = 0.0;
};

struct SimReport {
    std::vector<SweepPointResult> points;
    uint64_t seed = 0;
    uint64_t config_hash = 0;
    double wall_seconds = 0.0;
};

/** Pulse matrix plus the windows it was built from. */
struct WindowedPulseSet {
    PulseMatrix P;
    Window freq_window;
    SampledWindow time_window;
    WindowSetKind kind;
};

WindowedPulseSet build_pulse_set(WindowSetKind kind, const SimConfig& cfg);

/** One link-level trial; returns (ber, nmse). */
struct TrialResult {
    double ber = 0.0;
    double nmse = 0.0;
};

TrialResult run_trial(const WindowedPulseSet& set, const FrameLayout& layout,
                      const PowerDelayProfile& profile, const SimConfig& cfg, double snr_db,
                      double pdr_db, Rng& rng, const CMat* colored_R);

SimReport run_sweep(const SimConfig& cfg);

/** Average PSD over all pulse-matrix columns via zero-padded DFTs, normalized
 *  to unit total power. fft_size is rounded up to a power of two >= 2S. */
struct PsdResult {
    Eigen::VectorXd freq_hz;  // fftshifted axis
    Eigen::VectorXd psd;      // sums to 1
};

PsdResult compute_psd(const PulseMatrix& P, long fft_size = 0);

/// Width (Hz) of the smallest centered interval holding `fraction` of power.
double bandwidth_fraction(const PsdResult& psd, double fraction = 0.99);

struct SpreadingGrid {
    std::string label;
    CMat grid;  // |h| response grid, centered storage for closed-form grids
};

/**
 * Channel-spreading demo: closed-form |h_eff| toy grids (rect and RRC
 * windows, single path at (4, 4.7) bins with M = N = 32, T = delta_f = 1)
 * and Table-II-scale noiseless pilot responses at (15, 7) for the four
 * window kinds.
 */
std::vector<SpreadingGrid> spreading_demo(const SimConfig& cfg);

/// Count of grid cells with |value|^2 above peak * 10^(-threshold_db/10).
int spread_count(const CMat& grid, double threshold_db = 30.0);

void emit_report_csv(const SimReport& report, SweepAxis axis, const std::string& path);
void emit_grid_csv(const CMat& grid, bool centered, const std::string& path);
void emit_psd_csv(const PsdResult& psd, const std::string& path);
void emit_pulse_csv(const CVec& pulse, const LatticeParams& params, const std::string& path);

std::string axis_column_name(SweepAxis axis);

}  // namespace zakotfs
