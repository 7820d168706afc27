#pragma once

#include <random>
#include <string>

#include "zakotfs/lattice.hpp"

namespace zakotfs {

/**
 * Deterministic RNG for channel draws and noise. Gaussians come from
 * Box-Muller over explicitly-constructed uniforms so that a given seed is
 * bit-reproducible across platforms and compilers.
 */
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    /// independent stream for trial t of a run seeded with `master`
    static Rng for_trial(uint64_t master, uint64_t trial);

    double uniform();  // [0, 1)
    double gaussian();
    cplx complex_gaussian(double variance);  // CN(0, variance)
    uint32_t bit() { return static_cast<uint32_t>(engine_()) & 1u; }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/** One resolvable propagation path. */
struct Path {
    cplx gain;
    double delay = 0.0;    // s
    double doppler = 0.0;  // Hz

    double delay_bins(const LatticeParams& p) const { return delay * p.M * p.delta_f; }
    double doppler_bins(const LatticeParams& p) const { return doppler * p.N * p.T; }
    long sample_shift(const LatticeParams& p) const {
        return static_cast<long>(std::floor(delay * p.sample_rate() + 0.5));  // round half up
    }
};

struct PathSet {
    std::vector<Path> paths;

    double max_delay() const;
    double max_abs_doppler() const;
    /// tau_max < T and |nu|_max < delta_f (window-width conditions are separate)
    bool crystalline(const LatticeParams& p) const {
        return max_delay() < p.T && max_abs_doppler() < p.delta_f;
    }
};

/** Tapped power-delay profile, first tap at 0 us / 0 dB. */
struct PowerDelayProfile {
    struct Tap {
        double delay_us = 0.0;
        double power_db = 0.0;
    };
    std::vector<Tap> taps;
    std::string name;

    void validate() const;
};

/// Six-tap ITU Vehicular-A profile.
PowerDelayProfile eva_profile();

/// {name, taps: [{delay_us, power_db}, ...]}
PowerDelayProfile profile_from_json(const std::string& json_text);

/**
 * Random channel realization: per-path complex Gaussian gains with the dB
 * profile normalized to unit total mean power, Dopplers nu_max * cos(theta)
 * with theta ~ U[0, 2pi), delays fixed from the profile.
 */
PathSet draw_channel(Rng& rng, const PowerDelayProfile& profile, double nu_max);

/// out[n] = s[(n - shift) mod S]
CVec cyclic_shift(const CVec& s, long shift);
/// out[n] = s[n] e^{j 2 pi n k_nu / S}, k_nu in cycles per frame
CVec doppler_ramp(const CVec& s, double k_nu);
/// r = sum_q h_q J_{shift_q} D_{k_nu,q} s  (ramp before shift)
CVec apply_channel(const CVec& s, const PathSet& paths, const LatticeParams& params);

CVec add_awgn(const CVec& r, double sigma2, Rng& rng);

struct CrystallineReport {
    bool delay_ok = false;    // tau_max < T
    bool doppler_ok = false;  // |nu|_max < delta_f
    bool freq_window_ok = false;  // W_A / delta_f >= 10
    bool time_window_ok = false;  // W_B / T >= 10
    double freq_ratio = 0.0;
    double time_ratio = 0.0;
    bool all() const { return delay_ok && doppler_ok && freq_window_ok && time_window_ok; }
};

CrystallineReport crystalline_check(const PathSet& paths, const LatticeParams& params, double W_A,
                                    double W_B);

}  // namespace zakotfs
