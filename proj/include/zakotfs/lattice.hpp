#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace zakotfs {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/**
 * Delay-Doppler lattice geometry.
 *
 * M delay bins x N Doppler bins with delay period T and Doppler period
 * delta_f, T * delta_f = 1. The discrete-time frame holds S = L*M*N samples
 * at rate F_s = L*M*delta_f, i.e. one frame of duration N*T with
 * oversampling factor L.
 */
struct LatticeParams {
    int M = 32;
    int N = 16;
    double delta_f = 15e3;  // Hz
    double T = 1.0 / 15e3;  // s
    int L = 10;

    LatticeParams() = default;
    LatticeParams(int M_, int N_, double delta_f_, int L_)
        : M(M_), N(N_), delta_f(delta_f_), T(1.0 / delta_f_), L(L_) {
        validate();
    }

    void validate() const;

    double sample_rate() const { return static_cast<double>(L) * M * delta_f; }
    long sample_count() const { return static_cast<long>(L) * M * N; }
    double frame_duration() const { return N * T; }
    double delay_resolution() const { return T / M; }
    double doppler_resolution() const { return delta_f / N; }
    int grid_size() const { return M * N; }

    double tau_of(long l) const { return static_cast<double>(l) / (M * delta_f); }
    double nu_of(long k) const { return static_cast<double>(k) / (N * T); }
    // physical sample time of storage index n, window-centered convention
    double sample_time(long n) const {
        return (n < (sample_count() + 1) / 2 ? n : n - sample_count()) / sample_rate();
    }
};

/** Integer DD grid index; unbounded, fundamental domain is [0,M) x [0,N). */
struct DDIndex {
    long l = 0;
    long k = 0;
};

/**
 * Embedded-pilot frame geometry: a pilot cell surrounded by a rectangular
 * guard region, with the pilot (read) region shrunk by `pilot_shrink` bins
 * per side. Everything outside the guard region carries data.
 */
class FrameLayout {
public:
    FrameLayout(const LatticeParams& params, DDIndex pilot_pos, int guard_l, int guard_k,
                int pilot_shrink = 2);

    static FrameLayout centered(const LatticeParams& params, int guard_l, int guard_k,
                                int pilot_shrink = 2);

    const DDIndex& pilot_pos() const { return pilot_; }
    int guard_l() const { return g1_; }
    int guard_k() const { return g2_; }
    int pilot_shrink() const { return shrink_; }
    int M() const { return M_; }
    int N() const { return N_; }

    bool in_guard_region(long l, long k) const {
        return std::abs(l - pilot_.l) <= g1_ && std::abs(k - pilot_.k) <= g2_;
    }
    bool in_pilot_region(long l, long k) const {
        return std::abs(l - pilot_.l) <= g1_ - shrink_ && std::abs(k - pilot_.k) <= g2_ - shrink_;
    }
    bool is_data_cell(long l, long k) const { return !in_guard_region(l, k); }

    int data_cell_count() const { return n_data_; }
    /// Data cells in (l, k) lexicographic order; fixes the bit-to-cell map.
    const std::vector<DDIndex>& data_cells() const { return data_cells_; }

private:
    int M_, N_;
    DDIndex pilot_;
    int g1_, g2_, shrink_;
    int n_data_;
    std::vector<DDIndex> data_cells_;
};

/** One transmit frame: M x N symbol grid plus its layout and energy split. */
struct DDFrame {
    CMat symbols;  // M x N, symbols(l, k)
    FrameLayout layout;
    double data_energy = 0.0;   // E_d
    double pilot_energy = 0.0;  // E_p
    int data_count = 0;         // n_d
};

/// vec[k*M + l] = grid(l, k)
CVec vectorize(const CMat& grid);
CMat devectorize(const CVec& vec, int M, int N);
inline CVec vectorize(const DDFrame& frame) { return vectorize(frame.symbols); }

/**
 * Quasi-periodic extension read: for l = l0 + n*M, k = k0 + m*N with
 * (l0, k0) in the fundamental domain, returns exp(j*2*pi*n*k0/N) times the
 * fundamental value. Exactly periodic in k with period N.
 */
cplx quasiperiodic_value(const CMat& fundamental, DDIndex idx);

double pdr_db(double pilot_energy, double data_energy);

/**
 * Places sqrt(E_p) on the pilot cell and unit-average-energy constellation
 * points scaled by sqrt(E_d/n_d) on the data cells, walking data cells in
 * (l, k) lexicographic order. `points` maps each symbol index (one per
 * bits_per_symbol bits, MSB first) to a constellation point.
 */
DDFrame build_frame(const FrameLayout& layout, const std::vector<uint8_t>& bits,
                    const std::vector<cplx>& points, int bits_per_symbol, double pilot_energy,
                    double data_energy);

}  // namespace zakotfs
