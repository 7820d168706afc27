#include "zakotfs/lattice.hpp"

#include <cmath>
#include <numbers>

namespace zakotfs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void LatticeParams::validate() const {
    if (M < 1 || N < 1 || L < 1) {
        throw std::invalid_argument("LatticeParams: M, N, L must be >= 1");
    }
    if (!(delta_f > 0.0) || !(T > 0.0)) {
        throw std::invalid_argument("LatticeParams: T and delta_f must be positive");
    }
    if (std::abs(T * delta_f - 1.0) > 1e-12) {
        throw std::invalid_argument("LatticeParams: T * delta_f must equal 1");
    }
}

FrameLayout::FrameLayout(const LatticeParams& params, DDIndex pilot_pos, int guard_l, int guard_k,
                         int pilot_shrink)
    : M_(params.M), N_(params.N), pilot_(pilot_pos), g1_(guard_l), g2_(guard_k),
      shrink_(pilot_shrink) {
    if (g1_ < 2 || g2_ < 2) {
        throw std::invalid_argument("FrameLayout: guard half-widths must be >= 2");
    }
    if (shrink_ < 0 || shrink_ > g1_ || shrink_ > g2_) {
        throw std::invalid_argument("FrameLayout: pilot shrink out of range");
    }
    // interior pilot: the guard rectangle must not leave the fundamental domain
    if (pilot_.l - g1_ < 0 || pilot_.l + g1_ >= M_ || pilot_.k - g2_ < 0 || pilot_.k + g2_ >= N_) {
        throw std::invalid_argument("FrameLayout: guard region exceeds the fundamental domain");
    }
    n_data_ = 0;
    for (long l = 0; l < M_; ++l) {
        for (long k = 0; k < N_; ++k) {
            if (is_data_cell(l, k)) {
                data_cells_.push_back({l, k});
                ++n_data_;
            }
        }
    }
}

FrameLayout FrameLayout::centered(const LatticeParams& params, int guard_l, int guard_k,
                                  int pilot_shrink) {
    return FrameLayout(params, {params.M / 2, params.N / 2}, guard_l, guard_k, pilot_shrink);
}

CVec vectorize(const CMat& grid) {
    return Eigen::Map<const CVec>(grid.data(), grid.size());
}

CMat devectorize(const CVec& vec, int M, int N) {
    if (vec.size() != static_cast<long>(M) * N) {
        throw std::invalid_argument("devectorize: length mismatch");
    }
    return Eigen::Map<const CMat>(vec.data(), M, N);
}

cplx quasiperiodic_value(const CMat& fundamental, DDIndex idx) {
    const long M = fundamental.rows();
    const long N = fundamental.cols();
    long l0 = ((idx.l % M) + M) % M;
    long k0 = ((idx.k % N) + N) % N;
    long n = (idx.l - l0) / M;
    double phase = kTwoPi * static_cast<double>(n) * static_cast<double>(k0) / static_cast<double>(N);
    return std::polar(1.0, phase) * fundamental(l0, k0);
}

double pdr_db(double pilot_energy, double data_energy) {
    return 10.0 * std::log10(pilot_energy / data_energy);
}

DDFrame build_frame(const FrameLayout& layout, const std::vector<uint8_t>& bits,
                    const std::vector<cplx>& points, int bits_per_symbol, double pilot_energy,
                    double data_energy) {
    if (pilot_energy < 0.0) {
        throw std::invalid_argument("build_frame: pilot energy must be nonnegative");
    }
    if (!(data_energy > 0.0) && layout.data_cell_count() > 0) {
        throw std::invalid_argument("build_frame: data energy must be positive");
    }
    const int n_d = layout.data_cell_count();
    if (bits.size() != static_cast<size_t>(n_d) * bits_per_symbol) {
        throw std::invalid_argument("build_frame: bit count does not match data cell count");
    }

    DDFrame frame{CMat::Zero(layout.M(), layout.N()), layout, data_energy, pilot_energy, n_d};
    frame.symbols(layout.pilot_pos().l, layout.pilot_pos().k) = std::sqrt(pilot_energy);

    const double amp = n_d > 0 ? std::sqrt(data_energy / n_d) : 0.0;
    size_t bit_pos = 0;
    for (const DDIndex& cell : layout.data_cells()) {
        unsigned index = 0;
        for (int b = 0; b < bits_per_symbol; ++b) {
            index = (index << 1) | (bits[bit_pos++] & 1u);
        }
        frame.symbols(cell.l, cell.k) = amp * points.at(index);
    }
    return frame;
}

}  // namespace zakotfs
