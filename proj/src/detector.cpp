#include "zakotfs/detector.hpp"

#include <cmath>

namespace zakotfs {

Constellation Constellation::qam4() {
    // Gray map: bit0 -> real sign, bit1 -> imag sign; 0 maps to +
    const double a = 1.0 / std::sqrt(2.0);
    Constellation c;
    c.bits_per_symbol = 2;
    c.points = {{a, a}, {a, -a}, {-a, a}, {-a, -a}};  // labels 00, 01, 10, 11
    return c;
}

CVec cancel_pilot(const CVec& y, const CMat& H_hat, const FrameLayout& layout, cplx x_p) {
    if (y.size() != H_hat.rows()) throw std::invalid_argument("cancel_pilot: dimension mismatch");
    if (x_p == cplx(0.0, 0.0)) return y;
    return y - x_p * H_hat.col(layout.pilot_pos().k * layout.M() + layout.pilot_pos().l);
}

CVec lmmse_equalize(const CVec& y_prime, const CMat& H_hat, const FrameLayout& layout, double E_s,
                    const CMat& C_n) {
    const int MN = layout.M() * layout.N();
    if (H_hat.rows() != MN || H_hat.cols() != MN || y_prime.size() != MN ||
        C_n.rows() != MN || C_n.cols() != MN) {
        throw std::invalid_argument("lmmse_equalize: dimension mismatch");
    }
    const auto& cells = layout.data_cells();
    CMat Hd(MN, cells.size());
    for (size_t c = 0; c < cells.size(); ++c) {
        Hd.col(c) = H_hat.col(cells[c].k * layout.M() + cells[c].l);
    }
    CMat A = E_s * (Hd * Hd.adjoint()) + C_n;
    Eigen::LDLT<CMat> ldlt(A);
    if (ldlt.info() != Eigen::Success) {
        throw std::runtime_error("lmmse_equalize: singular system");
    }
    CVec z = ldlt.solve(y_prime);
    return E_s * (Hd.adjoint() * z);
}

DetectionResult demap(const CVec& soft, const Constellation& constellation) {
    DetectionResult res;
    res.soft = soft;
    res.hard.resize(soft.size());
    res.bits.reserve(soft.size() * constellation.bits_per_symbol);
    for (long i = 0; i < soft.size(); ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t p = 0; p < constellation.points.size(); ++p) {
            double d = std::norm(soft[i] - constellation.points[p]);
            if (d < best_d - 1e-15) {  // strict improvement; ties keep the smaller label
                best_d = d;
                best = static_cast<int>(p);
            }
        }
        res.hard[i] = best;
        for (int b = constellation.bits_per_symbol - 1; b >= 0; --b) {
            res.bits.push_back(static_cast<uint8_t>((best >> b) & 1));
        }
    }
    return res;
}

double bit_error_rate(const std::vector<uint8_t>& tx_bits, const std::vector<uint8_t>& rx_bits) {
    if (tx_bits.size() != rx_bits.size()) {
        throw std::invalid_argument("bit_error_rate: length mismatch");
    }
    if (tx_bits.empty()) return 0.0;
    size_t errors = 0;
    for (size_t i = 0; i < tx_bits.size(); ++i) {
        errors += (tx_bits[i] & 1) != (rx_bits[i] & 1);
    }
    return static_cast<double>(errors) / tx_bits.size();
}

}  // namespace zakotfs
