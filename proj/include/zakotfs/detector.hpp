#pragma once

#include "zakotfs/estimator.hpp"

namespace zakotfs {

/** Unit-average-energy constellation with Gray bit labels. */
struct Constellation {
    std::vector<cplx> points;  // index = bit label, MSB first
    int bits_per_symbol = 0;

    static Constellation qam4();
};

struct DetectionResult {
    CVec soft;                  // per data cell, layout order
    std::vector<int> hard;      // constellation indices
    std::vector<uint8_t> bits;  // decoded bits
    double ber = -1.0;          // set when reference bits are scored
};

/// y' = y - H_hat * (pilot-only frame vector)
CVec cancel_pilot(const CVec& y, const CMat& H_hat, const FrameLayout& layout, cplx x_p);

/**
 * LMMSE estimate of the data symbols:
 *   x_d = E_s H_d^H (E_s H_d H_d^H + C_n)^{-1} y'
 * with H_d the data-cell columns of H_hat, solved via LDLT (no explicit
 * inverse). Output follows the layout's data-cell order.
 */
CVec lmmse_equalize(const CVec& y_prime, const CMat& H_hat, const FrameLayout& layout, double E_s,
                    const CMat& C_n);

/// Minimum-distance decisions; ties break toward the smallest bit label.
DetectionResult demap(const CVec& soft, const Constellation& constellation);

double bit_error_rate(const std::vector<uint8_t>& tx_bits, const std::vector<uint8_t>& rx_bits);

}  // namespace zakotfs
