#pragma once

#include "zakotfs/transceiver.hpp"

namespace zakotfs {

/** Pilot-region channel estimate on the centered grid, zero outside the read
 *  window, with its NMSE against a reference response. */
struct EstimationResult {
    CMat h_hat;  // centered storage, zero outside the pilot-region read
    double nmse = 0.0;
    int samples_used = 0;
};

/**
 * Predicted pilot response: quasi-periodic image sum of x_p h_eff translated
 * to the pilot position, aliases restricted to |n| <= 1, |m| <= 1.
 */
CMat pilot_response_predict(const CMat& heff_fundamental, const FrameLayout& layout, cplx x_p,
                            const LatticeParams& params);

/**
 * Reads h_eff off the received grid around the pilot:
 *   h[l, k] = y[l + l_p, k + k_p] / x_p * e^{-j 2 pi k l_p / (M N)}
 * restricted to the pilot region, zero elsewhere.
 */
CMat estimate_heff(const CMat& received, const FrameLayout& layout, cplx x_p,
                   const LatticeParams& params);

/// sum |h_hat - h_true|^2 / sum |h_true|^2 over the centered fundamental grid
double nmse(const CMat& h_hat, const CMat& h_true);

EstimationResult estimate_with_nmse(const CMat& received, const FrameLayout& layout, cplx x_p,
                                    const CMat& h_true, const LatticeParams& params);

}  // namespace zakotfs
