#pragma once

#include "zakotfs/channel.hpp"
#include "zakotfs/pulse.hpp"

namespace zakotfs {

enum class Provenance { MatrixProduct, ClosedForm, Estimated };

/**
 * DD-domain effective channel. `fundamental` stores h_eff on the centered
 * domain [-M/2, M/2) x [-N/2, N/2): storage cell (i, j) holds centered bin
 * (i - M/2, j - N/2). `H` is the MN x MN matrix acting on vectorized frames.
 */
struct EffectiveChannel {
    CMat fundamental;
    CMat H;
    Provenance provenance = Provenance::MatrixProduct;
};

inline long centered_to_storage_l(long lam, int M) { return lam + M / 2; }
inline long centered_to_storage_k(long kap, int N) { return kap + N / 2; }

/// s = P x
CVec modulate(const DDFrame& frame, const PulseMatrix& P);
/// y = P^H r (the T/F_s receive scale is absorbed by unit-energy pulses)
CVec correlate_receive(const CVec& r, const PulseMatrix& P);

/**
 * H = sum_q h_q P_rx^H J_{s_q} D_{nu_q} P_tx with the fundamental grid read
 * off the response to a probe pulse at the frame-center grid point.
 */
EffectiveChannel effective_channel_matrix(const PulseMatrix& P_tx, const PulseMatrix& P_rx,
                                          const PathSet& paths);

/**
 * Closed-form h_eff at centered bin (l, k):
 *   sum_q h_q e^{j 2 pi (l k - l_q k_q)/(M N)} Y_A(tau_l - tau_q, -nu_k)
 *         X~_B(-round(L l_q), k - k_q)
 * with l_q, k_q the path delay/Doppler in bins and X~_B evaluated at the
 * fractional Doppler argument through its defining sum.
 */
cplx heff_closed_form(const Window& freq_window, const SampledWindow& time_window,
                      const PathSet& paths, long l, long k, const LatticeParams& params);

/// Full centered fundamental grid of the closed form.
CMat heff_closed_form_grid(const Window& freq_window, const SampledWindow& time_window,
                           const PathSet& paths, const LatticeParams& params);

/**
 * Continuous-system effective channel on the bin grid,
 *   h_eff(tau, nu) = sum_q h_q e^{j 2 pi (tau nu - tau_q nu_q)}
 *                    Y_A(tau - tau_q, -nu) X_B(-tau_q, nu - nu_q),
 * with both ambiguities evaluated by quadrature (no frame sampling or
 * truncation). This is the picture behind the channel-spreading comparison.
 */
CMat heff_continuous_grid(const Window& freq_window, const Window& time_window,
                          const PathSet& paths, const LatticeParams& params);

/**
 * Quasi-periodic assembly of H from a fundamental grid: each (row, col)
 * difference is brought into the centered domain by its unique alias (n, m),
 * contributing h_eff[l'-l-nM, k'-k-mN] e^{j2pi n k/N} e^{j2pi (k'-k-mN)(l+nM)/(MN)}.
 */
CMat build_H_from_heff(const CMat& fundamental, const LatticeParams& params);

/**
 * Discrete twisted convolution with quasi-periodic input extension:
 *   Y[l,k] = sum_{l',k'} h[l',k'] X_qp[l-l', k-k'] e^{j2pi k'(l-l')/(MN)}
 * over the centered fundamental support of h.
 */
CMat twisted_convolution_io(const CMat& X, const CMat& heff_fundamental,
                            const LatticeParams& params);

/// C_n = sigma2 * P_rx^H P_rx
CMat dd_noise_covariance(const PulseMatrix& P_rx, double sigma2);

/**
 * Zak-transform read of a received frame without receive filtering:
 * Z[l,k] = sum_j r[(L l + j L M) mod S] e^{-j 2 pi k j / N}, the DD-domain
 * picture of the raw waveform used by the channel-spreading demo.
 */
CMat zak_sample(const CVec& r, const LatticeParams& params);

}  // namespace zakotfs
