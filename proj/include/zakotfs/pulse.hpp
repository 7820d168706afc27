#pragma once

#include "zakotfs/window.hpp"

namespace zakotfs {

enum class PulseState { Raw, UnitEnergy, Orthogonalized };

/**
 * S x (M*N) matrix of sampled pulsones, column k*M + l carrying the pulse for
 * DD grid point (l, k). UnitEnergy: every column normalized to energy 1.
 * Orthogonalized: columns form an orthonormal family (IOTA).
 */
struct PulseMatrix {
    CMat entries;
    PulseState state = PulseState::Raw;
    LatticeParams params;
    double orth_defect = -1.0;  // recorded by iota_orthogonalize

    long samples() const { return entries.rows(); }
    int grid_size() const { return static_cast<int>(entries.cols()); }
    const CVec column(long l, long k) const { return entries.col(k * params.M + l); }
};

/** Gram matrix R = P^H P with its Hermitian inverse square root. */
struct GramFactor {
    CMat R;
    CMat inv_sqrt;
    double eigen_floor = 0.0;  // smallest retained eigenvalue
    double condition = 0.0;    // lambda_max / lambda_min before flooring
};

/**
 * Sampled pulsone p[n] = B[n] * sum_m A(m df + nu_k) e^{j 2 pi (m df + nu_k)(t_n - tau_l)}
 * with t_n = n / F_s, the m-sum running over the finite support of A.
 */
CVec synthesize_pulsone(long l, long k, const Window& freq_window,
                        const SampledWindow& time_window, const LatticeParams& params);

/// All MN pulsones, each column normalized to unit energy.
PulseMatrix build_pulse_matrix(const Window& freq_window, const SampledWindow& time_window,
                               const LatticeParams& params);

GramFactor gram(const PulseMatrix& P);

/**
 * Hermitian inverse square root by eigendecomposition; eigenvalues below
 * eigen_floor * lambda_max are clamped up to that floor before inversion.
 */
CMat hermitian_inverse_sqrt(const CMat& R, double eigen_floor = 1e-12);

/** IOTA: P~ = P R^{-1/2}. Records the achieved orthogonality defect. */
PulseMatrix iota_orthogonalize(const PulseMatrix& P, double eigen_floor = 1e-12,
                               double condition_limit = 1e12);

/// max entrywise |P^H P - I|
double orthogonality_defect(const PulseMatrix& P);

}  // namespace zakotfs
