#pragma once

#include <functional>
#include <memory>

#include "zakotfs/lattice.hpp"

namespace zakotfs {

enum class WindowKind { Rectangular, RootRaisedCosine, Pswf };
enum class WindowAxis { Time, Frequency };

/**
 * Window description. `span` is the full support width (s for Time, Hz for
 * Frequency). For RootRaisedCosine, span = (1+rolloff) * base with a flat
 * center of (1-rolloff) * base. For Pswf, `dual_width` is the full width of
 * the concentration interval in the dual domain.
 */
struct WindowSpec {
    WindowKind kind = WindowKind::Rectangular;
    WindowAxis axis = WindowAxis::Frequency;
    double span = 0.0;
    double rolloff = 0.0;
    double dual_width = 0.0;
};

/**
 * Zeroth-order prolate spheroidal wave function on [-t_prime, t_prime],
 * concentrated in a dual interval of full width b_prime. Solved by Nystrom
 * discretization of the bandlimit-then-timelimit kernel
 * b_prime * sinc(b_prime (t - t')) with trapezoid weights; lambda0 is the
 * energy fraction captured by the dual interval.
 */
struct PswfSolution {
    Eigen::VectorXd grid;
    Eigen::VectorXd psi0;
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double t_prime = 0.0;
    double b_prime = 0.0;
    bool degenerate_leading_pair = false;

    /// Catmull-Rom interpolation of psi0; zero outside [-t_prime, t_prime].
    double evaluate(double t) const;
};

PswfSolution solve_pswf(double t_prime, double b_prime, int grid_size = 1024);

/** Unit-energy window evaluator over one axis. */
class Window {
public:
    explicit Window(WindowSpec spec);  // Rectangular / RootRaisedCosine
    Window(WindowSpec spec, std::shared_ptr<const PswfSolution> pswf);

    double operator()(double point) const;
    const WindowSpec& spec() const { return spec_; }
    WindowAxis axis() const { return spec_.axis; }
    double support_halfwidth() const { return spec_.span / 2.0; }
    const PswfSolution* pswf() const { return pswf_.get(); }

private:
    WindowSpec spec_;
    std::shared_ptr<const PswfSolution> pswf_;
    double amp_ = 0.0;  // unit-energy scale
};

/** PSWF span/concentration choices, in units of the rectangular span and of
 *  the corresponding DD resolution. */
struct PswfShape {
    double span_factor = 1.3;
    double dual_bins = 2.0;
    int grid_size = 1024;
};

Window make_freq_window(WindowKind kind, const LatticeParams& params, double rolloff = 0.3,
                        const PswfShape& pswf = {});
Window make_time_window(WindowKind kind, const LatticeParams& params, double rolloff = 0.3,
                        const PswfShape& pswf = {});

/** Length-S sampling of a time window on the cyclic frame grid, centered at
 *  t = 0 (sample n holds B(t_n) with t_n = n/F_s for n < S/2, (n-S)/F_s
 *  otherwise). Mass outside [-NT/2, NT/2) is truncated and the result is
 *  renormalized to unit energy. */
struct SampledWindow {
    Eigen::VectorXd samples;
    double energy = 0.0;
    double truncated_tail_fraction = 0.0;
};

SampledWindow sample_time_window(const Window& window, const LatticeParams& params);

/// Y_A(tau, nu) = int A(f) A*(f - nu) e^{j 2 pi f tau} df
cplx ambiguity_freq(const Window& freq_window, double tau, double nu);
/// X_B(tau, nu) = int B(t) B*(t - tau) e^{-j 2 pi nu (t - tau)} dt
cplx ambiguity_time(const Window& time_window, double tau, double nu);

/// X~_B(l, k) = sum_n B[n] B[(n-l) mod S] e^{-j 2 pi k (n-l) / S}; k may be
/// fractional (the defining sum accepts real k, with the bare n-l phase).
cplx discrete_periodic_ambiguity(const SampledWindow& window, long l, double k);

struct SidelobeReport {
    double peak = 0.0;      // max |ambiguity| beyond the first null, / mainlobe
    bool found = false;     // false: monotone decay, no sidelobe region
    double boundary = 0.0;  // first local minimum of the magnitude cut
};

/** Which 1-D cut of the ambiguity surface to scan. Transform: the lag axis
 *  carrying the Fourier oscillation (Y_A(tau, 0), X_B(0, nu)) whose sidelobes
 *  drive channel spreading; Autocorrelation: the window's plain correlation
 *  cut (Y_A(0, nu), X_B(tau, 0)). */
enum class AmbiguityCut { Transform, Autocorrelation };

SidelobeReport autocorr_sidelobe_peak(const Window& window,
                                      AmbiguityCut cut = AmbiguityCut::Transform);

/// Adaptive-Simpson quadrature of a complex integrand, absolute tolerance.
cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                        double abs_tol = 1e-10, int min_panels = 8);

}  // namespace zakotfs
