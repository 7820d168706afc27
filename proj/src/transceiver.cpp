#include "zakotfs/transceiver.hpp"

#include <cmath>
#include <numbers>

namespace zakotfs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

long wrap_centered(long d, int period, long& alias) {
    long half = period / 2;
    long w = ((d + half) % period + period) % period - half;
    alias = (d - w) / period;
    return w;
}
}  // namespace

CVec modulate(const DDFrame& frame, const PulseMatrix& P) {
    if (P.grid_size() != frame.symbols.size()) {
        throw std::invalid_argument("modulate: pulse matrix incompatible with frame");
    }
    return P.entries * vectorize(frame);
}

CVec correlate_receive(const CVec& r, const PulseMatrix& P) {
    if (r.size() != P.samples()) {
        throw std::invalid_argument("correlate_receive: length mismatch");
    }
    return P.entries.adjoint() * r;
}

EffectiveChannel effective_channel_matrix(const PulseMatrix& P_tx, const PulseMatrix& P_rx,
                                          const PathSet& paths) {
    if (P_tx.samples() != P_rx.samples() || P_tx.grid_size() != P_rx.grid_size()) {
        throw std::invalid_argument("effective_channel_matrix: pulse matrices disagree");
    }
    const LatticeParams& par = P_tx.params;
    const long S = par.sample_count();
    const int MN = par.grid_size();

    CMat dispersed = CMat::Zero(S, MN);
    for (const Path& p : paths.paths) {
        long shift = p.sample_shift(par);
        if (shift < 0 || shift >= S) {
            throw std::invalid_argument("effective_channel_matrix: path delay exceeds the frame");
        }
        double k_nu = p.doppler_bins(par);
        CVec ramp(S);
        for (long n = 0; n < S; ++n) ramp[n] = std::polar(1.0, kTwoPi * n * k_nu / S);
        CMat ramped = P_tx.entries.array().colwise() * ramp.array();
        if (shift == 0) {
            dispersed += p.gain * ramped;
        } else {
            dispersed.topRows(shift) += p.gain * ramped.bottomRows(shift);
            dispersed.bottomRows(S - shift) += p.gain * ramped.topRows(S - shift);
        }
    }

    EffectiveChannel eff;
    eff.provenance = Provenance::MatrixProduct;
    eff.H = P_rx.entries.adjoint() * dispersed;

    // probe at the frame center: its response column covers the centered
    // fundamental domain without wrap, then Eq(36)-style phase deconvolution
    const int M = par.M, N = par.N;
    const long lc = M / 2, kc = N / 2;
    CVec col = eff.H.col(kc * M + lc);
    eff.fundamental.resize(M, N);
    for (long i = 0; i < M; ++i) {
        long lam = i - M / 2;
        for (long j = 0; j < N; ++j) {
            long kap = j - N / 2;
            long lr = (lc + lam + M) % M;
            long kr = (kc + kap + N) % N;
            eff.fundamental(i, j) =
                col[kr * M + lr] * std::polar(1.0, -kTwoPi * kap * lc / (double(M) * N));
        }
    }
    return eff;
}

cplx heff_closed_form(const Window& freq_window, const SampledWindow& time_window,
                      const PathSet& paths, long l, long k, const LatticeParams& params) {
    const double MN = static_cast<double>(params.M) * params.N;
    const double tau_l = params.tau_of(l);
    const double nu_k = params.nu_of(k);
    cplx acc(0.0, 0.0);
    for (const Path& p : paths.paths) {
        const double l_q = p.delay_bins(params);
        const double k_q = p.doppler_bins(params);
        // delay argument of X~_B in samples, rounded like the channel shift
        const long shift = p.sample_shift(params);
        cplx phase = std::polar(1.0, kTwoPi * (static_cast<double>(l) * k - l_q * k_q) / MN);
        cplx ya = ambiguity_freq(freq_window, tau_l - p.delay, -nu_k);
        cplx xb = discrete_periodic_ambiguity(time_window, -shift, static_cast<double>(k) - k_q);
        acc += p.gain * phase * ya * xb;
    }
    return acc;
}

CMat heff_closed_form_grid(const Window& freq_window, const SampledWindow& time_window,
                           const PathSet& paths, const LatticeParams& params) {
    const int M = params.M, N = params.N;
    CMat grid(M, N);
    for (long i = 0; i < M; ++i) {
        for (long j = 0; j < N; ++j) {
            grid(i, j) = heff_closed_form(freq_window, time_window, paths, i - M / 2, j - N / 2,
                                          params);
        }
    }
    return grid;
}

CMat heff_continuous_grid(const Window& freq_window, const Window& time_window,
                          const PathSet& paths, const LatticeParams& params) {
    const int M = params.M, N = params.N;
    CMat grid(M, N);
    for (long i = 0; i < M; ++i) {
        const double tau = params.tau_of(i - M / 2);
        for (long j = 0; j < N; ++j) {
            const double nu = params.nu_of(j - N / 2);
            cplx acc(0.0, 0.0);
            for (const Path& p : paths.paths) {
                acc += p.gain * std::polar(1.0, kTwoPi * (tau * nu - p.delay * p.doppler)) *
                       ambiguity_freq(freq_window, tau - p.delay, -nu) *
                       ambiguity_time(time_window, -p.delay, nu - p.doppler);
            }
            grid(i, j) = acc;
        }
    }
    return grid;
}

CMat build_H_from_heff(const CMat& fundamental, const LatticeParams& params) {
    const int M = params.M, N = params.N;
    if (fundamental.rows() != M || fundamental.cols() != N) {
        throw std::invalid_argument("build_H_from_heff: grid shape mismatch");
    }
    const double MN = static_cast<double>(M) * N;
    CMat H(M * N, M * N);
    for (long kp = 0; kp < N; ++kp) {
        for (long lp = 0; lp < M; ++lp) {
            const long row = kp * M + lp;
            for (long k = 0; k < N; ++k) {
                for (long l = 0; l < M; ++l) {
                    long n, m;
                    long lam = wrap_centered(lp - l, M, n);
                    long kap = wrap_centered(kp - k, N, m);
                    double phase = kTwoPi * (static_cast<double>(n) * k / N +
                                             static_cast<double>(kap) * (l + n * M) / MN);
                    H(row, k * M + l) =
                        fundamental(lam + M / 2, kap + N / 2) * std::polar(1.0, phase);
                }
            }
        }
    }
    return H;
}

CMat twisted_convolution_io(const CMat& X, const CMat& heff_fundamental,
                            const LatticeParams& params) {
    const int M = params.M, N = params.N;
    if (X.rows() != M || X.cols() != N || heff_fundamental.rows() != M ||
        heff_fundamental.cols() != N) {
        throw std::invalid_argument("twisted_convolution_io: grid shape mismatch");
    }
    const double MN = static_cast<double>(M) * N;
    CMat Y = CMat::Zero(M, N);
    for (long l = 0; l < M; ++l) {
        for (long k = 0; k < N; ++k) {
            cplx acc(0.0, 0.0);
            for (long i = 0; i < M; ++i) {
                long lam = i - M / 2;
                for (long j = 0; j < N; ++j) {
                    long kap = j - N / 2;
                    cplx h = heff_fundamental(i, j);
                    cplx x = quasiperiodic_value(X, {l - lam, k - kap});
                    acc += h * x * std::polar(1.0, kTwoPi * kap * (l - lam) / MN);
                }
            }
            Y(l, k) = acc;
        }
    }
    return Y;
}

CMat dd_noise_covariance(const PulseMatrix& P_rx, double sigma2) {
    if (sigma2 < 0.0) throw std::invalid_argument("dd_noise_covariance: sigma2 must be >= 0");
    CMat R = P_rx.entries.adjoint() * P_rx.entries;
    return sigma2 * 0.5 * (R + R.adjoint());
}

CMat zak_sample(const CVec& r, const LatticeParams& params) {
    const long S = params.sample_count();
    if (r.size() != S) throw std::invalid_argument("zak_sample: length mismatch");
    const int M = params.M, N = params.N, L = params.L;
    CMat Z = CMat::Zero(M, N);
    for (long l = 0; l < M; ++l) {
        for (long k = 0; k < N; ++k) {
            cplx acc(0.0, 0.0);
            for (long j = 0; j < N; ++j) {
                long n = (static_cast<long>(L) * l + j * static_cast<long>(L) * M) % S;
                acc += r[n] * std::polar(1.0, -kTwoPi * k * j / static_cast<double>(N));
            }
            Z(l, k) = acc;
        }
    }
    return Z;
}

}  // namespace zakotfs
