#include "zakotfs/estimator.hpp"

#include <cmath>
#include <numbers>

namespace zakotfs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

CMat pilot_response_predict(const CMat& heff_fundamental, const FrameLayout& layout, cplx x_p,
                            const LatticeParams& params) {
    const int M = params.M, N = params.N;
    const double MN = static_cast<double>(M) * N;
    const long lp = layout.pilot_pos().l, kp = layout.pilot_pos().k;
    CMat Y = CMat::Zero(M, N);
    for (long l = 0; l < M; ++l) {
        for (long k = 0; k < N; ++k) {
            cplx acc(0.0, 0.0);
            for (long n = -1; n <= 1; ++n) {
                for (long m = -1; m <= 1; ++m) {
                    long lam = l - lp - n * M;
                    long kap = k - kp - m * N;
                    long i = lam + M / 2, j = kap + N / 2;
                    if (i < 0 || i >= M || j < 0 || j >= N) continue;
                    double phase = kTwoPi * (static_cast<double>(n) * k / N +
                                             static_cast<double>(kap) * (lp + n * M) / MN);
                    acc += heff_fundamental(i, j) * std::polar(1.0, phase);
                }
            }
            Y(l, k) = x_p * acc;
        }
    }
    return Y;
}

CMat estimate_heff(const CMat& received, const FrameLayout& layout, cplx x_p,
                   const LatticeParams& params) {
    if (x_p == cplx(0.0, 0.0)) {
        throw std::invalid_argument("estimate_heff: pilot symbol must be nonzero");
    }
    const int M = params.M, N = params.N;
    const double MN = static_cast<double>(M) * N;
    const long lp = layout.pilot_pos().l, kp = layout.pilot_pos().k;
    CMat h = CMat::Zero(M, N);
    for (long i = 0; i < M; ++i) {
        long lam = i - M / 2;
        for (long j = 0; j < N; ++j) {
            long kap = j - N / 2;
            long lr = lp + lam, kr = kp + kap;
            if (!layout.in_pilot_region(((lr % M) + M) % M, ((kr % N) + N) % N)) continue;
            lr = ((lr % M) + M) % M;
            kr = ((kr % N) + N) % N;
            h(i, j) = received(lr, kr) / x_p * std::polar(1.0, -kTwoPi * kap * lp / MN);
        }
    }
    return h;
}

double nmse(const CMat& h_hat, const CMat& h_true) {
    if (h_hat.rows() != h_true.rows() || h_hat.cols() != h_true.cols()) {
        throw std::invalid_argument("nmse: shape mismatch");
    }
    double ref = h_true.squaredNorm();
    if (ref == 0.0) throw std::invalid_argument("nmse: reference response is zero");
    return (h_hat - h_true).squaredNorm() / ref;
}

EstimationResult estimate_with_nmse(const CMat& received, const FrameLayout& layout, cplx x_p,
                                    const CMat& h_true, const LatticeParams& params) {
    EstimationResult res;
    res.h_hat = estimate_heff(received, layout, x_p, params);
    res.nmse = nmse(res.h_hat, h_true);
    res.samples_used = (2 * (layout.guard_l() - layout.pilot_shrink()) + 1) *
                       (2 * (layout.guard_k() - layout.pilot_shrink()) + 1);
    return res;
}

}  // namespace zakotfs
