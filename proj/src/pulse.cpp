#include "zakotfs/pulse.hpp"

#include <cmath>
#include <numbers>

namespace zakotfs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

CVec synthesize_pulsone(long l, long k, const Window& freq_window,
                        const SampledWindow& time_window, const LatticeParams& params) {
    if (freq_window.axis() != WindowAxis::Frequency) {
        throw std::invalid_argument("synthesize_pulsone: frequency window expected");
    }
    if (l < 0 || l >= params.M || k < 0 || k >= params.N) {
        throw std::invalid_argument("synthesize_pulsone: (l, k) outside the fundamental domain");
    }
    const long S = params.sample_count();
    if (time_window.samples.size() != S) {
        throw std::invalid_argument("synthesize_pulsone: time window length mismatch");
    }
    const double nu_k = params.nu_of(k);
    const double tau_l = params.tau_of(l);
    const double half = freq_window.support_halfwidth();

    // tones m*df + nu_k inside the window support
    std::vector<double> freqs, weights;
    const long m_max = static_cast<long>(std::ceil(half / params.delta_f)) + 1;
    for (long m = -m_max; m <= m_max; ++m) {
        double f = m * params.delta_f + nu_k;
        double a = freq_window(f);
        if (a != 0.0) {
            freqs.push_back(f);
            weights.push_back(a);
        }
    }
    if (freqs.empty()) {
        throw std::invalid_argument("synthesize_pulsone: window support contains no tones");
    }

    CVec pulse(S);
    const double fs = params.sample_rate();
    for (long n = 0; n < S; ++n) {
        const double t = static_cast<double>(n) / fs - tau_l;
        cplx acc(0.0, 0.0);
        for (size_t i = 0; i < freqs.size(); ++i) {
            acc += weights[i] * std::polar(1.0, kTwoPi * freqs[i] * t);
        }
        pulse[n] = time_window.samples[n] * acc;
    }
    return pulse;
}

PulseMatrix build_pulse_matrix(const Window& freq_window, const SampledWindow& time_window,
                               const LatticeParams& params) {
    PulseMatrix P;
    P.params = params;
    P.entries.resize(params.sample_count(), params.grid_size());
    for (long k = 0; k < params.N; ++k) {
        for (long l = 0; l < params.M; ++l) {
            P.entries.col(k * params.M + l) = synthesize_pulsone(l, k, freq_window, time_window, params);
        }
    }
    for (int c = 0; c < P.grid_size(); ++c) {
        double nrm = P.entries.col(c).norm();
        if (nrm == 0.0) throw std::runtime_error("build_pulse_matrix: zero-energy pulsone");
        P.entries.col(c) /= nrm;
    }
    P.state = PulseState::UnitEnergy;
    return P;
}

GramFactor gram(const PulseMatrix& P) {
    if (P.state == PulseState::Raw) {
        throw std::invalid_argument("gram: pulse matrix must be at least UnitEnergy");
    }
    GramFactor g;
    CMat R = P.entries.adjoint() * P.entries;
    g.R = 0.5 * (R + R.adjoint());  // enforce Hermitian
    return g;
}

CMat hermitian_inverse_sqrt(const CMat& R, double eigen_floor) {
    if (R.rows() != R.cols()) throw std::invalid_argument("hermitian_inverse_sqrt: square matrix expected");
    Eigen::SelfAdjointEigenSolver<CMat> es(R);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_inverse_sqrt: eigen-solver failed");
    }
    Eigen::VectorXd ev = es.eigenvalues();
    const double lmax = ev.maxCoeff();
    if (!(lmax > 0.0)) throw std::runtime_error("hermitian_inverse_sqrt: matrix is zero");
    const double floor_abs = eigen_floor * lmax;
    Eigen::VectorXd inv_sqrt_ev(ev.size());
    for (long i = 0; i < ev.size(); ++i) {
        inv_sqrt_ev[i] = 1.0 / std::sqrt(std::max(ev[i], floor_abs));
    }
    CMat out = es.eigenvectors() * inv_sqrt_ev.asDiagonal() * es.eigenvectors().adjoint();
    return 0.5 * (out + out.adjoint());
}

PulseMatrix iota_orthogonalize(const PulseMatrix& P, double eigen_floor, double condition_limit) {
    if (P.state != PulseState::UnitEnergy) {
        throw std::invalid_argument("iota_orthogonalize: UnitEnergy pulse matrix expected");
    }
    GramFactor g = gram(P);
    Eigen::SelfAdjointEigenSolver<CMat> es(g.R);
    if (es.info() != Eigen::Success) throw std::runtime_error("iota_orthogonalize: eigen-solver failed");
    Eigen::VectorXd ev = es.eigenvalues();
    const double lmax = ev.maxCoeff();
    const double floor_abs = eigen_floor * lmax;
    const double lmin = std::max(ev.minCoeff(), floor_abs);
    const double condition = lmax / lmin;
    if (condition > condition_limit) {
        throw std::runtime_error("iota_orthogonalize: Gram condition " + std::to_string(condition) +
                                 " exceeds limit after flooring");
    }
    Eigen::VectorXd inv_sqrt_ev(ev.size());
    for (long i = 0; i < ev.size(); ++i) {
        inv_sqrt_ev[i] = 1.0 / std::sqrt(std::max(ev[i], floor_abs));
    }
    CMat inv_sqrt = es.eigenvectors() * inv_sqrt_ev.asDiagonal() * es.eigenvectors().adjoint();
    inv_sqrt = 0.5 * (inv_sqrt + inv_sqrt.adjoint());

    PulseMatrix out;
    out.params = P.params;
    out.entries = P.entries * inv_sqrt;
    out.state = PulseState::Orthogonalized;
    out.orth_defect = orthogonality_defect(out);
    return out;
}

double orthogonality_defect(const PulseMatrix& P) {
    CMat G = P.entries.adjoint() * P.entries;
    G.diagonal().array() -= 1.0;
    return G.cwiseAbs().maxCoeff();
}

}  // namespace zakotfs
