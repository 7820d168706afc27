#include <doctest.h>

#include <cmath>

#include "zakotfs/detector.hpp"
#include "zakotfs/transceiver.hpp"

using namespace zakotfs;

namespace {

LatticeParams small() { return LatticeParams(8, 8, 15e3, 4); }

PulseMatrix rect_set(const LatticeParams& p) {
    Window A = make_freq_window(WindowKind::Rectangular, p);
    SampledWindow B = sample_time_window(make_time_window(WindowKind::Rectangular, p), p);
    return build_pulse_matrix(A, B, p);
}

DDFrame random_frame(const FrameLayout& layout, Rng& rng, double pdr_db = 0.0) {
    const int n_d = layout.data_cell_count();
    std::vector<uint8_t> bits(2 * n_d);
    for (auto& b : bits) b = static_cast<uint8_t>(rng.bit());
    double E_d = n_d;
    return build_frame(layout, bits, Constellation::qam4().points, 2,
                       E_d * std::pow(10.0, pdr_db / 10.0), E_d);
}

// Eq-style brute force: alias images n, m in [-2, 2] of a compactly
// supported centered grid
CMat brute_force_H(const CMat& fund, const LatticeParams& p) {
    const int M = p.M, N = p.N;
    const double MN = static_cast<double>(M) * N;
    CMat H = CMat::Zero(M * N, M * N);
    for (long kp = 0; kp < N; ++kp)
        for (long lp = 0; lp < M; ++lp)
            for (long k = 0; k < N; ++k)
                for (long l = 0; l < M; ++l) {
                    cplx acc(0, 0);
                    for (long n = -2; n <= 2; ++n)
                        for (long m = -2; m <= 2; ++m) {
                            long lam = lp - l - n * M, kap = kp - k - m * N;
                            long i = lam + M / 2, j = kap + N / 2;
                            if (i < 0 || i >= M || j < 0 || j >= N) continue;
                            acc += fund(i, j) *
                                   std::polar(1.0, 2.0 * M_PI *
                                                       (static_cast<double>(n) * k / N +
                                                        static_cast<double>(kap) * (l + n * M) / MN));
                        }
                    H(kp * M + lp, k * M + l) = acc;
                }
    return H;
}

}  // namespace

TEST_CASE("modulate basics") {
    LatticeParams p = small();
    PulseMatrix P = rect_set(p);
    FrameLayout layout = FrameLayout::centered(p, 2, 2);

    SUBCASE("single unit symbol picks one column") {
        DDFrame f{CMat::Zero(p.M, p.N), layout, 1.0, 0.0, 0};
        f.symbols(3, 5) = 1.0;
        CHECK((modulate(f, P) - P.entries.col(5 * p.M + 3)).norm() < 1e-15);
    }
    SUBCASE("zero frame, zero signal") {
        DDFrame f{CMat::Zero(p.M, p.N), layout, 0.0, 0.0, 0};
        CHECK(modulate(f, P).norm() == 0.0);
    }
    SUBCASE("linearity") {
        Rng rng(2);
        DDFrame f1 = random_frame(layout, rng), f2 = random_frame(layout, rng);
        DDFrame sum = f1;
        sum.symbols += f2.symbols;
        CHECK((modulate(sum, P) - modulate(f1, P) - modulate(f2, P)).norm() < 1e-12);
    }
}

TEST_CASE("correlate_receive basics") {
    LatticeParams p = small();
    PulseMatrix P = rect_set(p);  // orthonormal on the grid

    SUBCASE("column in, unit vector out") {
        CVec y = correlate_receive(P.entries.col(17), P);
        CVec e = CVec::Zero(p.grid_size());
        e[17] = 1.0;
        CHECK((y - e).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("zero in, zero out") {
        CHECK(correlate_receive(CVec::Zero(p.sample_count()), P).norm() == 0.0);
    }
    SUBCASE("end-to-end identity through the orthonormal set") {
        FrameLayout layout = FrameLayout::centered(p, 2, 2);
        Rng rng(4);
        DDFrame f = random_frame(layout, rng);
        CVec y = correlate_receive(modulate(f, P), P);
        CHECK((y - vectorize(f)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("effective channel matrix") {
    LatticeParams p = small();
    PulseMatrix P = rect_set(p);

    SUBCASE("no paths gives the zero channel") {
        EffectiveChannel eff = effective_channel_matrix(P, P, PathSet{});
        CHECK(eff.H.norm() == 0.0);
        CHECK(eff.fundamental.norm() == 0.0);
    }
    SUBCASE("identity channel gives the identity") {
        PathSet one;
        one.paths.push_back({cplx(1.0, 0.0), 0.0, 0.0});
        EffectiveChannel eff = effective_channel_matrix(P, P, one);
        CHECK((eff.H - CMat::Identity(p.grid_size(), p.grid_size())).cwiseAbs().maxCoeff() < 1e-8);
        // fundamental grid is a delta at the centered origin
        CHECK(std::abs(eff.fundamental(p.M / 2, p.N / 2) - cplx(1.0, 0.0)) < 1e-8);
        CHECK(eff.fundamental.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("signal path agrees with the matrix path") {
    LatticeParams p = small();
    PulseMatrix P = rect_set(p);
    FrameLayout layout = FrameLayout::centered(p, 2, 2);
    Rng rng(7);
    PathSet chan = draw_channel(rng, eva_profile(), 815.0);

    EffectiveChannel eff = effective_channel_matrix(P, P, chan);
    for (int t = 0; t < 5; ++t) {
        DDFrame f = random_frame(layout, rng);
        CVec via_signal = correlate_receive(apply_channel(modulate(f, P), chan, p), P);
        CVec via_matrix = eff.H * vectorize(f);
        CHECK((via_signal - via_matrix).norm() / via_matrix.norm() < 1e-9);
    }
}

TEST_CASE("closed-form effective channel") {
    LatticeParams p = small();
    Window A = make_freq_window(WindowKind::Rectangular, p);
    SampledWindow B = sample_time_window(make_time_window(WindowKind::Rectangular, p), p);

    SUBCASE("no paths") {
        CHECK(std::abs(heff_closed_form(A, B, PathSet{}, 0, 0, p)) == 0.0);
    }
    SUBCASE("identity path at the origin has unit response") {
        PathSet one;
        one.paths.push_back({cplx(1.0, 0.0), 0.0, 0.0});
        CHECK(std::abs(heff_closed_form(A, B, one, 0, 0, p) - cplx(1.0, 0.0)) < 1e-8);
    }
}

TEST_CASE("toy channel spreading: rrc concentrates more energy than rect") {
    // single path at (4, 4.7) bins with M = N = 32, T = delta_f = 1
    LatticeParams toy(32, 32, 1.0, 2);
    PathSet path;
    path.paths.push_back({cplx(1.0, 0.0), 4.0 * toy.T / toy.M, 4.7 * toy.delta_f / toy.N});

    auto peak_fraction = [&](WindowKind kind) {
        Window A = make_freq_window(kind, toy, 0.3);
        Window B = make_time_window(kind, toy, 0.3);
        CMat g = heff_continuous_grid(A, B, path, toy);
        long pi = 0, pj = 0;
        double best = -1.0;
        for (long i = 0; i < g.rows(); ++i)
            for (long j = 0; j < g.cols(); ++j)
                if (std::norm(g(i, j)) > best) {
                    best = std::norm(g(i, j));
                    pi = i;
                    pj = j;
                }
        // response peak sits near centered bin (4, 4.7)
        CHECK(pi - toy.M / 2 == 4);
        CHECK(std::abs((pj - toy.N / 2) - 4.7) <= 0.5);
        double near = 0.0, total = 0.0;
        for (long i = 0; i < g.rows(); ++i)
            for (long j = 0; j < g.cols(); ++j) {
                total += std::norm(g(i, j));
                if (std::abs(i - pi) <= 2 && std::abs(j - pj) <= 2) near += std::norm(g(i, j));
            }
        return near / total;
    };

    double rect_frac = peak_fraction(WindowKind::Rectangular);
    double rrc_frac = peak_fraction(WindowKind::RootRaisedCosine);
    CHECK(rrc_frac > rect_frac);
}

TEST_CASE("build_H_from_heff") {
    LatticeParams p(4, 4, 15e3, 2);

    SUBCASE("delta at the origin gives the identity") {
        CMat fund = CMat::Zero(4, 4);
        fund(2, 2) = 1.0;  // centered (0, 0)
        CHECK((build_H_from_heff(fund, p) - CMat::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("delta at integer delay is a block permutation for k' = k") {
        CMat fund = CMat::Zero(4, 4);
        fund(2 + 1, 2) = 1.0;  // centered (1, 0)
        CMat H = build_H_from_heff(fund, p);
        CHECK((H - brute_force_H(fund, p)).cwiseAbs().maxCoeff() < 1e-14);
        for (long k = 0; k < 4; ++k) {
            for (long l = 0; l < 4; ++l) {
                // each column (l, k) responds only at (l + 1 mod 4, k)
                long lp = (l + 1) % 4;
                CHECK(std::abs(std::abs(H(k * 4 + lp, k * 4 + l)) - 1.0) < 1e-14);
            }
        }
    }
    SUBCASE("random grid matches the alias brute force") {
        CMat fund = CMat::Random(4, 4);
        CHECK((build_H_from_heff(fund, p) - brute_force_H(fund, p)).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("twisted convolution vs matrix form") {
    LatticeParams p(4, 4, 15e3, 2);

    SUBCASE("delta kernel is the identity") {
        CMat fund = CMat::Zero(4, 4);
        fund(2, 2) = 1.0;
        CMat X = CMat::Random(4, 4);
        CHECK((twisted_convolution_io(X, fund, p) - X).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("shifted delta reads the quasi-periodic extension") {
        CMat fund = CMat::Zero(4, 4);
        fund(2 + 1, 2) = 1.0;  // centered (1, 0)
        CMat X = CMat::Random(4, 4);
        CMat Y = twisted_convolution_io(X, fund, p);
        for (long l = 0; l < 4; ++l)
            for (long k = 0; k < 4; ++k)
                CHECK(std::abs(Y(l, k) - quasiperiodic_value(X, {l - 1, k})) < 1e-14);
    }
    SUBCASE("random kernels: grid path equals vectorized path") {
        for (int it = 0; it < 50; ++it) {
            CMat fund = CMat::Random(4, 4), X = CMat::Random(4, 4);
            CMat via_grid = twisted_convolution_io(X, fund, p);
            CMat via_matrix = devectorize(build_H_from_heff(fund, p) * vectorize(X), 4, 4);
            CHECK((via_grid - via_matrix).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("quasi-periodicity identities hold exactly") {
    CMat X = CMat::Random(4, 4);
    for (long l = 0; l < 4; ++l) {
        for (long k = 0; k < 4; ++k) {
            cplx lhs = quasiperiodic_value(X, {l + 4, k});
            cplx rhs = std::polar(1.0, 2.0 * M_PI * k / 4.0) * X(l, k);
            CHECK(std::abs(lhs - rhs) < 1e-15);
            CHECK(quasiperiodic_value(X, {l, k + 4}) == X(l, k));
        }
    }
}

TEST_CASE("dd noise covariance") {
    LatticeParams p = small();
    PulseMatrix P = rect_set(p);

    CMat C = dd_noise_covariance(P, 0.3);
    CHECK((C - 0.3 * CMat::Identity(p.grid_size(), p.grid_size())).cwiseAbs().maxCoeff() < 1e-7);
    CHECK(dd_noise_covariance(P, 0.0).norm() == 0.0);

    Window Ap = make_freq_window(WindowKind::Pswf, p, 0.3, PswfShape{1.2, 2.0, 512});
    SampledWindow Bp = sample_time_window(
        make_time_window(WindowKind::Pswf, p, 0.3, PswfShape{1.3, 2.0, 512}), p);
    CMat Cp = dd_noise_covariance(build_pulse_matrix(Ap, Bp, p), 1.0);
    CMat off = Cp - CMat(Cp.diagonal().asDiagonal());
    CHECK(off.cwiseAbs().maxCoeff() > 1e-3);  // colored for non-orthogonal sets
}

TEST_CASE("same-response property for on-grid channels") {
    // with rectangular windows and integer-bin delay/Doppler, deconvolved
    // responses from two pilot positions coincide wherever neither read wraps
    LatticeParams p = small();
    PulseMatrix P = rect_set(p);
    PathSet chan;
    chan.paths.push_back({std::polar(0.9, 1.1), 1.0 * p.T / p.M, 2.0 * p.delta_f / p.N});

    auto deconvolved = [&](long lp, long kp) {
        CVec resp = correlate_receive(
            apply_channel(P.entries.col(kp * p.M + lp), chan, p), P);
        CMat grid = devectorize(resp, p.M, p.N);
        CMat out = CMat::Zero(p.M, p.N);
        for (long i = 0; i < p.M; ++i)
            for (long j = 0; j < p.N; ++j) {
                long lam = i - p.M / 2, kap = j - p.N / 2;
                long lr = lp + lam, kr = kp + kap;
                if (lr < 0 || lr >= p.M || kr < 0 || kr >= p.N) continue;  // no wrap
                out(i, j) = grid(lr, kr) *
                            std::polar(1.0, -2.0 * M_PI * kap * lp / (double(p.M) * p.N));
            }
        return out;
    };

    CMat a = deconvolved(p.M / 2, p.N / 2);
    CMat b = deconvolved(p.M / 2 - 2, p.N / 2 + 1);
    for (long i = 2; i < p.M - 2; ++i)
        for (long j = 2; j < p.N - 2; ++j)
            CHECK(std::abs(a(i, j) - b(i, j)) < 1e-8);
}
