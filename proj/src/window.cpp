#include "zakotfs/window.hpp"

#include <cmath>
#include <numbers>

namespace zakotfs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

cplx simpson_recurse(const std::function<cplx(double)>& f, double a, double b, cplx fa, cplx fm,
                     cplx fb, cplx whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    cplx flm = f(lm), frm = f(rm);
    cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    cplx delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                        int min_panels) {
    if (!(b > a)) return cplx(0.0, 0.0);
    cplx total(0.0, 0.0);
    double h = (b - a) / min_panels;
    for (int i = 0; i < min_panels; ++i) {
        double x0 = a + i * h, x1 = a + (i + 1) * h, xm = 0.5 * (x0 + x1);
        cplx f0 = f(x0), fm = f(xm), f1 = f(x1);
        cplx whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson_recurse(f, x0, x1, f0, fm, f1, whole, abs_tol / min_panels, 28);
    }
    return total;
}

PswfSolution solve_pswf(double t_prime, double b_prime, int grid_size) {
    if (!(t_prime > 0.0) || !(b_prime > 0.0)) {
        throw std::invalid_argument("solve_pswf: intervals must be positive");
    }
    if (grid_size < 64) {
        throw std::invalid_argument("solve_pswf: grid_size must be >= 64");
    }
    const int G = grid_size;
    Eigen::VectorXd x(G), w(G);
    const double h = 2.0 * t_prime / (G - 1);
    for (int i = 0; i < G; ++i) {
        x[i] = -t_prime + i * h;
        w[i] = (i == 0 || i == G - 1) ? 0.5 * h : h;
    }
    // symmetrized Nystrom matrix  W^{1/2} K W^{1/2}
    Eigen::MatrixXd sym(G, G);
    for (int i = 0; i < G; ++i) {
        for (int j = 0; j <= i; ++j) {
            double k = b_prime * sinc(b_prime * (x[i] - x[j]));
            double v = std::sqrt(w[i] * w[j]) * k;
            sym(i, j) = v;
            sym(j, i) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("solve_pswf: eigen-solver failed");
    }
    PswfSolution sol;
    sol.grid = x;
    sol.t_prime = t_prime;
    sol.b_prime = b_prime;
    sol.lambda0 = es.eigenvalues()(G - 1);
    sol.lambda1 = es.eigenvalues()(G - 2);
    sol.degenerate_leading_pair = (sol.lambda0 - sol.lambda1) < 1e-12;
    Eigen::VectorXd psi = es.eigenvectors().col(G - 1);
    for (int i = 0; i < G; ++i) psi[i] /= std::sqrt(w[i]);
    psi /= std::sqrt(psi.cwiseAbs2().dot(w));  // unit energy under the quadrature
    if (psi[G / 2] < 0.0) psi = -psi;          // sign convention psi0(0) > 0
    sol.psi0 = psi;
    return sol;
}

double PswfSolution::evaluate(double t) const {
    if (std::abs(t) > t_prime) return 0.0;
    const int G = static_cast<int>(grid.size());
    const double h = grid[1] - grid[0];
    double pos = (t - grid[0]) / h;
    int i1 = std::min(std::max(static_cast<int>(std::floor(pos)), 0), G - 2);
    double u = pos - i1;
    int i0 = std::max(i1 - 1, 0);
    int i2 = i1 + 1;
    int i3 = std::min(i1 + 2, G - 1);
    double p0 = psi0[i0], p1 = psi0[i1], p2 = psi0[i2], p3 = psi0[i3];
    // Catmull-Rom
    double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    double c = -0.5 * p0 + 0.5 * p2;
    return ((a * u + b) * u + c) * u + p1;
}

Window::Window(WindowSpec spec) : spec_(spec) {
    if (spec_.kind == WindowKind::Pswf) {
        throw std::logic_error("Window: PSWF window requires a solved PswfSolution");
    }
    if (!(spec_.span > 0.0)) throw std::invalid_argument("Window: span must be positive");
    if (spec_.rolloff < 0.0 || spec_.rolloff > 1.0) {
        throw std::invalid_argument("Window: rolloff must be in [0, 1]");
    }
    if (spec_.kind == WindowKind::Rectangular) {
        amp_ = 1.0 / std::sqrt(spec_.span);
    } else {
        // unit energy: the squared profile is a raised-cosine of the base span
        amp_ = 1.0 / std::sqrt(spec_.span / (1.0 + spec_.rolloff));
    }
}

Window::Window(WindowSpec spec, std::shared_ptr<const PswfSolution> pswf)
    : spec_(spec), pswf_(std::move(pswf)) {
    if (spec_.kind != WindowKind::Pswf) {
        throw std::logic_error("Window: PswfSolution given for a non-PSWF window");
    }
    if (!pswf_) throw std::logic_error("Window: missing PswfSolution");
    // normalize the interpolated profile so the continuous energy is 1
    const PswfSolution* s = pswf_.get();
    cplx energy = integrate_adaptive(
        [s](double t) { return cplx(s->evaluate(t) * s->evaluate(t), 0.0); }, -s->t_prime,
        s->t_prime, 1e-12, 32);
    amp_ = 1.0 / std::sqrt(energy.real());
}

double Window::operator()(double point) const {
    const double half = spec_.span / 2.0;
    switch (spec_.kind) {
        case WindowKind::Rectangular:
            // half-open support [-span/2, span/2): keeps the sampled tone set
            // at exactly M entries per pulse so rect pulsones stay orthogonal
            return (point >= -half && point < half) ? amp_ : 0.0;
        case WindowKind::RootRaisedCosine: {
            const double base = spec_.span / (1.0 + spec_.rolloff);
            const double flat = (1.0 - spec_.rolloff) * base / 2.0;
            double a = std::abs(point);
            if (a <= flat) return amp_;
            if (a >= half) return 0.0;
            return amp_ * std::cos(kPi * (a - flat) / (2.0 * spec_.rolloff * base));
        }
        case WindowKind::Pswf:
            return amp_ * pswf_->evaluate(point);
    }
    return 0.0;
}

namespace {

Window make_window(WindowKind kind, WindowAxis axis, double base_span, double resolution,
                   double rolloff, const PswfShape& shape) {
    WindowSpec spec;
    spec.kind = kind;
    spec.axis = axis;
    spec.rolloff = rolloff;
    switch (kind) {
        case WindowKind::Rectangular:
            spec.span = base_span;
            return Window(spec);
        case WindowKind::RootRaisedCosine:
            spec.span = (1.0 + rolloff) * base_span;
            return Window(spec);
        case WindowKind::Pswf: {
            spec.span = shape.span_factor * base_span;
            spec.dual_width = shape.dual_bins * resolution;
            auto sol = std::make_shared<const PswfSolution>(
                solve_pswf(spec.span / 2.0, spec.dual_width, shape.grid_size));
            return Window(spec, std::move(sol));
        }
    }
    throw std::invalid_argument("make_window: unknown kind");
}

}  // namespace

Window make_freq_window(WindowKind kind, const LatticeParams& params, double rolloff,
                        const PswfShape& pswf) {
    // dual of the frequency axis is delay; one delay bin is 1/(M delta_f)
    return make_window(kind, WindowAxis::Frequency, params.M * params.delta_f,
                       1.0 / (params.M * params.delta_f), rolloff, pswf);
}

Window make_time_window(WindowKind kind, const LatticeParams& params, double rolloff,
                        const PswfShape& pswf) {
    return make_window(kind, WindowAxis::Time, params.frame_duration(),
                       1.0 / params.frame_duration(), rolloff, pswf);
}

SampledWindow sample_time_window(const Window& window, const LatticeParams& params) {
    if (window.axis() != WindowAxis::Time) {
        throw std::invalid_argument("sample_time_window: window must be a time window");
    }
    const long S = params.sample_count();
    SampledWindow out;
    out.samples.resize(S);
    for (long n = 0; n < S; ++n) {
        out.samples[n] = window(params.sample_time(n));
    }
    // mass of the continuous profile lost outside [-NT/2, NT/2)
    const double half_frame = params.frame_duration() / 2.0;
    const double half_support = window.support_halfwidth();
    if (half_support > half_frame) {
        cplx tail = integrate_adaptive(
            [&](double t) { return cplx(window(t) * window(t), 0.0); }, half_frame, half_support,
            1e-12, 16);
        out.truncated_tail_fraction = 2.0 * tail.real();  // window energy is 1
    }
    double norm = out.samples.norm();
    if (norm == 0.0) throw std::invalid_argument("sample_time_window: window vanishes on the grid");
    out.samples /= norm;
    out.energy = 1.0;
    return out;
}

cplx ambiguity_freq(const Window& A, double tau, double nu) {
    const double half = A.support_halfwidth();
    double lo = std::max(-half, nu - half);
    double hi = std::min(half, nu + half);
    if (!(hi > lo)) return cplx(0.0, 0.0);
    int panels = std::max(8, static_cast<int>(8.0 * std::abs(tau) * (hi - lo)) + 8);
    return integrate_adaptive(
        [&](double f) {
            double w = A(f) * A(f - nu);
            return std::polar(w, kTwoPi * f * tau);
        },
        lo, hi, 1e-10, panels);
}

cplx ambiguity_time(const Window& B, double tau, double nu) {
    const double half = B.support_halfwidth();
    double lo = std::max(-half, tau - half);
    double hi = std::min(half, tau + half);
    if (!(hi > lo)) return cplx(0.0, 0.0);
    int panels = std::max(8, static_cast<int>(8.0 * std::abs(nu) * (hi - lo)) + 8);
    return integrate_adaptive(
        [&](double t) {
            double w = B(t) * B(t - tau);
            return std::polar(w, -kTwoPi * nu * (t - tau));
        },
        lo, hi, 1e-10, panels);
}

cplx discrete_periodic_ambiguity(const SampledWindow& window, long l, double k) {
    const long S = window.samples.size();
    const long shift = ((l % S) + S) % S;
    cplx acc(0.0, 0.0);
    for (long n = 0; n < S; ++n) {
        long m = n - shift;
        if (m < 0) m += S;
        double lag = static_cast<double>(n - l);  // bare n-l in the phase
        acc += window.samples[n] * window.samples[m] * std::polar(1.0, -kTwoPi * k * lag / S);
    }
    return acc;
}

SidelobeReport autocorr_sidelobe_peak(const Window& window, AmbiguityCut which) {
    const double half = window.support_halfwidth();
    const double width = 2.0 * half;
    const int n_pts = 4096;
    const bool freq = window.axis() == WindowAxis::Frequency;
    auto cut = [&](double lag) {
        if (which == AmbiguityCut::Transform) {
            return freq ? std::abs(ambiguity_freq(window, lag, 0.0))
                        : std::abs(ambiguity_time(window, 0.0, lag));
        }
        return freq ? std::abs(ambiguity_freq(window, 0.0, lag))
                    : std::abs(ambiguity_time(window, lag, 0.0));
    };
    // the Transform cut is a Fourier transform of |window|^2 and is not
    // compactly supported; search out to several mainlobe widths. The
    // Autocorrelation cut lives on [-span, span].
    const double extent = which == AmbiguityCut::Transform ? 16.0 / width : width;
    const double peak0 = cut(0.0);
    SidelobeReport rep;
    double prev = peak0;
    int boundary_idx = -1;
    Eigen::VectorXd vals(n_pts);
    for (int i = 1; i <= n_pts; ++i) {
        double lag = extent * i / n_pts;
        double v = cut(lag);
        vals[i - 1] = v;
        if (boundary_idx < 0 && v > prev + 1e-14 * peak0) {
            boundary_idx = i - 1;
            rep.boundary = extent * (i - 1) / n_pts;
        }
        prev = v;
    }
    if (boundary_idx < 0) {
        rep.peak = 0.0;
        rep.found = false;
        return rep;
    }
    rep.found = true;
    rep.peak = vals.segment(boundary_idx, n_pts - boundary_idx).maxCoeff() / peak0;
    return rep;
}

}  // namespace zakotfs
