#include "zakotfs/sim.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

namespace zakotfs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
        }
    }
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// iterative radix-2 FFT, in place
void fft_pow2(std::vector<cplx>& x) {
    const size_t n = x.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = -kTwoPi / static_cast<double>(len);
        cplx wlen = std::polar(1.0, ang);
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                cplx u = x[i + j];
                cplx v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

char buf17[64];
std::string fmt17(double v) {
    std::snprintf(buf17, sizeof(buf17), "%.17g", v);
    return buf17;
}

}  // namespace

WindowSetKind window_set_from_string(const std::string& s) {
    if (s == "rect") return WindowSetKind::Rect;
    if (s == "rrc") return WindowSetKind::Rrc;
    if (s == "pswf") return WindowSetKind::Pswf;
    if (s == "iota-pswf") return WindowSetKind::IotaPswf;
    throw std::invalid_argument("unknown window kind: " + s);
}

std::string to_string(WindowSetKind k) {
    switch (k) {
        case WindowSetKind::Rect: return "rect";
        case WindowSetKind::Rrc: return "rrc";
        case WindowSetKind::Pswf: return "pswf";
        case WindowSetKind::IotaPswf: return "iota-pswf";
    }
    return "?";
}

SimConfig SimConfig::from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    SimConfig cfg;
    reject_unknown_keys(j,
                        {"lattice", "window", "layout", "channel", "energy", "noise_covariance",
                         "csi", "sweep", "trials", "seed", "threads", "output", "snr_db"},
                        "top level");
    if (j.contains("lattice")) {
        const json& l = j["lattice"];
        reject_unknown_keys(l, {"M", "N", "delta_f_hz", "oversampling"}, "lattice");
        cfg.lattice = LatticeParams(l.value("M", 32), l.value("N", 16),
                                    l.value("delta_f_hz", 15e3), l.value("oversampling", 10));
    }
    if (j.contains("window")) {
        const json& w = j["window"];
        reject_unknown_keys(w,
                            {"kind", "rolloff", "pswf_span_factor_freq", "pswf_span_factor_time",
                             "pswf_dual_bins", "pswf_grid"},
                            "window");
        cfg.window = window_set_from_string(w.value("kind", "iota-pswf"));
        cfg.rolloff = w.value("rolloff", 0.3);
        cfg.pswf_freq.span_factor = w.value("pswf_span_factor_freq", 1.2);
        cfg.pswf_time.span_factor = w.value("pswf_span_factor_time", 1.3);
        cfg.pswf_freq.dual_bins = w.value("pswf_dual_bins", 2.0);
        cfg.pswf_time.dual_bins = cfg.pswf_freq.dual_bins;
        cfg.pswf_freq.grid_size = w.value("pswf_grid", 1024);
        cfg.pswf_time.grid_size = cfg.pswf_freq.grid_size;
    }
    if (j.contains("layout")) {
        const json& l = j["layout"];
        reject_unknown_keys(l, {"guard_l", "guard_k", "pilot_shrink"}, "layout");
        cfg.guard_l = l.value("guard_l", 5);
        cfg.guard_k = l.value("guard_k", 7);
        cfg.pilot_shrink = l.value("pilot_shrink", 2);
    }
    if (j.contains("channel")) {
        const json& c = j["channel"];
        reject_unknown_keys(c, {"profile", "profile_file", "nu_max_hz"}, "channel");
        cfg.profile = c.value("profile", "eva");
        if (c.contains("profile_file") && !c["profile_file"].is_null()) {
            cfg.profile_file = c["profile_file"].get<std::string>();
        }
        cfg.nu_max_hz = c.value("nu_max_hz", 815.0);
    }
    if (j.contains("energy")) {
        const json& e = j["energy"];
        reject_unknown_keys(e, {"pdr_db"}, "energy");
        cfg.pdr_db = e.value("pdr_db", 0.0);
    }
    if (j.contains("noise_covariance")) {
        std::string m = j["noise_covariance"].get<std::string>();
        if (m == "white") cfg.noise_cov = NoiseCovMode::White;
        else if (m == "colored") cfg.noise_cov = NoiseCovMode::Colored;
        else throw std::invalid_argument("config: noise_covariance must be white or colored");
    }
    if (j.contains("csi")) {
        std::string m = j["csi"].get<std::string>();
        if (m == "perfect") cfg.csi = CsiMode::Perfect;
        else if (m == "estimated") cfg.csi = CsiMode::Estimated;
        else throw std::invalid_argument("config: csi must be perfect or estimated");
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        reject_unknown_keys(s, {"axis", "points"}, "sweep");
        std::string axis = s.value("axis", "snr_db");
        if (axis == "snr_db") cfg.sweep_axis = SweepAxis::SnrDb;
        else if (axis == "pdr_db") cfg.sweep_axis = SweepAxis::PdrDb;
        else if (axis == "guard") cfg.sweep_axis = SweepAxis::Guard;
        else throw std::invalid_argument("config: sweep axis must be snr_db, pdr_db or guard");
        if (s.contains("points")) {
            cfg.sweep_points = s["points"].get<std::vector<double>>();
        }
    }
    if (cfg.sweep_points.empty()) throw std::invalid_argument("config: sweep points empty");
    cfg.snr_db = j.value("snr_db", 20.0);
    cfg.trials = j.value("trials", 500);
    if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    cfg.seed = j.value("seed", uint64_t{1});
    cfg.threads = j.value("threads", 0);
    cfg.output = j.value("output", std::string{});
    if (cfg.profile_file && !std::ifstream(*cfg.profile_file)) {
        throw std::invalid_argument("config: profile_file does not exist: " + *cfg.profile_file);
    }
    return cfg;
}

std::string SimConfig::canonical_json() const {
    json j;
    j["lattice"] = {{"M", lattice.M}, {"N", lattice.N}, {"delta_f_hz", lattice.delta_f},
                    {"oversampling", lattice.L}};
    j["window"] = {{"kind", to_string(window)},
                   {"rolloff", rolloff},
                   {"pswf_span_factor_freq", pswf_freq.span_factor},
                   {"pswf_span_factor_time", pswf_time.span_factor},
                   {"pswf_dual_bins", pswf_freq.dual_bins},
                   {"pswf_grid", pswf_freq.grid_size}};
    j["layout"] = {{"guard_l", guard_l}, {"guard_k", guard_k}, {"pilot_shrink", pilot_shrink}};
    j["channel"] = {{"profile", profile}, {"nu_max_hz", nu_max_hz}};
    j["energy"] = {{"pdr_db", pdr_db}};
    j["noise_covariance"] = noise_cov == NoiseCovMode::White ? "white" : "colored";
    j["csi"] = csi == CsiMode::Perfect ? "perfect" : "estimated";
    j["snr_db"] = snr_db;
    json axis;
    switch (sweep_axis) {
        case SweepAxis::SnrDb: axis = "snr_db"; break;
        case SweepAxis::PdrDb: axis = "pdr_db"; break;
        case SweepAxis::Guard: axis = "guard"; break;
    }
    j["sweep"] = {{"axis", axis}, {"points", sweep_points}};
    j["trials"] = trials;
    j["seed"] = seed;
    return j.dump();
}

WindowedPulseSet build_pulse_set(WindowSetKind kind, const SimConfig& cfg) {
    WindowKind fk, tk;
    switch (kind) {
        case WindowSetKind::Rect: fk = tk = WindowKind::Rectangular; break;
        case WindowSetKind::Rrc: fk = tk = WindowKind::RootRaisedCosine; break;
        default: fk = tk = WindowKind::Pswf; break;
    }
    Window fw = make_freq_window(fk, cfg.lattice, cfg.rolloff, cfg.pswf_freq);
    Window tw = make_time_window(tk, cfg.lattice, cfg.rolloff, cfg.pswf_time);
    SampledWindow ts = sample_time_window(tw, cfg.lattice);
    PulseMatrix P = build_pulse_matrix(fw, ts, cfg.lattice);
    if (kind == WindowSetKind::IotaPswf) {
        P = iota_orthogonalize(P);
    }
    return WindowedPulseSet{std::move(P), std::move(fw), std::move(ts), kind};
}

TrialResult run_trial(const WindowedPulseSet& set, const FrameLayout& layout,
                      const PowerDelayProfile& profile, const SimConfig& cfg, double snr_db,
                      double pdr_db, Rng& rng, const CMat* colored_R) {
    const LatticeParams& par = cfg.lattice;
    const Constellation qam = Constellation::qam4();
    const int n_d = layout.data_cell_count();
    const double E_d = static_cast<double>(n_d);  // E_s = 1 per data symbol
    const double E_s = 1.0;
    const double E_p = E_d * std::pow(10.0, pdr_db / 10.0);
    const double sigma2 = E_s / std::pow(10.0, snr_db / 10.0);

    PathSet paths = draw_channel(rng, profile, cfg.nu_max_hz);

    std::vector<uint8_t> bits(static_cast<size_t>(n_d) * qam.bits_per_symbol);
    for (auto& b : bits) b = static_cast<uint8_t>(rng.bit());
    DDFrame frame = build_frame(layout, bits, qam.points, qam.bits_per_symbol, E_p, E_d);

    CVec s = modulate(frame, set.P);
    CVec r = add_awgn(apply_channel(s, paths, par), sigma2, rng);
    CVec y = correlate_receive(r, set.P);

    // realization truth: deconvolved response of a probe at the frame center
    const long lc = par.M / 2, kc = par.N / 2;
    CVec probe_resp = correlate_receive(
        apply_channel(set.P.entries.col(kc * par.M + lc), paths, par), set.P);
    CMat truth(par.M, par.N);
    for (long i = 0; i < par.M; ++i) {
        for (long j = 0; j < par.N; ++j) {
            long lam = i - par.M / 2, kap = j - par.N / 2;
            long lr = (lc + lam + par.M) % par.M, kr = (kc + kap + par.N) % par.N;
            truth(i, j) = probe_resp[kr * par.M + lr] *
                          std::polar(1.0, -kTwoPi * kap * lc / (double(par.M) * par.N));
        }
    }

    TrialResult out;
    CMat H_hat;
    if (cfg.csi == CsiMode::Perfect) {
        H_hat = effective_channel_matrix(set.P, set.P, paths).H;
        out.nmse = 0.0;
    } else {
        CMat h_hat = estimate_heff(devectorize(y, par.M, par.N), layout, std::sqrt(E_p), par);
        out.nmse = nmse(h_hat, truth);
        H_hat = build_H_from_heff(h_hat, par);
    }

    CVec y_prime = cancel_pilot(y, H_hat, layout, std::sqrt(E_p));
    CMat C_n;
    if (cfg.noise_cov == NoiseCovMode::Colored && colored_R != nullptr) {
        C_n = sigma2 * (*colored_R);
    } else {
        C_n = sigma2 * CMat::Identity(par.grid_size(), par.grid_size());
    }
    CVec soft = lmmse_equalize(y_prime, H_hat, layout, E_s, C_n);
    DetectionResult det = demap(soft, qam);
    out.ber = bit_error_rate(bits, det.bits);
    return out;
}

SimReport run_sweep(const SimConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    PowerDelayProfile profile;
    if (cfg.profile_file) {
        std::ifstream in(*cfg.profile_file);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        profile = profile_from_json(text);
    } else if (cfg.profile == "eva") {
        profile = eva_profile();
    } else {
        throw std::invalid_argument("run_sweep: unknown channel profile " + cfg.profile);
    }

    WindowedPulseSet set = build_pulse_set(cfg.window, cfg);
    CMat colored_R;
    if (cfg.noise_cov == NoiseCovMode::Colored) {
        colored_R = gram(set.P).R;
    }

    int threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    SimReport report;
    report.seed = cfg.seed;
    report.config_hash = fnv1a(cfg.canonical_json());

    for (size_t pi = 0; pi < cfg.sweep_points.size(); ++pi) {
        const double point = cfg.sweep_points[pi];
        double snr = cfg.snr_db, pdr = cfg.pdr_db;
        int g1 = cfg.guard_l, g2 = cfg.guard_k;
        switch (cfg.sweep_axis) {
            case SweepAxis::SnrDb: snr = point; break;
            case SweepAxis::PdrDb: pdr = point; break;
            case SweepAxis::Guard:
                g1 = static_cast<int>(point);
                g2 = g1 + 2;
                break;
        }
        FrameLayout layout = FrameLayout::centered(cfg.lattice, g1, g2, cfg.pilot_shrink);

        std::vector<TrialResult> results(cfg.trials);
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&](int first, int last) {
            try {
                for (int t = first; t < last; ++t) {
                    Rng rng = Rng::for_trial(cfg.seed + 0x9e37 * pi, static_cast<uint64_t>(t));
                    results[t] = run_trial(set, layout, profile, cfg, snr, pdr, rng,
                                           cfg.noise_cov == NoiseCovMode::Colored ? &colored_R
                                                                                  : nullptr);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mutex);
                if (!error) error = std::current_exception();
            }
        };
        if (threads == 1 || cfg.trials == 1) {
            worker(0, cfg.trials);
        } else {
            std::vector<std::thread> pool;
            int chunk = (cfg.trials + threads - 1) / threads;
            for (int w = 0; w < threads; ++w) {
                int first = w * chunk;
                int last = std::min(cfg.trials, first + chunk);
                if (first >= last) break;
                pool.emplace_back(worker, first, last);
            }
            for (auto& th : pool) th.join();
        }
        if (error) std::rethrow_exception(error);

        // fixed-order reduction for bit-stable aggregates
        double ber_sum = 0.0, nmse_sum = 0.0;
        for (const TrialResult& r : results) {
            ber_sum += r.ber;
            nmse_sum += r.nmse;
        }
        double ber_mean = ber_sum / cfg.trials;
        double nmse_mean = nmse_sum / cfg.trials;
        double ber_var = 0.0, nmse_var = 0.0;
        for (const TrialResult& r : results) {
            ber_var += (r.ber - ber_mean) * (r.ber - ber_mean);
            nmse_var += (r.nmse - nmse_mean) * (r.nmse - nmse_mean);
        }
        ber_var /= cfg.trials;
        nmse_var /= cfg.trials;
        SweepPointResult p;
        p.axis_value = point;
        p.ber = ber_mean;
        p.nmse = nmse_mean;
        p.trials = cfg.trials;
        p.ber_ci = 1.96 * std::sqrt(ber_var / cfg.trials);
        p.nmse_ci = 1.96 * std::sqrt(nmse_var / cfg.trials);
        report.points.push_back(p);
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

PsdResult compute_psd(const PulseMatrix& P, long fft_size) {
    const long S = P.samples();
    long want = std::max(fft_size, 2 * S);
    long n = 1;
    while (n < want) n <<= 1;

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    std::vector<cplx> buf(n);
    for (int c = 0; c < P.grid_size(); ++c) {
        std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
        for (long i = 0; i < S; ++i) buf[i] = P.entries(i, c);
        fft_pow2(buf);
        for (long i = 0; i < n; ++i) acc[i] += std::norm(buf[i]);
    }
    acc /= acc.sum();

    PsdResult out;
    out.freq_hz.resize(n);
    out.psd.resize(n);
    const double fs = P.params.sample_rate();
    // fftshift
    for (long i = 0; i < n; ++i) {
        long src = (i + n / 2) % n;
        long bin = src < n / 2 ? src : src - n;
        out.freq_hz[i] = static_cast<double>(bin) * fs / static_cast<double>(n);
        out.psd[i] = acc[src];
    }
    return out;
}

double bandwidth_fraction(const PsdResult& psd, double fraction) {
    const long n = psd.psd.size();
    std::vector<long> order(n);
    for (long i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](long a, long b) {
        return std::abs(psd.freq_hz[a]) < std::abs(psd.freq_hz[b]);
    });
    double cum = 0.0;
    for (long i = 0; i < n; ++i) {
        cum += psd.psd[order[i]];
        if (cum >= fraction) {
            return 2.0 * std::abs(psd.freq_hz[order[i]]);
        }
    }
    return 2.0 * std::abs(psd.freq_hz[order[n - 1]]);
}

std::vector<SpreadingGrid> spreading_demo(const SimConfig& cfg) {
    std::vector<SpreadingGrid> grids;

    // toy system of the motivation example: M = N = 32, T = delta_f = 1,
    // single unit path at (4, 4.7) bins
    LatticeParams toy(32, 32, 1.0, 4);
    PathSet toy_path;
    toy_path.paths.push_back({cplx(1.0, 0.0), 4.0 / (toy.M * toy.delta_f), 4.7 / (toy.N * toy.T)});
    for (WindowKind wk : {WindowKind::Rectangular, WindowKind::RootRaisedCosine}) {
        Window fw = make_freq_window(wk, toy, cfg.rolloff);
        Window tw = make_time_window(wk, toy, cfg.rolloff);
        SpreadingGrid g;
        g.label = std::string("toy-heff-") + (wk == WindowKind::Rectangular ? "rect" : "rrc");
        g.grid = heff_continuous_grid(fw, tw, toy_path, toy);
        grids.push_back(std::move(g));
    }

    // Table-II-scale pilot responses at grid point (15, 7), matched receiver
    PathSet eva_one;
    {
        Rng rng(cfg.seed);
        eva_one = draw_channel(rng, eva_profile(), cfg.nu_max_hz);
    }
    for (WindowSetKind k : {WindowSetKind::Rect, WindowSetKind::Rrc, WindowSetKind::Pswf,
                            WindowSetKind::IotaPswf}) {
        WindowedPulseSet set = build_pulse_set(k, cfg);
        const LatticeParams& par = cfg.lattice;
        CVec probe = set.P.entries.col(7 * par.M + 15);
        CVec resp = correlate_receive(apply_channel(probe, eva_one, par), set.P);
        SpreadingGrid g;
        g.label = "pilot-response-" + to_string(k);
        g.grid = devectorize(resp, par.M, par.N);
        grids.push_back(std::move(g));
    }
    return grids;
}

int spread_count(const CMat& grid, double threshold_db) {
    double peak = grid.cwiseAbs2().maxCoeff();
    double thr = peak * std::pow(10.0, -threshold_db / 10.0);
    int count = 0;
    for (long i = 0; i < grid.rows(); ++i) {
        for (long j = 0; j < grid.cols(); ++j) {
            if (std::norm(grid(i, j)) > thr) ++count;
        }
    }
    return count;
}

std::string axis_column_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::SnrDb: return "snr_db";
        case SweepAxis::PdrDb: return "pdr_db";
        case SweepAxis::Guard: return "guard_l";
    }
    return "axis";
}

void emit_report_csv(const SimReport& report, SweepAxis axis, const std::string& path) {
    std::string out = axis_column_name(axis) + ",ber,nmse,trials,ci_halfwidth\n";
    for (const SweepPointResult& p : report.points) {
        out += fmt17(p.axis_value) + "," + fmt17(p.ber) + "," + fmt17(p.nmse) + "," +
               std::to_string(p.trials) + "," + fmt17(p.ber_ci) + "\n";
    }
    write_file(path, out);
}

void emit_grid_csv(const CMat& grid, bool centered, const std::string& path) {
    std::string out = "l,k,re,im,abs\n";
    const long M = grid.rows(), N = grid.cols();
    for (long i = 0; i < M; ++i) {
        for (long j = 0; j < N; ++j) {
            long l = centered ? i - M / 2 : i;
            long k = centered ? j - N / 2 : j;
            out += std::to_string(l) + "," + std::to_string(k) + "," + fmt17(grid(i, j).real()) +
                   "," + fmt17(grid(i, j).imag()) + "," + fmt17(std::abs(grid(i, j))) + "\n";
        }
    }
    write_file(path, out);
}

void emit_psd_csv(const PsdResult& psd, const std::string& path) {
    std::string out = "f_hz,psd\n";
    for (long i = 0; i < psd.psd.size(); ++i) {
        out += fmt17(psd.freq_hz[i]) + "," + fmt17(psd.psd[i]) + "\n";
    }
    write_file(path, out);
}

void emit_pulse_csv(const CVec& pulse, const LatticeParams& params, const std::string& path) {
    std::string out = "n,t_seconds,re,im\n";
    for (long n = 0; n < pulse.size(); ++n) {
        out += std::to_string(n) + "," + fmt17(static_cast<double>(n) / params.sample_rate()) +
               "," + fmt17(pulse[n].real()) + "," + fmt17(pulse[n].imag()) + "\n";
    }
    write_file(path, out);
}

}  // namespace zakotfs
