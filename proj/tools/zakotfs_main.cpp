#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zakotfs/sim.hpp"

using namespace zakotfs;

namespace {

SimConfig load_config(const std::string& path) {
    if (path.empty()) return SimConfig{};
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return SimConfig::from_json(text);
}

std::vector<double> parse_sweep(const std::string& spec) {
    // "start:step:stop", inclusive of stop within half a step
    double start, step, stop;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0.0) {
        throw std::invalid_argument("bad sweep spec (want start:step:stop): " + spec);
    }
    std::vector<double> points;
    for (double v = start; v <= stop + step / 2; v += step) points.push_back(v);
    return points;
}

struct CommonOpts {
    std::string config;
    std::string out;
    uint64_t seed = 0;
    bool seed_set = false;
    int trials = 0;
    std::string sweep;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config, "JSON configuration file");
    cmd->add_option("--out", opts.out, "output CSV path");
    cmd->add_option("--seed", opts.seed, "master RNG seed")->each([&](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_option("--trials", opts.trials, "Monte-Carlo trials per sweep point");
    cmd->add_option("--sweep", opts.sweep, "sweep points start:step:stop");
}

SimConfig effective_config(const CommonOpts& opts) {
    SimConfig cfg = load_config(opts.config);
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.trials > 0) cfg.trials = opts.trials;
    if (!opts.sweep.empty()) cfg.sweep_points = parse_sweep(opts.sweep);
    if (!opts.out.empty()) cfg.output = opts.out;
    return cfg;
}

PathSet one_eva_realization(const SimConfig& cfg) {
    Rng rng(cfg.seed);
    return draw_channel(rng, eva_profile(), cfg.nu_max_hz);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zak-OTFS delay-Doppler waveform laboratory"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string window_name = "iota-pswf";
    long pulse_l = 0, pulse_k = 0;
    std::string axis_name = "freq";
    bool toy_channel = false;

    auto* pulse_cmd = app.add_subcommand("pulse", "dump one sampled pulsone");
    add_common(pulse_cmd, opts);
    pulse_cmd->add_option("--window", window_name, "rect | rrc | pswf | iota-pswf");
    pulse_cmd->add_option("--l", pulse_l, "delay bin");
    pulse_cmd->add_option("--k", pulse_k, "Doppler bin");

    auto* amb_cmd = app.add_subcommand("ambiguity", "dump an ambiguity-function grid");
    add_common(amb_cmd, opts);
    amb_cmd->add_option("--window", window_name, "rect | rrc | pswf");
    amb_cmd->add_option("--axis", axis_name, "freq (Y_A) or time (X_B)");

    auto* heff_cmd = app.add_subcommand("heff", "closed-form effective channel grid");
    add_common(heff_cmd, opts);
    heff_cmd->add_option("--window", window_name, "rect | rrc | pswf");
    heff_cmd->add_flag("--toy", toy_channel, "use the single-path toy channel (4, 4.7)");

    auto* est_cmd = app.add_subcommand("estimate", "one seeded pilot-based channel estimate");
    add_common(est_cmd, opts);
    est_cmd->add_option("--window", window_name, "rect | rrc | pswf | iota-pswf");

    auto* psd_cmd = app.add_subcommand("psd", "average transmit PSD of a pulse set");
    add_common(psd_cmd, opts);
    psd_cmd->add_option("--window", window_name, "rect | rrc | pswf | iota-pswf");

    auto* ber_cmd = app.add_subcommand("ber", "Monte-Carlo BER/NMSE sweep");
    add_common(ber_cmd, opts);

    auto* demo_cmd = app.add_subcommand("spreading-demo", "channel-spreading comparison grids");
    add_common(demo_cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        SimConfig cfg = effective_config(opts);
        std::string out = cfg.output;

        if (pulse_cmd->parsed()) {
            cfg.window = window_set_from_string(window_name);
            WindowedPulseSet set = build_pulse_set(cfg.window, cfg);
            if (out.empty()) out = "pulse.csv";
            emit_pulse_csv(set.P.entries.col(pulse_k * cfg.lattice.M + pulse_l), cfg.lattice, out);
            std::cout << "wrote " << out << "\n";
        } else if (amb_cmd->parsed()) {
            WindowKind wk = window_name == "rect" ? WindowKind::Rectangular
                            : window_name == "rrc" ? WindowKind::RootRaisedCosine
                                                   : WindowKind::Pswf;
            const LatticeParams& par = cfg.lattice;
            std::string csv = "tau,nu,re,im,abs\n";
            if (axis_name == "freq") {
                Window w = make_freq_window(wk, par, cfg.rolloff, cfg.pswf_freq);
                for (int i = -64; i <= 64; ++i) {
                    for (int j = -16; j <= 16; ++j) {
                        double tau = i * par.delay_resolution() / 4.0;
                        double nu = j * par.delta_f / 4.0;
                        cplx v = ambiguity_freq(w, tau, nu);
                        char line[160];
                        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", tau,
                                      nu, v.real(), v.imag(), std::abs(v));
                        csv += line;
                    }
                }
            } else {
                Window w = make_time_window(wk, par, cfg.rolloff, cfg.pswf_time);
                for (int i = -16; i <= 16; ++i) {
                    for (int j = -64; j <= 64; ++j) {
                        double tau = i * par.T / 4.0;
                        double nu = j * par.doppler_resolution() / 4.0;
                        cplx v = ambiguity_time(w, tau, nu);
                        char line[160];
                        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", tau,
                                      nu, v.real(), v.imag(), std::abs(v));
                        csv += line;
                    }
                }
            }
            if (out.empty()) out = "ambiguity.csv";
            std::ofstream f(out, std::ios::binary);
            f << csv;
            std::cout << "wrote " << out << "\n";
        } else if (heff_cmd->parsed()) {
            WindowKind wk = window_name == "rect" ? WindowKind::Rectangular
                            : window_name == "rrc" ? WindowKind::RootRaisedCosine
                                                   : WindowKind::Pswf;
            LatticeParams par = toy_channel ? LatticeParams(32, 32, 1.0, 4) : cfg.lattice;
            PathSet paths;
            if (toy_channel) {
                paths.paths.push_back(
                    {cplx(1.0, 0.0), 4.0 / (par.M * par.delta_f), 4.7 / (par.N * par.T)});
            } else {
                paths = one_eva_realization(cfg);
            }
            Window fw = make_freq_window(wk, par, cfg.rolloff, cfg.pswf_freq);
            Window tw = make_time_window(wk, par, cfg.rolloff, cfg.pswf_time);
            SampledWindow ts = sample_time_window(tw, par);
            CMat grid = heff_closed_form_grid(fw, ts, paths, par);
            if (out.empty()) out = "heff.csv";
            emit_grid_csv(grid, true, out);
            std::cout << "wrote " << out << "\n";
        } else if (est_cmd->parsed()) {
            cfg.window = window_set_from_string(window_name);
            WindowedPulseSet set = build_pulse_set(cfg.window, cfg);
            FrameLayout layout =
                FrameLayout::centered(cfg.lattice, cfg.guard_l, cfg.guard_k, cfg.pilot_shrink);
            Rng rng = Rng::for_trial(cfg.seed, 0);
            PathSet paths = draw_channel(rng, eva_profile(), cfg.nu_max_hz);
            const double E_d = layout.data_cell_count();
            const double E_p = E_d * std::pow(10.0, cfg.pdr_db / 10.0);
            const double sigma2 = 1.0 / std::pow(10.0, cfg.snr_db / 10.0);
            std::vector<uint8_t> bits(static_cast<size_t>(layout.data_cell_count()) * 2);
            for (auto& b : bits) b = static_cast<uint8_t>(rng.bit());
            DDFrame frame =
                build_frame(layout, bits, Constellation::qam4().points, 2, E_p, E_d);
            CVec y = correlate_receive(
                add_awgn(apply_channel(modulate(frame, set.P), paths, cfg.lattice), sigma2, rng),
                set.P);
            CMat h_hat = estimate_heff(devectorize(y, cfg.lattice.M, cfg.lattice.N), layout,
                                       std::sqrt(E_p), cfg.lattice);
            if (out.empty()) out = "estimate.csv";
            emit_grid_csv(h_hat, true, out);
            std::cout << "wrote " << out << "\n";
        } else if (psd_cmd->parsed()) {
            cfg.window = window_set_from_string(window_name);
            WindowedPulseSet set = build_pulse_set(cfg.window, cfg);
            PsdResult psd = compute_psd(set.P);
            double bw = bandwidth_fraction(psd, 0.99);
            if (out.empty()) out = "psd.csv";
            emit_psd_csv(psd, out);
            std::cout << "wrote " << out << "; 99% bandwidth = " << bw / cfg.lattice.delta_f
                      << " delta_f\n";
        } else if (ber_cmd->parsed()) {
            SimReport report = run_sweep(cfg);
            if (out.empty()) out = "ber.csv";
            emit_report_csv(report, cfg.sweep_axis, out);
            std::cout << "wrote " << out << " (wall " << report.wall_seconds << " s)\n";
        } else if (demo_cmd->parsed()) {
            auto grids = spreading_demo(cfg);
            std::string base = out.empty() ? "spreading" : out;
            for (const auto& g : grids) {
                std::string path = base + "-" + g.label + ".csv";
                emit_grid_csv(g.grid, g.label.rfind("toy", 0) == 0, path);
                std::cout << "wrote " << path << " (spread@-30dB = " << spread_count(g.grid)
                          << " bins)\n";
            }
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
}
