#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "zakotfs/sim.hpp"

using namespace zakotfs;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

SimConfig tiny_config() {
    SimConfig cfg = SimConfig::from_json(R"({
        "lattice": {"M": 8, "N": 8, "delta_f_hz": 15000.0, "oversampling": 2},
        "window": {"kind": "rect"},
        "layout": {"guard_l": 2, "guard_k": 2, "pilot_shrink": 2},
        "channel": {"nu_max_hz": 400.0},
        "sweep": {"axis": "snr_db", "points": [20.0]},
        "trials": 8, "seed": 3, "threads": 2
    })");
    return cfg;
}

}  // namespace

TEST_CASE("config parsing") {
    SimConfig cfg = tiny_config();
    CHECK(cfg.lattice.M == 8);
    CHECK(cfg.window == WindowSetKind::Rect);
    CHECK(cfg.trials == 8);

    SUBCASE("unknown keys are rejected at every level") {
        CHECK_THROWS_AS(SimConfig::from_json(R"({"latice": {}})"), std::invalid_argument);
        CHECK_THROWS_AS(SimConfig::from_json(R"({"lattice": {"M": 8, "bogus": 1}})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(SimConfig::from_json(R"({"sweep": {"axis": "volume"}})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(SimConfig::from_json(R"({"sweep": {"points": []}})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(SimConfig::from_json(R"({"trials": 0})"), std::invalid_argument);
        CHECK_THROWS_AS(
            SimConfig::from_json(R"({"channel": {"profile_file": "/nonexistent/p.json"}})"),
            std::invalid_argument);
    }
    SUBCASE("window kinds parse") {
        for (const char* k : {"rect", "rrc", "pswf", "iota-pswf"}) {
            std::string doc = std::string(R"({"window": {"kind": ")") + k + R"("}})";
            CHECK_NOTHROW(SimConfig::from_json(doc));
        }
        CHECK_THROWS_AS(SimConfig::from_json(R"({"window": {"kind": "hann"}})"),
                        std::invalid_argument);
    }
}

TEST_CASE("run_sweep is deterministic for a fixed seed and any thread count") {
    SimConfig cfg = tiny_config();
    SimReport a = run_sweep(cfg);
    SimReport b = run_sweep(cfg);
    cfg.threads = 1;
    SimReport c = run_sweep(cfg);
    REQUIRE(a.points.size() == 1);
    CHECK(a.points[0].ber == b.points[0].ber);
    CHECK(a.points[0].nmse == b.points[0].nmse);
    CHECK(a.points[0].ber == c.points[0].ber);
    CHECK(a.points[0].nmse == c.points[0].nmse);
    CHECK(a.config_hash != 0);
}

TEST_CASE("noise helps: mean NMSE drops from 0 dB to 30 dB") {
    SimConfig cfg = tiny_config();
    cfg.sweep_points = {0.0, 30.0};
    cfg.trials = 40;
    SimReport rep = run_sweep(cfg);
    CHECK(rep.points[1].nmse < rep.points[0].nmse);
}

TEST_CASE("psd of a single flat-envelope column is sinc^2 shaped") {
    // one tone under a rectangular time window: |FFT|^2 must follow the
    // squared Dirichlet kernel of the frame length
    LatticeParams p(1, 4, 15e3, 4);
    PulseMatrix P;
    P.params = p;
    P.state = PulseState::UnitEnergy;
    const long S = p.sample_count();
    P.entries = CMat::Zero(S, 1);
    for (long n = 0; n < S; ++n) P.entries(n, 0) = 1.0 / std::sqrt(double(S));

    PsdResult psd = compute_psd(P, 4 * S);
    CHECK(psd.psd.sum() == doctest::Approx(1.0).epsilon(1e-12));
    const long nfft = psd.psd.size();
    // peak sits at f = 0
    long peak_idx = 0;
    psd.psd.maxCoeff(&peak_idx);
    CHECK(std::abs(psd.freq_hz[peak_idx]) < p.sample_rate() / nfft + 1e-9);
    // spot-check the Dirichlet-squared profile off the peak
    for (long off : {3L, 7L, 13L}) {
        long i = peak_idx + off;
        double x = psd.freq_hz[i] / p.sample_rate();  // cycles per sample
        double want = std::pow(std::sin(M_PI * S * x) / (S * std::sin(M_PI * x)), 2.0);
        CHECK(psd.psd[i] / psd.psd[peak_idx] == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("bandwidth metric on synthetic spectra") {
    PsdResult flat;
    const long n = 1000;
    flat.freq_hz.resize(n);
    flat.psd.resize(n);
    for (long i = 0; i < n; ++i) {
        flat.freq_hz[i] = static_cast<double>(i) - n / 2;
        flat.psd[i] = (std::abs(flat.freq_hz[i]) <= 200.0) ? 1.0 / 401.0 : 0.0;
    }
    // ideal flat PSD of width W: 99% interval is 0.99 W
    CHECK(bandwidth_fraction(flat, 0.99) == doctest::Approx(0.99 * 401.0).epsilon(0.01));

    PsdResult delta;
    delta.freq_hz = flat.freq_hz;
    delta.psd = Eigen::VectorXd::Zero(n);
    delta.psd[n / 2] = 1.0;
    CHECK(bandwidth_fraction(delta, 0.99) <= 2.0);  // one bin
}

TEST_CASE("csv emission schemas") {
    SimReport rep;
    rep.points.push_back({20.0, 0.01, 0.002, 10, 0.001, 0.0005});
    emit_report_csv(rep, SweepAxis::SnrDb, "/tmp/zakotfs_test_report.csv");
    std::string text = slurp("/tmp/zakotfs_test_report.csv");
    CHECK(text.rfind("snr_db,ber,nmse,trials,ci_halfwidth\n", 0) == 0);
    CHECK(text.find("20,0.01") != std::string::npos);

    SimReport empty;
    emit_report_csv(empty, SweepAxis::PdrDb, "/tmp/zakotfs_test_empty.csv");
    CHECK(slurp("/tmp/zakotfs_test_empty.csv") == "pdr_db,ber,nmse,trials,ci_halfwidth\n");

    CMat g = CMat::Random(2, 2);
    emit_grid_csv(g, true, "/tmp/zakotfs_test_grid.csv");
    std::string grid_text = slurp("/tmp/zakotfs_test_grid.csv");
    CHECK(grid_text.rfind("l,k,re,im,abs\n", 0) == 0);
    CHECK(grid_text.find("-1,-1,") != std::string::npos);

    CHECK_THROWS(emit_grid_csv(g, true, "/nonexistent_dir/x.csv"));

    std::remove("/tmp/zakotfs_test_report.csv");
    std::remove("/tmp/zakotfs_test_empty.csv");
    std::remove("/tmp/zakotfs_test_grid.csv");
}

TEST_CASE("trivial end-to-end point: clean channel, orthonormal pulses") {
    SimConfig cfg = tiny_config();
    cfg.window = WindowSetKind::Rect;
    cfg.nu_max_hz = 0.0;  // all paths at nu = 0; eva delays are ~0 bins here
    cfg.csi = CsiMode::Perfect;
    cfg.sweep_points = {60.0};
    cfg.trials = 4;
    SimReport rep = run_sweep(cfg);
    CHECK(rep.points[0].ber == 0.0);
}
