#include "zakotfs/channel.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace zakotfs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace

Rng Rng::for_trial(uint64_t master, uint64_t trial) {
    return Rng(splitmix64(splitmix64(master) ^ (trial + 0x51ed2701)));
}

double Rng::uniform() {
    // 53-bit mantissa, uniform on [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double mag = std::sqrt(-2.0 * std::log(u1));
    have_spare_ = true;
    spare_ = mag * std::sin(kTwoPi * u2);
    return mag * std::cos(kTwoPi * u2);
}

cplx Rng::complex_gaussian(double variance) {
    double s = std::sqrt(variance / 2.0);
    return {s * gaussian(), s * gaussian()};
}

double PathSet::max_delay() const {
    double m = 0.0;
    for (const Path& p : paths) m = std::max(m, p.delay);
    return m;
}

double PathSet::max_abs_doppler() const {
    double m = 0.0;
    for (const Path& p : paths) m = std::max(m, std::abs(p.doppler));
    return m;
}

void PowerDelayProfile::validate() const {
    if (taps.empty()) throw std::invalid_argument("PowerDelayProfile: no taps");
    if (taps.front().delay_us != 0.0 || taps.front().power_db != 0.0) {
        throw std::invalid_argument("PowerDelayProfile: first tap must be 0 us / 0 dB");
    }
}

PowerDelayProfile eva_profile() {
    PowerDelayProfile p;
    p.name = "eva";
    p.taps = {{0.0, 0.0}, {0.31, -1.0}, {0.71, -9.0}, {1.09, -10.0}, {1.73, -15.0}, {2.51, -20.0}};
    return p;
}

PowerDelayProfile profile_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    PowerDelayProfile p;
    p.name = j.value("name", "custom");
    for (const auto& t : j.at("taps")) {
        p.taps.push_back({t.at("delay_us").get<double>(), t.at("power_db").get<double>()});
    }
    p.validate();
    return p;
}

PathSet draw_channel(Rng& rng, const PowerDelayProfile& profile, double nu_max) {
    if (nu_max < 0.0) throw std::invalid_argument("draw_channel: nu_max must be nonnegative");
    profile.validate();
    const size_t Q = profile.taps.size();
    std::vector<double> power(Q);
    double total = 0.0;
    for (size_t q = 0; q < Q; ++q) {
        power[q] = std::pow(10.0, profile.taps[q].power_db / 10.0);
        total += power[q];
    }
    PathSet set;
    set.paths.resize(Q);
    for (size_t q = 0; q < Q; ++q) {
        double variance = power[q] / total;  // unit total mean power
        set.paths[q].gain = rng.complex_gaussian(variance);
        set.paths[q].delay = profile.taps[q].delay_us * 1e-6;
        set.paths[q].doppler = nu_max * std::cos(kTwoPi * rng.uniform());
    }
    return set;
}

CVec cyclic_shift(const CVec& s, long shift) {
    const long S = s.size();
    long d = ((shift % S) + S) % S;
    if (d == 0) return s;
    CVec out(S);
    out.head(d) = s.tail(d);
    out.tail(S - d) = s.head(S - d);
    return out;
}

CVec doppler_ramp(const CVec& s, double k_nu) {
    const long S = s.size();
    CVec out(S);
    for (long n = 0; n < S; ++n) {
        out[n] = s[n] * std::polar(1.0, kTwoPi * n * k_nu / S);
    }
    return out;
}

CVec apply_channel(const CVec& s, const PathSet& paths, const LatticeParams& params) {
    const long S = params.sample_count();
    if (s.size() != S) throw std::invalid_argument("apply_channel: length mismatch");
    CVec r = CVec::Zero(S);
    for (const Path& p : paths.paths) {
        long shift = p.sample_shift(params);
        if (shift < 0 || shift >= S) {
            throw std::invalid_argument("apply_channel: path delay exceeds the frame (CP assumption)");
        }
        r += p.gain * cyclic_shift(doppler_ramp(s, p.doppler_bins(params)), shift);
    }
    return r;
}

CVec add_awgn(const CVec& r, double sigma2, Rng& rng) {
    if (sigma2 < 0.0) throw std::invalid_argument("add_awgn: sigma2 must be nonnegative");
    if (sigma2 == 0.0) return r;
    CVec out(r.size());
    for (long n = 0; n < r.size(); ++n) {
        out[n] = r[n] + rng.complex_gaussian(sigma2);
    }
    return out;
}

CrystallineReport crystalline_check(const PathSet& paths, const LatticeParams& params, double W_A,
                                    double W_B) {
    CrystallineReport rep;
    rep.delay_ok = paths.max_delay() < params.T;
    rep.doppler_ok = paths.max_abs_doppler() < params.delta_f;
    rep.freq_ratio = W_A / params.delta_f;
    rep.time_ratio = W_B / params.T;
    rep.freq_window_ok = rep.freq_ratio >= 10.0;
    rep.time_window_ok = rep.time_ratio >= 10.0;
    return rep;
}

}  // namespace zakotfs
