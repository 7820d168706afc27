#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "zakotfs/sim.hpp"

namespace py = pybind11;
using namespace zakotfs;

namespace {

SimConfig config_from_json_str(const std::string& text) { return SimConfig::from_json(text); }

PathSet paths_from_triples(const std::vector<std::tuple<cplx, double, double>>& triples) {
    PathSet set;
    for (const auto& [gain, delay, doppler] : triples) {
        set.paths.push_back({gain, delay, doppler});
    }
    return set;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Discrete-time oversampled Zak-OTFS transceiver chain";

    py::class_<LatticeParams>(m, "LatticeParams")
        .def(py::init<int, int, double, int>(), py::arg("M"), py::arg("N"), py::arg("delta_f"),
             py::arg("L"))
        .def_readonly("M", &LatticeParams::M)
        .def_readonly("N", &LatticeParams::N)
        .def_readonly("delta_f", &LatticeParams::delta_f)
        .def_readonly("T", &LatticeParams::T)
        .def_readonly("L", &LatticeParams::L)
        .def("sample_rate", &LatticeParams::sample_rate)
        .def("sample_count", &LatticeParams::sample_count);

    py::class_<PswfSolution>(m, "PswfSolution")
        .def_readonly("grid", &PswfSolution::grid)
        .def_readonly("psi0", &PswfSolution::psi0)
        .def_readonly("lambda0", &PswfSolution::lambda0)
        .def("evaluate", &PswfSolution::evaluate);

    m.def("solve_pswf", &solve_pswf, py::arg("t_prime"), py::arg("b_prime"),
          py::arg("grid_size") = 1024);

    py::class_<WindowedPulseSet>(m, "PulseSet")
        .def_property_readonly("matrix",
                               [](const WindowedPulseSet& s) { return s.P.entries; })
        .def_property_readonly("kind", [](const WindowedPulseSet& s) { return to_string(s.kind); })
        .def_property_readonly("orthogonality_defect",
                               [](const WindowedPulseSet& s) { return orthogonality_defect(s.P); });

    m.def(
        "build_pulse_set",
        [](const std::string& kind, const std::string& config_json) {
            SimConfig cfg = config_json.empty() ? SimConfig{} : config_from_json_str(config_json);
            return build_pulse_set(window_set_from_string(kind), cfg);
        },
        py::arg("kind"), py::arg("config_json") = std::string{},
        "Build a unit-energy (or IOTA-orthogonalized) pulse matrix for one of "
        "rect | rrc | pswf | iota-pswf.");

    m.def(
        "modulate",
        [](const WindowedPulseSet& set, const CMat& symbols) {
            return CVec(set.P.entries * vectorize(symbols));
        },
        py::arg("pulse_set"), py::arg("symbols"), "s = P vec(X) for an M x N symbol grid");

    m.def(
        "correlate_receive",
        [](const WindowedPulseSet& set, const CVec& r) { return correlate_receive(r, set.P); },
        py::arg("pulse_set"), py::arg("r"));

    m.def(
        "apply_channel",
        [](const CVec& s, const std::vector<std::tuple<cplx, double, double>>& paths,
           const LatticeParams& params) {
            return apply_channel(s, paths_from_triples(paths), params);
        },
        py::arg("s"), py::arg("paths"), py::arg("params"),
        "paths: list of (gain, delay_s, doppler_hz)");

    m.def(
        "effective_channel",
        [](const WindowedPulseSet& set,
           const std::vector<std::tuple<cplx, double, double>>& paths) {
            EffectiveChannel eff =
                effective_channel_matrix(set.P, set.P, paths_from_triples(paths));
            return py::make_tuple(eff.H, eff.fundamental);
        },
        py::arg("pulse_set"), py::arg("paths"),
        "Returns (H, fundamental_grid) for the matrix-product construction.");

    m.def(
        "build_H_from_heff",
        [](const CMat& fundamental, const LatticeParams& params) {
            return build_H_from_heff(fundamental, params);
        },
        py::arg("fundamental"), py::arg("params"));

    m.def(
        "twisted_convolution",
        [](const CMat& X, const CMat& heff, const LatticeParams& params) {
            return twisted_convolution_io(X, heff, params);
        },
        py::arg("X"), py::arg("heff_fundamental"), py::arg("params"));

    m.def(
        "draw_eva_channel",
        [](uint64_t seed, double nu_max) {
            Rng rng(seed);
            PathSet set = draw_channel(rng, eva_profile(), nu_max);
            std::vector<std::tuple<cplx, double, double>> out;
            for (const Path& p : set.paths) out.emplace_back(p.gain, p.delay, p.doppler);
            return out;
        },
        py::arg("seed"), py::arg("nu_max_hz") = 815.0);

    m.def(
        "psd_bandwidth",
        [](const WindowedPulseSet& set, double fraction) {
            return bandwidth_fraction(compute_psd(set.P), fraction);
        },
        py::arg("pulse_set"), py::arg("fraction") = 0.99,
        "Width in Hz of the smallest centered interval holding the given power fraction.");

    m.def(
        "run_sweep",
        [](const std::string& config_json) {
            SimConfig cfg = config_from_json_str(config_json);
            SimReport rep = run_sweep(cfg);
            nlohmann::json j;
            j["seed"] = rep.seed;
            j["config_hash"] = rep.config_hash;
            j["wall_seconds"] = rep.wall_seconds;
            j["points"] = nlohmann::json::array();
            for (const auto& p : rep.points) {
                j["points"].push_back({{"axis_value", p.axis_value},
                                       {"ber", p.ber},
                                       {"nmse", p.nmse},
                                       {"trials", p.trials},
                                       {"ber_ci", p.ber_ci},
                                       {"nmse_ci", p.nmse_ci}});
            }
            py::module_ json_mod = py::module_::import("json");
            return json_mod.attr("loads")(j.dump());
        },
        py::arg("config_json"),
        "Monte-Carlo BER/NMSE sweep from a JSON configuration document; "
        "returns a dict mirroring the CSV report.");
}
