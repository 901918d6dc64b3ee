// Python bindings for the core operations: parameter derivation, the charge
// map, config-driven simulation, and the gate library.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "actin/analysis.hpp"
#include "actin/config.hpp"
#include "actin/errors.hpp"
#include "actin/gates.hpp"
#include "actin/integrator.hpp"
#include "actin/model.hpp"
#include "actin/output.hpp"
#include "actin/params.hpp"

namespace py = pybind11;
using namespace actin;

namespace {

py::dict trace_dict(const Trace& trace) {
    py::list times;
    for (double t : trace.times) times.append(t / 1e-9);
    py::list volts;
    for (const auto& row : trace.voltages) volts.append(py::cast(row));
    py::dict out;
    out["times_ns"] = times;
    out["voltages"] = volts;
    out["config_fingerprint"] = trace.config_fingerprint;
    out["settings_fingerprint"] = trace.settings_fingerprint;
    return out;
}

py::dict simulate_config(const std::string& text) {
    const RunConfig cfg = parse_config(text);
    const Trace trace = run_simulation(cfg.filament(), cfg.stimuli, cfg.run);
    py::dict out = trace_dict(trace);
    py::list arrivals;
    for (const auto& t : arrival_times(trace, kArrivalThreshold, 1.0)) {
        if (t) {
            arrivals.append(*t / 1e-9);
        } else {
            arrivals.append(py::none());
        }
    }
    out["arrival_times_ns"] = arrivals;
    try {
        out["speed_m_per_s"] = estimate_speed(trace, kArrivalThreshold, 1.0);
    } catch (const DomainError&) {
        out["speed_m_per_s"] = py::none();
    }
    return out;
}

const GateSpec& find_gate(const std::string& name) {
    const auto& lib = builtin_gate_library().gates;
    const auto it = lib.find(name);
    if (it == lib.end()) throw ConfigError("unknown gate '" + name + "'");
    return it->second;
}

py::dict gate_truth_table(const std::string& name) {
    py::dict out;
    if (name == "XOR_u_cascade") {
        const TruthTable tt = cascade_truth_table(builtin_gate_library().xor_cascade);
        out["inputs"] = tt.inputs;
        out["outputs"] = tt.outputs;
        return out;
    }
    const TruthTable tt = truth_table(find_gate(name));
    out["inputs"] = tt.inputs;
    out["outputs"] = tt.outputs;
    out["levels"] = tt.levels;
    return out;
}

py::tuple gate_run(const std::string& name, const std::vector<int>& bits) {
    const GateResult res = run_gate(find_gate(name), bits);
    return py::make_tuple(res.bits, res.levels);
}

py::dict derive(const DerivationInputs& in, double b) {
    const CellParams p = derive_cell_params(in, b);
    py::dict out;
    out["lambda_b_m"] = bjerrum_length(in);
    out["R1_ohm"] = p.R1;
    out["R2_ohm"] = p.R2;
    out["L_henry"] = p.L;
    out["C0_farad"] = p.C0;
    out["b_per_volt"] = p.b;
    return out;
}

}  // namespace

PYBIND11_MODULE(_actinsim, m) {
    m.doc() = "Nonlinear transmission-line simulator for actin filaments";
    m.attr("__version__") = kToolVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<DerivationInputs>(m, "DerivationInputs")
        .def(py::init<>())
        .def_readwrite("temperature", &DerivationInputs::temperature)
        .def_readwrite("dielectric_constant", &DerivationInputs::dielectric_constant)
        .def_readwrite("monomer_length", &DerivationInputs::monomer_length)
        .def_readwrite("actin_radius", &DerivationInputs::actin_radius)
        .def_readwrite("ion_size", &DerivationInputs::ion_size)
        .def_readwrite("conc_K", &DerivationInputs::conc_K)
        .def_readwrite("conc_Na", &DerivationInputs::conc_Na)
        .def_readwrite("r2_ratio", &DerivationInputs::r2_ratio);

    m.def("derive_params", &derive, py::arg("inputs") = DerivationInputs{},
          py::arg("b") = 0.1,
          "Per-monomer R1, R2, L, C0 (SI units) from physical inputs");
    m.def("charge_map", &charge_map, py::arg("v"), py::arg("b"),
          "W = V - b V^2");
    m.def("invert_charge_map", &invert_charge_map, py::arg("w"), py::arg("b"),
          "Branch of the inverse charge map continuous with V = 0");
    m.def("simulate_config", &simulate_config, py::arg("config_json"),
          "Run a config (JSON text); returns times, voltages, arrivals, speed");
    m.def("gate_names", [] {
        std::vector<std::string> names;
        for (const auto& [name, _] : builtin_gate_library().gates) names.push_back(name);
        names.push_back("XOR_u_cascade");
        return names;
    });
    m.def("truth_table", &gate_truth_table, py::arg("gate_name"));
    m.def("run_gate", &gate_run, py::arg("gate_name"), py::arg("bits"));
}
