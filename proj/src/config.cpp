#include "actin/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "actin/errors.hpp"

namespace actin {

namespace {

using nlohmann::json;

constexpr double kNs = 1e-9;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
    }
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) fail(path, "missing key '" + key + "'");
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

double get_number_or(const json& obj, const std::string& path,
                     const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) fail(path, "missing key '" + key + "'");
    if (!obj[key].is_number_integer()) fail(path + "." + key, "expected an integer");
    return obj[key].get<int>();
}

std::vector<int> get_cells(const json& obj, const std::string& path) {
    if (!obj.contains("cells")) fail(path, "missing key 'cells'");
    const json& arr = obj["cells"];
    if (!arr.is_array() || arr.empty()) fail(path + ".cells", "expected a non-empty array");
    std::vector<int> cells;
    for (const auto& v : arr) {
        if (!v.is_number_integer()) fail(path + ".cells", "expected integers");
        cells.push_back(v.get<int>());
    }
    return cells;
}

Waveform waveform_from_json(const json& j, const std::string& path, double scale) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        fail(path, "waveform needs a string 'kind'");
    }
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "tanh_step") {
        check_keys(j, path, {"kind", "t0_ns"});
        return Waveform::tanh_step(get_number_or(j, path, "t0_ns", 3.0) * kNs, scale);
    }
    if (kind == "sine") {
        check_keys(j, path, {"kind", "amplitude", "period_ns", "phase_rad"});
        return Waveform::sine(get_number_or(j, path, "amplitude", 1.0),
                              get_number_or(j, path, "period_ns", 1.0) * kNs,
                              get_number_or(j, path, "phase_rad", 0.0), scale);
    }
    if (kind == "constant") {
        check_keys(j, path, {"kind", "value"});
        return Waveform::constant(get_number_or(j, path, "value", 1.0), scale);
    }
    fail(path + ".kind", "unknown waveform kind '" + kind + "'");
}

StimulusSpec stimulus_from_json(const json& j, const std::string& path) {
    check_keys(j, path, {"cells", "mode", "waveform", "scale"});
    StimulusSpec spec;
    spec.cells = get_cells(j, path);
    if (!j.contains("mode") || !j["mode"].is_string()) {
        fail(path, "missing string key 'mode'");
    }
    const std::string mode = j["mode"].get<std::string>();
    if (mode == "initial") {
        spec.mode = StimulusSpec::Mode::Initial;
    } else if (mode == "clamp") {
        spec.mode = StimulusSpec::Mode::Clamp;
    } else {
        fail(path + ".mode", "expected 'initial' or 'clamp'");
    }
    if (!j.contains("waveform")) fail(path, "missing key 'waveform'");
    spec.waveform = waveform_from_json(j["waveform"], path + ".waveform",
                                       get_number_or(j, path, "scale", 1.0));
    return spec;
}

DerivationInputs derive_from_json(const json& j, const std::string& path) {
    check_keys(j, path,
               {"temperature_k", "dielectric_constant", "monomer_length_m",
                "actin_radius_m", "ion_size_m", "magnetic_permeability_h_m",
                "conc_k_mol_l", "conc_na_mol_l", "molar_conductivity_k",
                "molar_conductivity_na", "r2_ratio"});
    DerivationInputs in;
    in.temperature = get_number_or(j, path, "temperature_k", in.temperature);
    in.dielectric_constant =
        get_number_or(j, path, "dielectric_constant", in.dielectric_constant);
    in.monomer_length = get_number_or(j, path, "monomer_length_m", in.monomer_length);
    in.actin_radius = get_number_or(j, path, "actin_radius_m", in.actin_radius);
    in.ion_size = get_number_or(j, path, "ion_size_m", in.ion_size);
    in.magnetic_permeability =
        get_number_or(j, path, "magnetic_permeability_h_m", in.magnetic_permeability);
    in.conc_K = get_number_or(j, path, "conc_k_mol_l", in.conc_K);
    in.conc_Na = get_number_or(j, path, "conc_na_mol_l", in.conc_Na);
    in.molar_conductivity_K =
        get_number_or(j, path, "molar_conductivity_k", in.molar_conductivity_K);
    in.molar_conductivity_Na =
        get_number_or(j, path, "molar_conductivity_na", in.molar_conductivity_Na);
    in.r2_ratio = get_number_or(j, path, "r2_ratio", in.r2_ratio);
    return in;
}

ReadoutSpec readout_from_json(const json& j, const std::string& path) {
    check_keys(j, path, {"cells", "threshold_fraction", "window_ns"});
    ReadoutSpec r;
    r.cells = get_cells(j, path);
    r.threshold_fraction =
        get_number_or(j, path, "threshold_fraction", r.threshold_fraction);
    r.window = get_number_or(j, path, "window_ns", 1.0) * kNs;
    return r;
}

RunSettings run_from_json(const json& j, const std::string& path) {
    check_keys(j, path,
               {"t_end_ns", "dt_ns", "sample_every_ns", "method", "newton_tol",
                "newton_max_iters"});
    RunSettings s;
    s.t_end = get_number(j, path, "t_end_ns") * kNs;
    s.dt = get_number_or(j, path, "dt_ns", 1e-3) * kNs;
    s.sample_every = get_number_or(j, path, "sample_every_ns", 1e-2) * kNs;
    if (j.contains("method")) {
        if (!j["method"].is_string()) fail(path + ".method", "expected a string");
        const std::string m = j["method"].get<std::string>();
        if (m == "implicit_trapezoidal") {
            s.method = Method::ImplicitTrapezoidal;
        } else if (m == "explicit_rk4") {
            s.method = Method::ExplicitRk4;
        } else {
            fail(path + ".method", "unknown method '" + m + "'");
        }
    }
    s.newton_tol = get_number_or(j, path, "newton_tol", s.newton_tol);
    if (j.contains("newton_max_iters")) {
        s.newton_max_iters = get_int(j, path, "newton_max_iters");
    }
    s.validate();
    return s;
}

json run_to_json(const RunSettings& s) {
    return {
        {"t_end_ns", s.t_end / kNs},
        {"dt_ns", s.dt / kNs},
        {"sample_every_ns", s.sample_every / kNs},
        {"method", s.method == Method::ImplicitTrapezoidal ? "implicit_trapezoidal"
                                                           : "explicit_rk4"},
        {"newton_tol", s.newton_tol},
        {"newton_max_iters", s.newton_max_iters},
    };
}

json readout_to_json(const ReadoutSpec& r) {
    return {
        {"cells", r.cells},
        {"threshold_fraction", r.threshold_fraction},
        {"window_ns", r.window / kNs},
    };
}

}  // namespace

nlohmann::json waveform_to_json(const Waveform& w) {
    switch (w.kind) {
        case Waveform::Kind::TanhStep:
            return {{"kind", "tanh_step"}, {"t0_ns", w.t0 / kNs}};
        case Waveform::Kind::Sine:
            return {{"kind", "sine"},
                    {"amplitude", w.amplitude},
                    {"period_ns", w.period / kNs},
                    {"phase_rad", w.phase}};
        case Waveform::Kind::Constant:
            return {{"kind", "constant"}, {"value", w.value}};
    }
    return {};
}

nlohmann::json stimulus_to_json(const StimulusSpec& s) {
    return {
        {"cells", s.cells},
        {"mode", s.mode == StimulusSpec::Mode::Initial ? "initial" : "clamp"},
        {"waveform", waveform_to_json(s.waveform)},
        {"scale", s.waveform.scale},
    };
}

nlohmann::json gate_to_json(const GateSpec& g) {
    json lumped = json::array();
    for (const auto& [lo, hi] : g.lumped_groups) {
        lumped.push_back({{"cells", {lo, hi}}});
    }
    json inputs = json::array();
    for (const auto& in : g.inputs) {
        json sites = json::array();
        for (const auto& s : in.sites) sites.push_back(stimulus_to_json(s));
        inputs.push_back(sites);
    }
    json constants = json::array();
    for (const auto& s : g.constants) constants.push_back(stimulus_to_json(s));
    json readouts = json::array();
    for (const auto& r : g.readouts) readouts.push_back(readout_to_json(r));
    return {
        {"name", g.name},
        {"n_cells", g.n_cells},
        {"params",
         {{"R1_ohm", g.cell.R1},
          {"R2_ohm", g.cell.R2},
          {"L_henry", g.cell.L},
          {"C0_farad", g.cell.C0}}},
        {"b", g.cell.b},
        {"lumped_groups", lumped},
        {"inputs", inputs},
        {"constants", constants},
        {"readouts", readouts},
        {"run", run_to_json(g.run)},
        {"v0", g.v0},
    };
}

GateSpec gate_from_json(const nlohmann::json& j, const std::string& path) {
    check_keys(j, path,
               {"name", "n_cells", "params", "b", "lumped_groups", "inputs",
                "constants", "readouts", "run", "v0"});
    GateSpec g;
    if (j.contains("name")) g.name = j["name"].get<std::string>();
    g.n_cells = get_int(j, path, "n_cells");
    const json& p = j.at("params");
    check_keys(p, path + ".params", {"R1_ohm", "R2_ohm", "L_henry", "C0_farad"});
    g.cell.R1 = get_number(p, path + ".params", "R1_ohm");
    g.cell.R2 = get_number(p, path + ".params", "R2_ohm");
    g.cell.L = get_number(p, path + ".params", "L_henry");
    g.cell.C0 = get_number(p, path + ".params", "C0_farad");
    g.cell.b = get_number_or(j, path, "b", 0.1);
    if (j.contains("lumped_groups")) {
        for (size_t i = 0; i < j["lumped_groups"].size(); ++i) {
            const json& grp = j["lumped_groups"][i];
            const std::string gpath = path + ".lumped_groups[" + std::to_string(i) + "]";
            check_keys(grp, gpath, {"cells"});
            const auto cells = get_cells(grp, gpath);
            if (cells.size() != 2) fail(gpath, "expected [lo, hi]");
            g.lumped_groups.emplace_back(cells[0], cells[1]);
        }
    }
    if (!j.contains("inputs")) fail(path, "missing key 'inputs'");
    for (size_t i = 0; i < j["inputs"].size(); ++i) {
        InputBinding binding;
        for (size_t k = 0; k < j["inputs"][i].size(); ++k) {
            binding.sites.push_back(stimulus_from_json(
                j["inputs"][i][k],
                path + ".inputs[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
        }
        g.inputs.push_back(std::move(binding));
    }
    if (j.contains("constants")) {
        for (size_t i = 0; i < j["constants"].size(); ++i) {
            g.constants.push_back(stimulus_from_json(
                j["constants"][i], path + ".constants[" + std::to_string(i) + "]"));
        }
    }
    if (!j.contains("readouts")) fail(path, "missing key 'readouts'");
    for (size_t i = 0; i < j["readouts"].size(); ++i) {
        g.readouts.push_back(readout_from_json(
            j["readouts"][i], path + ".readouts[" + std::to_string(i) + "]"));
    }
    if (!j.contains("run")) fail(path, "missing key 'run'");
    g.run = run_from_json(j["run"], path + ".run");
    g.v0 = get_number_or(j, path, "v0", 1.0);
    g.validate();
    return g;
}

CellParams RunConfig::cell_params() const {
    CellParams p;
    if (explicit_params) {
        p = *explicit_params;
    } else if (derive_inputs) {
        p = derive_cell_params(*derive_inputs, b);
    } else {
        throw ConfigError("filament needs either 'params' or 'derive'");
    }
    p.b = b;
    p.validate();
    return p;
}

FilamentConfig RunConfig::filament() const {
    return FilamentConfig::with_lumped_groups(n_cells, cell_params(), lumped_groups);
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    check_keys(root, "config", {"filament", "stimuli", "run", "gate", "readout"});

    RunConfig cfg;
    if (!root.contains("filament")) fail("config", "missing key 'filament'");
    const json& fil = root["filament"];
    check_keys(fil, "filament", {"n_cells", "b", "params", "derive", "lumped_groups"});
    cfg.n_cells = get_int(fil, "filament", "n_cells");
    cfg.b = get_number_or(fil, "filament", "b", cfg.b);
    if (fil.contains("params") && fil.contains("derive")) {
        fail("filament", "'params' and 'derive' are mutually exclusive");
    }
    if (fil.contains("params")) {
        const json& p = fil["params"];
        check_keys(p, "filament.params", {"R1_ohm", "R2_ohm", "L_henry", "C0_farad"});
        CellParams cp;
        cp.R1 = get_number(p, "filament.params", "R1_ohm");
        cp.R2 = get_number(p, "filament.params", "R2_ohm");
        cp.L = get_number(p, "filament.params", "L_henry");
        cp.C0 = get_number(p, "filament.params", "C0_farad");
        cfg.explicit_params = cp;
    } else if (fil.contains("derive")) {
        cfg.derive_inputs = derive_from_json(fil["derive"], "filament.derive");
    } else {
        fail("filament", "needs either 'params' or 'derive'");
    }
    if (fil.contains("lumped_groups")) {
        for (size_t i = 0; i < fil["lumped_groups"].size(); ++i) {
            const json& grp = fil["lumped_groups"][i];
            const std::string gpath = "filament.lumped_groups[" + std::to_string(i) + "]";
            check_keys(grp, gpath, {"cells"});
            const auto cells = get_cells(grp, gpath);
            if (cells.size() != 2) fail(gpath, "expected [lo, hi]");
            cfg.lumped_groups.emplace_back(cells[0], cells[1]);
        }
    }

    if (root.contains("stimuli")) {
        if (!root["stimuli"].is_array()) fail("stimuli", "expected an array");
        for (size_t i = 0; i < root["stimuli"].size(); ++i) {
            cfg.stimuli.push_back(stimulus_from_json(
                root["stimuli"][i], "stimuli[" + std::to_string(i) + "]"));
        }
    }

    if (!root.contains("run")) fail("config", "missing key 'run'");
    cfg.run = run_from_json(root["run"], "run");

    if (root.contains("gate")) {
        const json& gate = root["gate"];
        check_keys(gate, "gate", {"name", "spec", "inputs"});
        if (gate.contains("name") == gate.contains("spec")) {
            fail("gate", "needs exactly one of 'name' or 'spec'");
        }
        if (gate.contains("name")) {
            cfg.gate_name = gate["name"].get<std::string>();
        } else {
            cfg.inline_gate = gate_from_json(gate["spec"], "gate.spec");
        }
        if (gate.contains("inputs")) {
            for (const auto& v : gate["inputs"]) {
                cfg.gate_inputs.push_back(v.get<int>() != 0 ? 1 : 0);
            }
        }
    }

    if (root.contains("readout")) {
        cfg.readout = readout_from_json(root["readout"], "readout");
    }

    // semantic validation up-front, before any computation
    cfg.filament();
    {
        const FilamentConfig f = cfg.filament();
        apply_stimuli(f, cfg.stimuli);
        if (cfg.readout) {
            cfg.readout->validate();
            for (int c : cfg.readout->cells) f.site(c);
            if (cfg.readout->window > cfg.run.t_end) {
                fail("readout.window_ns", "window longer than the run");
            }
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::json RunConfig::to_json() const {
    json fil = {{"n_cells", n_cells}, {"b", b}};
    if (explicit_params) {
        fil["params"] = {{"R1_ohm", explicit_params->R1},
                         {"R2_ohm", explicit_params->R2},
                         {"L_henry", explicit_params->L},
                         {"C0_farad", explicit_params->C0}};
    }
    if (derive_inputs) {
        const DerivationInputs& d = *derive_inputs;
        fil["derive"] = {{"temperature_k", d.temperature},
                         {"dielectric_constant", d.dielectric_constant},
                         {"monomer_length_m", d.monomer_length},
                         {"actin_radius_m", d.actin_radius},
                         {"ion_size_m", d.ion_size},
                         {"magnetic_permeability_h_m", d.magnetic_permeability},
                         {"conc_k_mol_l", d.conc_K},
                         {"conc_na_mol_l", d.conc_Na},
                         {"molar_conductivity_k", d.molar_conductivity_K},
                         {"molar_conductivity_na", d.molar_conductivity_Na},
                         {"r2_ratio", d.r2_ratio}};
    }
    if (!lumped_groups.empty()) {
        json lumped = json::array();
        for (const auto& [lo, hi] : lumped_groups) {
            lumped.push_back({{"cells", {lo, hi}}});
        }
        fil["lumped_groups"] = lumped;
    }
    json stim = json::array();
    for (const auto& s : stimuli) stim.push_back(stimulus_to_json(s));
    json out = {{"filament", fil}, {"stimuli", stim}, {"run", run_to_json(run)}};
    if (gate_name || inline_gate) {
        json gate;
        if (gate_name) gate["name"] = *gate_name;
        if (inline_gate) gate["spec"] = gate_to_json(*inline_gate);
        if (!gate_inputs.empty()) gate["inputs"] = gate_inputs;
        out["gate"] = gate;
    }
    if (readout) out["readout"] = readout_to_json(*readout);
    return out;
}

}  // namespace actin
