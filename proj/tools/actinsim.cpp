// actinsim: simulate voltage pulses on actin-filament transmission lines and
// evaluate the Boolean gates built on them.
//
// Verbs: derive-params, simulate, gate, sweep, calibrate.
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "actin/analysis.hpp"
#include "actin/config.hpp"
#include "actin/errors.hpp"
#include "actin/gates.hpp"
#include "actin/integrator.hpp"
#include "actin/output.hpp"
#include "actin/params.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace actin;

namespace {

constexpr double kNs = 1e-9;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// derive-params

int cmd_derive_params(const DerivationInputs& in, double b, bool as_json) {
    const double lb = bjerrum_length(in);
    const CellParams p = derive_cell_params(in, b);
    if (as_json) {
        const json out = {
            {"lambda_b_m", lb},
            {"C0_farad", p.C0},
            {"C0_pf", p.C0 * 1e12},
            {"L_henry", p.L},
            {"L_ph", p.L * 1e12},
            {"R1_ohm", p.R1},
            {"R1_mohm", p.R1 * 1e-6},
            {"R2_ohm", p.R2},
            {"R2_mohm", p.R2 * 1e-6},
            {"b_per_volt", p.b},
        };
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("quantity        SI                  common units\n");
        std::printf("lambda_B   %12.6e m\n", lb);
        std::printf("C0         %12.6e F    %12.6g pF\n", p.C0, p.C0 * 1e12);
        std::printf("L          %12.6e H    %12.6g pH\n", p.L, p.L * 1e12);
        std::printf("R1         %12.6e Ohm  %12.6g MOhm\n", p.R1, p.R1 * 1e-6);
        std::printf("R2         %12.6e Ohm  %12.6g MOhm\n", p.R2, p.R2 * 1e-6);
        std::printf("b          %12.6g 1/V\n", p.b);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// shared observable extraction

json arrival_json(const Trace& trace, double theta, double v0) {
    json arr = json::array();
    for (const auto& t : arrival_times(trace, theta, v0)) {
        if (t) {
            arr.push_back(*t / kNs);
        } else {
            arr.push_back(nullptr);
        }
    }
    return arr;
}

std::optional<double> try_speed(const Trace& trace, double theta, double v0) {
    try {
        return estimate_speed(trace, theta, v0);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

// Coarse alternative speed reading: span between the first and the last
// arriving site over the elapsed time from t = 0, matching back-of-envelope
// "distance over total time" estimates.
std::optional<double> span_speed(const Trace& trace, double theta, double v0) {
    const auto at = arrival_times(trace, theta, v0);
    int first = -1, last = -1;
    for (int i = 0; i < static_cast<int>(at.size()); ++i) {
        if (at[i]) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0 || last == first) return std::nullopt;
    const double dt = *at[last];
    if (!(dt > 0.0)) return std::nullopt;
    return (last - first) * 5.4e-9 / dt;
}

json summary_for(const RunConfig& cfg, const Trace& trace) {
    const double theta = kArrivalThreshold;
    const double v0 = 1.0;
    json out = {
        {"tool_version", kToolVersion},
        {"config_fingerprint", trace.config_fingerprint},
        {"settings_fingerprint", trace.settings_fingerprint},
        {"config", cfg.to_json()},
        {"n_cells", trace.n_sites()},
        {"n_samples", trace.n_samples()},
        {"arrival_threshold_fraction", theta},
        {"arrival_times_ns", arrival_json(trace, theta, v0)},
    };
    const auto fit = try_speed(trace, theta, v0);
    const auto span = span_speed(trace, theta, v0);
    out["speed_fit_m_per_s"] = fit ? json(*fit) : json(nullptr);
    out["speed_span_m_per_s"] = span ? json(*span) : json(nullptr);
    if (cfg.readout) {
        const FilamentConfig f = cfg.filament();
        json cells = json::array();
        for (int c : cfg.readout->cells) cells.push_back(c);
        out["readout"] = {
            {"cells", cells},
            {"threshold_fraction", cfg.readout->threshold_fraction},
            {"level_v", readout_level(trace, f, *cfg.readout)},
            {"bit", read_output_bit(trace, f, *cfg.readout, 1.0)},
        };
    }
    return out;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    const RunConfig cfg = parse_config(slurp(config_path));
    const FilamentConfig filament = cfg.filament();
    fs::create_directories(out_dir);

    Trace partial;
    Trace trace;
    try {
        trace = run_simulation(filament, cfg.stimuli, cfg.run, &partial);
    } catch (const NumericalError& e) {
        write_file(out_dir + "/trace.csv.partial", trace_to_csv(partial));
        std::cerr << "numerical failure at t = " << e.t / kNs << " ns";
        if (e.cell > 0) std::cerr << " (cell " << e.cell << ")";
        std::cerr << ": " << e.what() << "\n";
        return 2;
    }

    write_file(out_dir + "/trace.csv", trace_to_csv(trace));
    const double theta =
        cfg.readout ? cfg.readout->threshold_fraction : kArrivalThreshold;
    write_file(out_dir + "/raster.pbm",
               render_raster_pbm(digitize_trace(trace, theta, 1.0)));
    write_file(out_dir + "/summary.json", summary_for(cfg, trace).dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------
// gate

GateSpec resolve_gate(const std::string& name, const std::string& spec_path) {
    if (!spec_path.empty()) {
        return gate_from_json(json::parse(slurp(spec_path)), "gate");
    }
    const auto& lib = builtin_gate_library().gates;
    const auto it = lib.find(name);
    if (it == lib.end()) throw ConfigError("unknown gate '" + name + "'");
    return it->second;
}

void print_gate_row(const std::vector<int>& bits_in, const GateResult& res) {
    std::string in;
    for (int b : bits_in) in += std::to_string(b);
    std::printf("in %-3s out ", in.c_str());
    for (size_t i = 0; i < res.bits.size(); ++i) {
        std::printf("%d%s", res.bits[i], i + 1 < res.bits.size() ? "," : "");
    }
    std::printf("   levels ");
    for (size_t i = 0; i < res.levels.size(); ++i) {
        std::printf("%.6f%s", res.levels[i], i + 1 < res.levels.size() ? "," : "");
    }
    std::printf(" V\n");
}

int cmd_gate(const std::string& name, const std::string& spec_path,
             std::vector<int> bits, bool table, const std::string& raster_dir,
             const std::string& dump_path) {
    if (name == "XOR_u_cascade" && spec_path.empty()) {
        const CascadeSpec& casc = builtin_gate_library().xor_cascade;
        if (!dump_path.empty()) {
            throw ConfigError("--dump-config is not available for cascades");
        }
        if (table) {
            const TruthTable tt = cascade_truth_table(casc);
            for (size_t i = 0; i < tt.inputs.size(); ++i) {
                std::string in;
                for (int b : tt.inputs[i]) in += std::to_string(b);
                std::printf("in %-3s out %d\n", in.c_str(), tt.outputs[i][0]);
            }
        } else {
            const auto out = run_cascade(casc, bits);
            std::printf("out %d\n", out[0]);
        }
        return 0;
    }

    const GateSpec spec = resolve_gate(name, spec_path);
    if (!dump_path.empty()) {
        write_file(dump_path, gate_to_json(spec).dump(2) + "\n");
        return 0;
    }
    if (!raster_dir.empty()) fs::create_directories(raster_dir);

    auto maybe_raster = [&](const std::vector<int>& in, const Trace& trace) {
        if (raster_dir.empty()) return;
        std::string tag;
        for (int b : in) tag += std::to_string(b);
        // rasters use the gate's own first-readout threshold
        const Raster r =
            digitize_trace(trace, spec.readouts.front().threshold_fraction, spec.v0);
        write_file(raster_dir + "/" + spec.name + "_" + tag + ".pbm",
                   render_raster_pbm(r));
    };

    if (table) {
        for (const auto& in : input_combinations(static_cast<int>(spec.inputs.size()))) {
            const GateResult res = run_gate(spec, in);
            print_gate_row(in, res);
            maybe_raster(in, res.trace);
        }
        return 0;
    }
    if (bits.size() != spec.inputs.size()) {
        throw ConfigError("gate '" + spec.name + "' expects " +
                          std::to_string(spec.inputs.size()) + " input bits");
    }
    const GateResult res = run_gate(spec, bits);
    print_gate_row(bits, res);
    maybe_raster(bits, res.trace);
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

// Sets a dot-separated key path ("filament.params.R1_ohm") in a JSON tree.
void set_json_path(json& root, const std::string& path, double value) {
    json* node = &root;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) throw ConfigError("empty sweep key");
    for (size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->contains(parts[i])) {
            throw ConfigError("sweep key '" + path + "': no such key '" + parts[i] + "'");
        }
        node = &(*node)[parts[i]];
    }
    (*node)[parts.back()] = value;
}

struct SweepAxis {
    std::string key;
    std::vector<double> values;
};

SweepAxis parse_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("sweep axis must look like key.path=v1,v2,...");
    }
    SweepAxis axis;
    axis.key = text.substr(0, eq);
    std::stringstream ss(text.substr(eq + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            axis.values.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("sweep axis '" + axis.key + "': bad number '" + tok + "'");
        }
    }
    if (axis.values.empty()) throw ConfigError("sweep axis needs at least one value");
    return axis;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& axes_text,
              const std::string& out_path) {
    const json base = json::parse(slurp(config_path), nullptr, true);
    std::vector<SweepAxis> axes;
    for (const auto& t : axes_text) axes.push_back(parse_axis(t));
    if (axes.empty()) throw ConfigError("sweep needs at least one --grid axis");

    std::ostringstream csv;
    csv << "point";
    for (const auto& a : axes) csv << "," << a.key;
    csv << ",status,speed_fit_m_per_s,speed_span_m_per_s,readout_level_v,readout_bit\n";

    // row-major over the grid, last axis fastest
    std::vector<size_t> idx(axes.size(), 0);
    size_t total = 1;
    for (const auto& a : axes) total *= a.values.size();
    for (size_t point = 0; point < total; ++point) {
        size_t rem = point;
        for (size_t a = axes.size(); a-- > 0;) {
            idx[a] = rem % axes[a].values.size();
            rem /= axes[a].values.size();
        }
        json doc = base;
        csv << point;
        for (size_t a = 0; a < axes.size(); ++a) {
            set_json_path(doc, axes[a].key, axes[a].values[idx[a]]);
            csv << "," << axes[a].values[idx[a]];
        }
        try {
            const RunConfig cfg = parse_config(doc.dump());
            const Trace trace = run_simulation(cfg.filament(), cfg.stimuli, cfg.run);
            const auto fit = try_speed(trace, kArrivalThreshold, 1.0);
            const auto span = span_speed(trace, kArrivalThreshold, 1.0);
            csv << ",ok";
            csv << ",";
            if (fit) csv << *fit;
            csv << ",";
            if (span) csv << *span;
            if (cfg.readout) {
                const FilamentConfig f = cfg.filament();
                csv << "," << readout_level(trace, f, *cfg.readout) << ","
                    << read_output_bit(trace, f, *cfg.readout, 1.0);
            } else {
                csv << ",,";
            }
            csv << "\n";
        } catch (const NumericalError& e) {
            csv << ",numerical_failure,,,,\n";
            std::cerr << "point " << point << ": " << e.what() << "\n";
        }
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << csv.str();
    } else {
        write_file(out_path, csv.str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// calibrate

int cmd_calibrate(const std::string& name, const std::string& spec_path,
                  bool search_cells, bool as_json) {
    const GateSpec spec = resolve_gate(name, spec_path);
    const CalibrationReport rep =
        calibrate_gate(spec, expected_truth(spec.name), search_cells);
    if (as_json) {
        json thresholds = json::array();
        for (const auto& r : rep.spec.readouts) {
            json cells = json::array();
            for (int c : r.cells) cells.push_back(c);
            thresholds.push_back(
                {{"cells", cells}, {"threshold_fraction", r.threshold_fraction}});
        }
        json levels = json::array();
        for (const auto& row : rep.level_table) levels.push_back(row);
        const json out = {{"gate", rep.spec.name},
                          {"margin", rep.margin},
                          {"min_on_v", rep.min_on},
                          {"max_off_v", rep.max_off},
                          {"readouts", thresholds},
                          {"levels_v", levels}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("%s: margin %.6f (min on %.6f V, max off %.6f V)\n",
                    rep.spec.name.c_str(), rep.margin, rep.min_on, rep.max_off);
        for (const auto& r : rep.spec.readouts) {
            std::printf("  readout cells");
            for (int c : r.cells) std::printf(" %d", c);
            std::printf("  theta %.6f\n", r.threshold_fraction);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear transmission-line simulator for actin filaments"};
    app.require_subcommand(1);

    // derive-params
    DerivationInputs inputs;
    double b = 0.1;
    bool derive_json = false;
    auto* derive = app.add_subcommand(
        "derive-params", "Derive per-monomer R1, R2, L, C0 from physical inputs");
    derive->add_option("--temperature-k", inputs.temperature, "Temperature, K");
    derive->add_option("--dielectric", inputs.dielectric_constant,
                       "Relative dielectric constant");
    derive->add_option("--conc-k", inputs.conc_K, "K+ concentration, mol/L");
    derive->add_option("--conc-na", inputs.conc_Na, "Na+ concentration, mol/L");
    derive->add_option("--r2-ratio", inputs.r2_ratio, "R1 / R2");
    derive->add_option("--b", b, "Capacitor nonlinearity, 1/V");
    derive->add_flag("--json", derive_json, "Machine-readable output");

    // simulate
    std::string sim_config, sim_out = "out";
    auto* simulate = app.add_subcommand("simulate", "Run a config and write outputs");
    simulate->add_option("config", sim_config, "Config JSON path")->required();
    simulate->add_option("-o,--out", sim_out, "Output directory");

    // gate
    std::string gate_name, gate_spec_path, gate_raster, gate_dump;
    std::vector<int> gate_bits;
    bool gate_table = false;
    auto* gate = app.add_subcommand("gate", "Evaluate a logic gate");
    gate->add_option("name", gate_name, "Gate name (or XOR_u_cascade)");
    gate->add_option("bits", gate_bits, "Input bits")->expected(0, 2);
    gate->add_option("--spec", gate_spec_path, "Inline gate spec JSON path");
    gate->add_flag("--truth-table", gate_table, "Run all input combinations");
    gate->add_option("--raster", gate_raster, "Directory for per-combination PBMs");
    gate->add_option("--dump-config", gate_dump, "Write the gate spec JSON and exit");

    // sweep
    std::string sweep_config, sweep_out;
    std::vector<std::string> sweep_axes;
    auto* sweep = app.add_subcommand("sweep", "Grid-sweep config values");
    sweep->add_option("config", sweep_config, "Config JSON path")->required();
    sweep->add_option("--grid", sweep_axes, "Axis spec key.path=v1,v2,...")->required();
    sweep->add_option("-o,--out", sweep_out, "CSV output path (default stdout)");

    // calibrate
    std::string cal_name, cal_spec_path;
    bool cal_search = false, cal_json = false;
    auto* calibrate = app.add_subcommand("calibrate", "Report and tune gate margins");
    calibrate->add_option("name", cal_name, "Gate name");
    calibrate->add_option("--spec", cal_spec_path, "Inline gate spec JSON path");
    calibrate->add_flag("--search-cells", cal_search,
                        "Also search output-cell shifts of up to +-2");
    calibrate->add_flag("--json", cal_json, "Machine-readable output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (derive->parsed()) return cmd_derive_params(inputs, b, derive_json);
        if (simulate->parsed()) return cmd_simulate(sim_config, sim_out);
        if (gate->parsed()) {
            if (gate_name.empty() && gate_spec_path.empty()) {
                throw ConfigError("gate needs a name or --spec");
            }
            return cmd_gate(gate_name, gate_spec_path, gate_bits, gate_table,
                            gate_raster, gate_dump);
        }
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_axes, sweep_out);
        if (calibrate->parsed()) {
            if (cal_name.empty() && cal_spec_path.empty()) {
                throw ConfigError("calibrate needs a name or --spec");
            }
            return cmd_calibrate(cal_name, cal_spec_path, cal_search, cal_json);
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
