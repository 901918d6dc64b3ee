#include "actin/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "actin/errors.hpp"

namespace actin {

void ReadoutSpec::validate() const {
    if (cells.empty()) throw ConfigError("readout needs at least one cell");
    if (!(threshold_fraction > 0.0) || !(threshold_fraction < 1.0)) {
        throw ConfigError("readout threshold must be in (0, 1)");
    }
    if (!(window > 0.0)) throw ConfigError("readout window must be positive");
}

FilamentConfig GateSpec::filament() const {
    return FilamentConfig::with_lumped_groups(n_cells, cell, lumped_groups);
}

std::vector<StimulusSpec> GateSpec::stimuli_for(const std::vector<int>& bits) const {
    if (bits.size() != inputs.size()) {
        throw ConfigError("gate '" + name + "' expects " +
                          std::to_string(inputs.size()) + " input bits");
    }
    std::vector<StimulusSpec> specs = constants;
    for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0) {
            specs.insert(specs.end(), inputs[i].sites.begin(), inputs[i].sites.end());
        }
    }
    return specs;
}

void GateSpec::validate() const {
    if (inputs.empty() || inputs.size() > 2) {
        throw ConfigError("gate needs 1 or 2 logical inputs");
    }
    if (readouts.empty()) throw ConfigError("gate needs at least one readout");
    for (const auto& r : readouts) {
        r.validate();
        if (r.window > run.t_end) {
            throw ConfigError("readout window longer than the run");
        }
        for (int c : r.cells) {
            if (c < 1 || c > n_cells) {
                throw ConfigError("readout cell " + std::to_string(c) +
                                  " outside 1.." + std::to_string(n_cells));
            }
        }
    }
    run.validate();
    const FilamentConfig cfg = filament();
    // binding sites must be disjoint from each other and from constants
    std::vector<int> seen;
    auto check = [&](const std::vector<StimulusSpec>& specs) {
        for (const auto& s : specs) {
            for (int c : s.cells) {
                const int site = cfg.site(c);
                if (std::find(seen.begin(), seen.end(), site) != seen.end()) {
                    throw ConfigError("stimulus site " + std::to_string(c) +
                                      " bound more than once");
                }
                seen.push_back(site);
            }
        }
    };
    for (const auto& in : inputs) check(in.sites);
    check(constants);
}

double readout_level(const Trace& trace, const FilamentConfig& config,
                     const ReadoutSpec& readout) {
    if (trace.times.empty()) throw DomainError("empty trace");
    const double t_start = trace.times.back() - readout.window;
    if (t_start < trace.times.front() - 1e-15) {
        throw ConfigError("readout window longer than trace span");
    }
    double level = std::numeric_limits<double>::infinity();
    for (int cell : readout.cells) {
        const size_t s = static_cast<size_t>(config.site(cell));
        double peak = 0.0;
        for (size_t k = 0; k < trace.times.size(); ++k) {
            if (trace.times[k] < t_start - 1e-15) continue;
            peak = std::max(peak, std::abs(trace.voltages[k][s]));
        }
        level = std::min(level, peak);
    }
    return level;
}

int read_output_bit(const Trace& trace, const FilamentConfig& config,
                    const ReadoutSpec& readout, double v0) {
    return readout_level(trace, config, readout) >=
                   readout.threshold_fraction * v0
               ? 1
               : 0;
}

GateResult run_gate(const GateSpec& spec, const std::vector<int>& input_bits) {
    spec.validate();
    const FilamentConfig cfg = spec.filament();
    GateResult result;
    result.trace = run_simulation(cfg, spec.stimuli_for(input_bits), spec.run);
    for (const auto& r : spec.readouts) {
        result.levels.push_back(readout_level(result.trace, cfg, r));
        result.bits.push_back(result.levels.back() >= r.threshold_fraction * spec.v0
                                  ? 1
                                  : 0);
    }
    return result;
}

std::vector<std::vector<int>> input_combinations(int n_inputs) {
    if (n_inputs == 1) return {{0}, {1}};
    if (n_inputs == 2) return {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    throw ConfigError("gates have 1 or 2 inputs");
}

TruthTable truth_table(const GateSpec& spec) {
    TruthTable table;
    table.inputs = input_combinations(static_cast<int>(spec.inputs.size()));
    for (const auto& combo : table.inputs) {
        GateResult r = run_gate(spec, combo);
        table.outputs.push_back(r.bits);
        table.levels.push_back(r.levels);
    }
    return table;
}

void CascadeSpec::validate() const {
    if (n_inputs < 1) throw ConfigError("cascade needs at least one input");
    for (size_t i = 0; i < stages.size(); ++i) {
        const auto& stage = stages[i];
        stage.gate.validate();
        if (stage.wiring.size() != stage.gate.inputs.size()) {
            throw ConfigError("stage wiring does not match gate input count");
        }
        for (const auto& src : stage.wiring) {
            if (src.kind == Source::Kind::OriginalInput) {
                if (src.index < 0 || src.index >= n_inputs) {
                    throw ConfigError("cascade wiring references bad input index");
                }
            } else {
                if (src.index < 0 || static_cast<size_t>(src.index) >= i) {
                    throw ConfigError(
                        "cascade wiring may only reference earlier stages");
                }
                const auto& producer = stages[static_cast<size_t>(src.index)].gate;
                if (src.output < 0 ||
                    static_cast<size_t>(src.output) >= producer.readouts.size()) {
                    throw ConfigError("cascade wiring references bad output bit");
                }
            }
        }
    }
}

std::vector<int> run_cascade(const CascadeSpec& cascade,
                             const std::vector<int>& input_bits) {
    cascade.validate();
    if (static_cast<int>(input_bits.size()) != cascade.n_inputs) {
        throw ConfigError("cascade expects " + std::to_string(cascade.n_inputs) +
                          " input bits");
    }
    std::vector<std::vector<int>> stage_bits;
    for (const auto& stage : cascade.stages) {
        std::vector<int> bits;
        for (const auto& src : stage.wiring) {
            bits.push_back(src.kind == CascadeSpec::Source::Kind::OriginalInput
                               ? input_bits[static_cast<size_t>(src.index)]
                               : stage_bits[static_cast<size_t>(src.index)]
                                           [static_cast<size_t>(src.output)]);
        }
        stage_bits.push_back(run_gate(stage.gate, bits).bits);
    }
    return stage_bits.back();
}

TruthTable cascade_truth_table(const CascadeSpec& cascade) {
    TruthTable table;
    table.inputs = input_combinations(cascade.n_inputs);
    for (const auto& combo : table.inputs) {
        table.outputs.push_back(run_cascade(cascade, combo));
        table.levels.emplace_back();
    }
    return table;
}

namespace {

CalibrationReport margin_for(const GateSpec& spec, const TruthSpec& truth) {
    CalibrationReport report;
    report.spec = spec;
    const auto combos = input_combinations(static_cast<int>(spec.inputs.size()));
    if (truth.size() != combos.size()) {
        throw ConfigError("truth spec does not match input combinations");
    }
    const FilamentConfig cfg = spec.filament();
    double worst = std::numeric_limits<double>::infinity();
    double min_on = 0, max_off = 0;
    std::vector<std::vector<double>> table(combos.size());
    std::vector<Trace> traces;
    traces.reserve(combos.size());
    for (const auto& combo : combos) {
        traces.push_back(run_simulation(cfg, spec.stimuli_for(combo), spec.run));
    }
    for (size_t r = 0; r < spec.readouts.size(); ++r) {
        double on = std::numeric_limits<double>::infinity();
        double off = 0.0;
        for (size_t c = 0; c < combos.size(); ++c) {
            const double level = readout_level(traces[c], cfg, spec.readouts[r]);
            table[c].push_back(level);
            if (truth[c][r] != 0) {
                on = std::min(on, level);
            } else {
                off = std::max(off, level);
            }
        }
        const double m = (on - off) / spec.v0;
        if (m < worst) {
            worst = m;
            min_on = on;
            max_off = off;
        }
    }
    report.margin = worst;
    report.min_on = min_on;
    report.max_off = max_off;
    report.level_table = std::move(table);
    return report;
}

// Midpoint threshold for each readout, from its own ON/OFF levels.
void set_midpoint_thresholds(CalibrationReport& report, const TruthSpec& truth) {
    for (size_t r = 0; r < report.spec.readouts.size(); ++r) {
        double on = std::numeric_limits<double>::infinity();
        double off = 0.0;
        for (size_t c = 0; c < report.level_table.size(); ++c) {
            if (truth[c][r] != 0) {
                on = std::min(on, report.level_table[c][r]);
            } else {
                off = std::max(off, report.level_table[c][r]);
            }
        }
        if (on > off) {
            report.spec.readouts[r].threshold_fraction =
                0.5 * (on + off) / report.spec.v0;
        }
    }
}

}  // namespace

CalibrationReport gate_margin(const GateSpec& spec, const TruthSpec& truth) {
    return margin_for(spec, truth);
}

CalibrationReport calibrate_gate(const GateSpec& spec, const TruthSpec& truth,
                                 bool search_output_cells) {
    std::vector<int> shifts = {0};
    if (search_output_cells) shifts = {-2, -1, 0, 1, 2};

    CalibrationReport best;
    best.margin = -std::numeric_limits<double>::infinity();
    for (int shift : shifts) {
        GateSpec candidate = spec;
        bool feasible = true;
        for (auto& r : candidate.readouts) {
            for (int& c : r.cells) {
                c += shift;
                if (c < 1 || c > candidate.n_cells) feasible = false;
            }
        }
        if (!feasible) continue;
        CalibrationReport report = margin_for(candidate, truth);
        if (report.margin > best.margin ||
            (report.margin == best.margin && shift == 0)) {
            best = report;
        }
    }
    if (!(best.margin > 0.0)) {
        std::string table;
        for (const auto& row : best.level_table) {
            for (double v : row) table += " " + std::to_string(v);
            table += ";";
        }
        throw DomainError("calibration failed: no separating configuration; levels:" +
                          table);
    }
    set_midpoint_thresholds(best, truth);
    return best;
}

TruthSpec expected_truth(const std::string& gate_name) {
    // canonical combination order 00, 10, 01, 11
    if (gate_name == "AND_u" || gate_name == "AND_f") {
        return {{0}, {0}, {0}, {1}};
    }
    if (gate_name == "OR_u") return {{0}, {1}, {1}, {1}};
    if (gate_name == "NOT_u") return {{1}, {0}};
    if (gate_name == "XOR_f" || gate_name == "XOR_f_lumped" ||
        gate_name == "XOR_u_cascade") {
        return {{0}, {1}, {1}, {0}};
    }
    if (gate_name == "HALFADDER_f") {
        // carry, sum
        return {{0, 0}, {0, 1}, {0, 1}, {1, 0}};
    }
    throw ConfigError("unknown gate '" + gate_name + "'");
}

namespace {

constexpr double kNs = 1e-9;

CellParams unforced_cell() {
    CellParams p;
    p.R1 = 6.11e6;
    p.R2 = 0.9e6;
    p.L = 1.7e-12;
    p.C0 = 96e-18;
    p.b = 0.1;
    return p;
}

CellParams forced_cell() {
    CellParams p = unforced_cell();
    p.R1 = 9.23e6;
    p.R2 = 1.32e6;
    return p;
}

RunSettings run_for(double t_end_ns) {
    RunSettings s;
    s.t_end = t_end_ns * kNs;
    return s;
}

InputBinding initial_input(int cell, double v) {
    StimulusSpec s;
    s.cells = {cell};
    s.mode = StimulusSpec::Mode::Initial;
    s.waveform = Waveform::constant(v);
    return {{s}};
}

StimulusSpec sine_clamp(int cell, double phase) {
    StimulusSpec s;
    s.cells = {cell};
    s.mode = StimulusSpec::Mode::Clamp;
    s.waveform = Waveform::sine(1.0, 1.0 * kNs, phase);
    return s;
}

GateSpec make_and_u() {
    GateSpec g;
    g.name = "AND_u";
    g.cell = unforced_cell();
    g.inputs = {initial_input(8, 1.0), initial_input(15, 1.0)};
    g.readouts = {{{11, 12}, 0.1, 1.0 * kNs}};
    g.run = run_for(4.0);
    return g;
}

GateSpec make_or_u() {
    GateSpec g;
    g.name = "OR_u";
    g.cell = unforced_cell();
    g.inputs = {initial_input(9, 1.0), initial_input(11, 1.0)};
    g.readouts = {{{10}, 0.1, 1.0 * kNs}};
    g.run = run_for(2.0);
    return g;
}

GateSpec make_not_u() {
    GateSpec g;
    g.name = "NOT_u";
    g.cell = unforced_cell();
    g.inputs = {initial_input(11, 1.0)};
    StimulusSpec aux;
    aux.cells = {9};
    aux.mode = StimulusSpec::Mode::Initial;
    aux.waveform = Waveform::constant(-1.0);
    g.constants = {aux};
    g.readouts = {{{10}, 0.1, 1.0 * kNs}};
    g.run = run_for(2.0);
    return g;
}

// First-stage AND of the unforced XOR cascade reads cell 12 only.
GateSpec make_and_u_single_output() {
    GateSpec g = make_and_u();
    g.readouts = {{{12}, 0.1, 1.0 * kNs}};
    return g;
}

GateSpec make_and_f() {
    GateSpec g;
    g.name = "AND_f";
    g.cell = forced_cell();
    g.inputs = {{{sine_clamp(8, 0.0)}}, {{sine_clamp(14, 0.0)}}};
    g.readouts = {{{11}, 0.0113, 1.0 * kNs}};
    g.run = run_for(10.0);
    return g;
}

GateSpec make_xor_f() {
    GateSpec g;
    g.name = "XOR_f";
    g.cell = forced_cell();
    g.inputs = {{{sine_clamp(10, 0.0)}},
                {{sine_clamp(14, std::numbers::pi)}}};
    g.readouts = {{{12}, 0.0169, 1.0 * kNs}};
    g.run = run_for(10.0);
    return g;
}

GateSpec make_halfadder_f() {
    GateSpec g;
    g.name = "HALFADDER_f";
    g.cell = forced_cell();
    g.inputs = {{{sine_clamp(8, 0.0), sine_clamp(10, std::numbers::pi)}},
                {{sine_clamp(14, 0.0)}}};
    // carry at 11, sum at 12
    g.readouts = {{{11}, 0.1, 1.0 * kNs}, {{12}, 0.0169, 1.0 * kNs}};
    g.run = run_for(10.0);
    return g;
}

GateSpec make_xor_f_lumped() {
    GateSpec g;
    g.name = "XOR_f_lumped";
    g.cell = forced_cell();
    g.n_cells = 40;
    g.lumped_groups = {{8, 17}, {23, 32}};
    g.inputs = {{{sine_clamp(8, 0.0)}},
                {{sine_clamp(23, std::numbers::pi)}}};
    g.readouts = {{{20}, 0.3, 1.0 * kNs}};
    g.run = run_for(10.0);
    return g;
}

CascadeSpec make_xor_cascade() {
    using Source = CascadeSpec::Source;
    const Source in_a{Source::Kind::OriginalInput, 0, 0};
    const Source in_b{Source::Kind::OriginalInput, 1, 0};

    CascadeSpec c;
    c.name = "XOR_u_cascade";
    c.n_inputs = 2;
    // a XOR b = (NOT (a AND b)) AND (a OR b), staged as:
    // AND(8,15 -> 12), NOT(11 -> 10), OR(9,11 -> 10), AND(8,15 -> 11,12)
    c.stages.push_back({make_and_u_single_output(), {in_a, in_b}});
    c.stages.push_back({make_not_u(), {Source{Source::Kind::StageOutput, 0, 0}}});
    c.stages.push_back({make_or_u(), {in_a, in_b}});
    c.stages.push_back({make_and_u(),
                        {Source{Source::Kind::StageOutput, 1, 0},
                         Source{Source::Kind::StageOutput, 2, 0}}});
    return c;
}

}  // namespace

const GateLibrary& builtin_gate_library() {
    static const GateLibrary library = [] {
        GateLibrary lib;
        for (auto make : {make_and_u, make_or_u, make_not_u, make_and_f,
                          make_xor_f, make_halfadder_f, make_xor_f_lumped}) {
            GateSpec g = make();
            lib.gates.emplace(g.name, std::move(g));
        }
        lib.xor_cascade = make_xor_cascade();
        return lib;
    }();
    return library;
}

}  // namespace actin
