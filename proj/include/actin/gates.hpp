#pragma once

#include <map>
#include <string>
#include <vector>

#include "actin/analysis.hpp"
#include "actin/integrator.hpp"
#include "actin/model.hpp"
#include "actin/stimuli.hpp"

namespace actin {

/// Output digitization rule: a bit is 1 iff every listed cell's voltage
/// magnitude reaches threshold_fraction * v0 within the trailing window.
struct ReadoutSpec {
    std::vector<int> cells;           // 1-based monomer indices
    double threshold_fraction = 0.1;  // theta
    double window = 1e-9;             // s, trailing window length

    void validate() const;
};

/// One logical input: the stimuli activated when the input bit is 1.
/// A 0 bit omits the stimuli entirely.
struct InputBinding {
    std::vector<StimulusSpec> sites;
};

/// A complete gate experiment: filament, logical input bindings, constant
/// auxiliary stimuli, one readout per output bit, and run settings.
struct GateSpec {
    std::string name;
    int n_cells = 20;
    CellParams cell;                           // uniform base cell
    std::vector<std::pair<int, int>> lumped_groups;  // 1-based [lo, hi]
    std::vector<InputBinding> inputs;          // 1 or 2 logical inputs
    std::vector<StimulusSpec> constants;
    std::vector<ReadoutSpec> readouts;         // one per output bit
    RunSettings run;
    double v0 = 1.0;

    FilamentConfig filament() const;
    std::vector<StimulusSpec> stimuli_for(const std::vector<int>& bits) const;
    void validate() const;
};

/// Analog level backing a readout: min over readout cells of the max |V|
/// inside the trailing window, in volts.
double readout_level(const Trace& trace, const FilamentConfig& config,
                     const ReadoutSpec& readout);

/// Digitized bit for one readout.
int read_output_bit(const Trace& trace, const FilamentConfig& config,
                    const ReadoutSpec& readout, double v0);

struct GateResult {
    std::vector<int> bits;      // one per readout
    std::vector<double> levels; // analog level per readout, volts
    Trace trace;
};

GateResult run_gate(const GateSpec& spec, const std::vector<int>& input_bits);

/// All input combinations in the order 00, 10, 01, 11 (0, 1 for one input).
std::vector<std::vector<int>> input_combinations(int n_inputs);

struct TruthTable {
    std::vector<std::vector<int>> inputs;
    std::vector<std::vector<int>> outputs;          // bits per combination
    std::vector<std::vector<double>> levels;        // analog levels, volts
};

TruthTable truth_table(const GateSpec& spec);

/// Multi-stage circuit. Each stage's logical inputs are wired from either
/// the original circuit inputs or an earlier stage's output bit, re-injected
/// at full amplitude.
struct CascadeSpec {
    struct Source {
        enum class Kind { OriginalInput, StageOutput };
        Kind kind = Kind::OriginalInput;
        int index = 0;   // original-input index, or stage index
        int output = 0;  // output bit index within that stage
    };
    struct Stage {
        GateSpec gate;
        std::vector<Source> wiring;  // one source per gate input
    };

    std::string name;
    int n_inputs = 0;
    std::vector<Stage> stages;

    void validate() const;
};

std::vector<int> run_cascade(const CascadeSpec& cascade,
                             const std::vector<int>& input_bits);

TruthTable cascade_truth_table(const CascadeSpec& cascade);

/// Margin report for a gate: separation between the lowest logically-ON
/// analog level and the highest logically-OFF level, normalized by v0.
struct CalibrationReport {
    GateSpec spec;                 // calibrated spec
    double margin = 0.0;           // (min ON - max OFF) / v0
    double min_on = 0.0;           // volts
    double max_off = 0.0;          // volts
    std::vector<std::vector<double>> level_table;  // per combination, per readout
};

/// Expected output bits per input combination, needed to label ON/OFF levels.
using TruthSpec = std::vector<std::vector<int>>;

/// Grid-searches the readout threshold (and, when requested, output-cell
/// shifts of up to +-2) and returns the margin-maximizing spec. Throws
/// DomainError when no configuration separates ON from OFF.
CalibrationReport calibrate_gate(const GateSpec& spec, const TruthSpec& truth,
                                 bool search_output_cells = false);

/// Margin report for the spec as shipped (no search).
CalibrationReport gate_margin(const GateSpec& spec, const TruthSpec& truth);

/// Expected Boolean functions of the shipped gates.
TruthSpec expected_truth(const std::string& gate_name);

struct GateLibrary {
    std::map<std::string, GateSpec> gates;
    CascadeSpec xor_cascade;  // XOR_u_cascade
};

/// The shipped, calibrated gate set: AND_u, OR_u, NOT_u, AND_f, XOR_f,
/// HALFADDER_f, XOR_f_lumped plus the unforced XOR cascade.
const GateLibrary& builtin_gate_library();

}  // namespace actin
