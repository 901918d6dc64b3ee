#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "actin/gates.hpp"
#include "actin/integrator.hpp"
#include "actin/model.hpp"
#include "actin/params.hpp"
#include "actin/stimuli.hpp"

namespace actin {

/// Parsed run configuration file. Unknown keys are rejected; every default
/// is materialized so to_json() echoes the effective configuration.
struct RunConfig {
    int n_cells = 20;
    double b = 0.1;
    std::optional<CellParams> explicit_params;      // filament.params
    std::optional<DerivationInputs> derive_inputs;  // filament.derive
    std::vector<std::pair<int, int>> lumped_groups;

    std::vector<StimulusSpec> stimuli;
    RunSettings run;

    std::optional<std::string> gate_name;
    std::optional<GateSpec> inline_gate;
    std::vector<int> gate_inputs;
    std::optional<ReadoutSpec> readout;

    CellParams cell_params() const;
    FilamentConfig filament() const;

    nlohmann::json to_json() const;
};

/// Strict parse; throws ConfigError naming the offending key path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

nlohmann::json waveform_to_json(const Waveform& w);
nlohmann::json stimulus_to_json(const StimulusSpec& s);
nlohmann::json gate_to_json(const GateSpec& g);
GateSpec gate_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace actin
