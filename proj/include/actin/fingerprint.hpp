#pragma once

#include <string>
#include <vector>

#include "actin/integrator.hpp"
#include "actin/model.hpp"
#include "actin/stimuli.hpp"

namespace actin {

/// FNV-1a hash of a canonical serialization, as a 16-hex-digit string.
std::string fingerprint_config(const FilamentConfig& config,
                               const std::vector<StimulusSpec>& stimuli);
std::string fingerprint_settings(const RunSettings& settings);

}  // namespace actin
