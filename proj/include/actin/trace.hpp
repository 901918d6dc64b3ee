#pragma once

#include <string>
#include <vector>

namespace actin {

/// Sampled voltage history of a run. voltages[k][s] is the voltage of
/// lattice site s at times[k]. Fingerprints identify the producing config
/// and settings for reproducibility checks.
struct Trace {
    std::vector<double> times;                  // seconds, strictly increasing
    std::vector<std::vector<double>> voltages;  // sample x site
    std::string config_fingerprint;
    std::string settings_fingerprint;

    int n_samples() const { return static_cast<int>(times.size()); }
    int n_sites() const {
        return voltages.empty() ? 0 : static_cast<int>(voltages.front().size());
    }
};

}  // namespace actin
