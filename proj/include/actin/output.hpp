#pragma once

#include <string>

#include <json.hpp>

#include "actin/analysis.hpp"
#include "actin/trace.hpp"

namespace actin {

inline constexpr const char* kToolVersion = "1.0.0";

/// Default detection threshold (fraction of V0) for arrival-time and speed
/// estimation. Deliberately below the 0.1 gate digitization threshold: pulse
/// fronts are counted where an excitation first becomes visible in the
/// per-cell waveform diagrams, not where it reaches logic level.
inline constexpr double kArrivalThreshold = 0.01;

/// trace CSV: header "t_ns,V1,...,VN", times in ns, voltages in volts at
/// full precision (round-trippable decimals).
std::string trace_to_csv(const Trace& trace);

void write_file(const std::string& path, const std::string& bytes);

}  // namespace actin
