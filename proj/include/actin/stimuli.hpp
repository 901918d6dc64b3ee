#pragma once

#include <vector>

namespace actin {

struct FilamentConfig;
struct LatticeState;

/// Time unit of the step-edge shape: tanh(t - t0) with t measured in ns.
inline constexpr double kNanosecond = 1e-9;

/// Input waveform. Times are seconds internally; the tanh edge has a fixed
/// 1 ns width, matching the dimensionless tanh(t - t0) form with t in ns.
struct Waveform {
    enum class Kind { TanhStep, Sine, Constant };

    Kind kind = Kind::Constant;
    double t0 = 3e-9;        // s, tanh step midpoint
    double amplitude = 1.0;  // V, sine amplitude (before scale)
    double period = 1e-9;    // s, sine period
    double phase = 0.0;      // rad
    double value = 1.0;      // V, constant level (before scale)
    double scale = 1.0;      // V0, multiplies the unit-amplitude shape

    static Waveform tanh_step(double t0_s, double scale = 1.0);
    static Waveform sine(double amplitude, double period_s, double phase,
                         double scale = 1.0);
    static Waveform constant(double v, double scale = 1.0);

    double eval(double t) const;        // volts
    double derivative(double t) const;  // volts / second
};

/// Unit-amplitude step 1/2 - tanh(t - t0)/2, t and t0 in nanoseconds.
double eval_tanh_step(double t_ns, double t0_ns);

/// amplitude * sin(2 pi t / period + phase), t and period in nanoseconds.
double eval_sine(double t_ns, double amplitude, double period_ns, double phase);

/// One experiment input: either an initial voltage (U = 0) or a clamp that
/// imposes the waveform for the whole run, on a list of 1-based cells.
struct StimulusSpec {
    enum class Mode { Initial, Clamp };

    std::vector<int> cells;  // 1-based monomer indices
    Mode mode = Mode::Initial;
    Waveform waveform;
};

/// Per-site clamp table consumed by the integrator. Sites without a clamp
/// hold no waveform.
struct ClampSchedule {
    struct Entry {
        bool active = false;
        Waveform waveform;
    };
    std::vector<Entry> sites;

    bool any() const;
};

/// Builds the t=0 state and the clamp schedule from a list of stimuli.
/// Initial-mode specs set W = charge_map(V, b) with U = 0; clamp-mode specs
/// register waveforms. Overlapping clamps are a ConfigError.
std::pair<LatticeState, ClampSchedule> apply_stimuli(
    const FilamentConfig& config, const std::vector<StimulusSpec>& specs);

}  // namespace actin
