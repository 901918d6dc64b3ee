#include "actin/stimuli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "actin/errors.hpp"
#include "actin/model.hpp"

namespace actin {

Waveform Waveform::tanh_step(double t0_s, double scale) {
    Waveform w;
    w.kind = Kind::TanhStep;
    w.t0 = t0_s;
    w.scale = scale;
    return w;
}

Waveform Waveform::sine(double amplitude, double period_s, double phase,
                        double scale) {
    if (!(period_s > 0.0)) throw DomainError("sine period must be positive");
    Waveform w;
    w.kind = Kind::Sine;
    w.amplitude = amplitude;
    w.period = period_s;
    w.phase = phase;
    w.scale = scale;
    return w;
}

Waveform Waveform::constant(double v, double scale) {
    Waveform w;
    w.kind = Kind::Constant;
    w.value = v;
    w.scale = scale;
    return w;
}

double Waveform::eval(double t) const {
    switch (kind) {
        case Kind::TanhStep:
            return scale * (0.5 - 0.5 * std::tanh((t - t0) / kNanosecond));
        case Kind::Sine:
            return scale * amplitude *
                   std::sin(2.0 * std::numbers::pi * t / period + phase);
        case Kind::Constant:
            return scale * value;
    }
    return 0.0;
}

double Waveform::derivative(double t) const {
    switch (kind) {
        case Kind::TanhStep: {
            const double c = std::cosh((t - t0) / kNanosecond);
            return scale * (-0.5 / (c * c)) / kNanosecond;
        }
        case Kind::Sine: {
            const double omega = 2.0 * std::numbers::pi / period;
            return scale * amplitude * omega * std::cos(omega * t + phase);
        }
        case Kind::Constant:
            return 0.0;
    }
    return 0.0;
}

double eval_tanh_step(double t_ns, double t0_ns) {
    return 0.5 - 0.5 * std::tanh(t_ns - t0_ns);
}

double eval_sine(double t_ns, double amplitude, double period_ns, double phase) {
    if (!(period_ns > 0.0)) throw DomainError("sine period must be positive");
    return amplitude * std::sin(2.0 * std::numbers::pi * t_ns / period_ns + phase);
}

bool ClampSchedule::any() const {
    return std::any_of(sites.begin(), sites.end(),
                       [](const Entry& e) { return e.active; });
}

std::pair<LatticeState, ClampSchedule> apply_stimuli(
    const FilamentConfig& config, const std::vector<StimulusSpec>& specs) {
    config.validate();
    LatticeState state = LatticeState::zero(config.n_sites());
    ClampSchedule clamps;
    clamps.sites.resize(config.n_sites());

    for (const auto& spec : specs) {
        for (int monomer : spec.cells) {
            const int s = config.site(monomer);
            const double b = config.cells[s].b;
            if (spec.mode == StimulusSpec::Mode::Initial) {
                const double v = spec.waveform.eval(0.0);
                if (b > 0.0 && v > 1.0 / (2.0 * b)) {
                    throw DomainError("initial voltage " + std::to_string(v) +
                                      " outside charge-map branch domain");
                }
                state.W[s] = charge_map(v, b);
            } else {
                if (clamps.sites[s].active) {
                    throw ConfigError("cell " + std::to_string(monomer) +
                                      " appears in two clamp specs");
                }
                clamps.sites[s] = {true, spec.waveform};
            }
        }
    }
    impose_clamps(state, config, clamps, 0.0);
    return {std::move(state), std::move(clamps)};
}

}  // namespace actin
