#pragma once

#include <vector>

#include "actin/model.hpp"
#include "actin/stimuli.hpp"
#include "actin/trace.hpp"

namespace actin {

enum class Method { ImplicitTrapezoidal, ExplicitRk4 };

struct RunSettings {
    double t_end = 10e-9;        // s
    double dt = 1e-12;           // s (= 10^-3 ns)
    double sample_every = 1e-11; // s (= 10^-2 ns)
    Method method = Method::ImplicitTrapezoidal;
    double newton_tol = 1e-10;   // relative
    int newton_max_iters = 25;

    void validate() const;
};

/// One trapezoidal step. Newton iteration on the W unknowns with the U
/// equation eliminated; each iteration is a tridiagonal direct solve.
void step_implicit(LatticeState& state, const FilamentConfig& config,
                   const ClampSchedule& clamps, double dt,
                   double newton_tol = 1e-10, int newton_max_iters = 25);

/// One classical RK4 step. Only stable for non-stiff test configurations.
void step_rk4(LatticeState& state, const FilamentConfig& config,
              const ClampSchedule& clamps, double dt);

/// Integrates from t = 0 to t_end, sampling all cell voltages every
/// sample_every (the t = 0 state is the first sample). When partial_out is
/// given and the integration fails numerically, the samples collected up to
/// the failure are stored there before the NumericalError propagates.
Trace run_simulation(const FilamentConfig& config,
                     const std::vector<StimulusSpec>& stimuli,
                     const RunSettings& settings, Trace* partial_out = nullptr);

struct ConvergenceReport {
    double max_abs_diff = 0.0;  // max over cells and common sample times, volts
    double dt = 0.0;            // coarser of the two step sizes, seconds
};

/// Runs at settings.dt and settings.dt / 2 and reports the worst voltage
/// difference at common sample times.
ConvergenceReport convergence_report(const FilamentConfig& config,
                                     const std::vector<StimulusSpec>& stimuli,
                                     const RunSettings& settings);

}  // namespace actin
