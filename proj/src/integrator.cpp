#include "actin/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "actin/errors.hpp"
#include "actin/fingerprint.hpp"

namespace actin {

void RunSettings::validate() const {
    if (!(dt > 0.0) || !(sample_every > 0.0) || !(t_end > 0.0)) {
        throw ConfigError("t_end, dt and sample_every must be positive");
    }
    if (dt > sample_every || sample_every > t_end) {
        throw ConfigError("need 0 < dt <= sample_every <= t_end");
    }
    if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
    if (newton_max_iters < 1) throw ConfigError("newton_max_iters must be >= 1");
}

namespace {

double dv_dw(double w, double b) {
    if (b == 0.0) return 1.0;
    return 1.0 / std::sqrt(1.0 - 4.0 * b * w);
}

bool clamped(const ClampSchedule& clamps, size_t s) {
    return s < clamps.sites.size() && clamps.sites[s].active;
}

// Thomas algorithm; diag/lower/upper/rhs all length n, lower[0] and
// upper[n-1] unused. Overwrites rhs with the solution.
void solve_tridiagonal(std::vector<double>& diag, const std::vector<double>& lower,
                       std::vector<double>& upper, std::vector<double>& rhs) {
    const size_t n = diag.size();
    for (size_t i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
}

}  // namespace

void step_implicit(LatticeState& state, const FilamentConfig& config,
                   const ClampSchedule& clamps, double dt, double newton_tol,
                   int newton_max_iters) {
    const size_t n = static_cast<size_t>(config.n_sites());
    const double t0 = state.t;
    const double t1 = t0 + dt;

    const auto [dW0, dU0] = rhs_first_order(state, config, clamps, t0);
    const std::vector<double> W0 = state.W;
    const std::vector<double> U0 = state.U;

    // Trapezoidal W equation is linear: W1 = W0 + dt/2 (U0 + U1), so for free
    // sites U1 = (2/dt)(W1 - a) with a = W0 + dt/2 U0. Newton runs on W only.
    std::vector<double> a(n);
    for (size_t i = 0; i < n; ++i) a[i] = W0[i] + 0.5 * dt * U0[i];

    LatticeState next = state;
    impose_clamps(next, config, clamps, t1);

    std::vector<double> diag(n), lower(n), upper(n), residual(n);
    bool converged = false;
    for (int iter = 0; iter < newton_max_iters; ++iter) {
        for (size_t i = 0; i < n; ++i) {
            if (!clamped(clamps, i)) next.U[i] = (2.0 / dt) * (next.W[i] - a[i]);
        }
        next.t = t1;
        const auto [dW1, dU1] = rhs_first_order(next, config, clamps, t1);

        double wmax = 1.0;
        for (size_t i = 0; i < n; ++i) {
            wmax = std::max(wmax, std::abs(next.W[i]));
            if (clamped(clamps, i)) {
                residual[i] = 0.0;
                diag[i] = 1.0;
                lower[i] = upper[i] = 0.0;
                continue;
            }
            residual[i] = next.U[i] - U0[i] - 0.5 * dt * (dU0[i] + dU1[i]);
            const auto& p = config.cells[i];
            const double lc = p.L * p.C0;
            diag[i] = 2.0 / dt +
                      0.5 * dt * (2.0 * dv_dw(next.W[i], p.b) / lc) +
                      p.R1 / p.L + 2.0 * p.R2 / p.L;
            lower[i] = (i > 0 && !clamped(clamps, i - 1))
                           ? 0.5 * dt * (-dv_dw(next.W[i - 1], p.b) / lc) - p.R2 / p.L
                           : 0.0;
            upper[i] = (i + 1 < n && !clamped(clamps, i + 1))
                           ? 0.5 * dt * (-dv_dw(next.W[i + 1], p.b) / lc) - p.R2 / p.L
                           : 0.0;
        }

        solve_tridiagonal(diag, lower, upper, residual);

        double dmax = 0.0;
        for (size_t i = 0; i < n; ++i) {
            if (clamped(clamps, i)) continue;
            next.W[i] -= residual[i];
            dmax = std::max(dmax, std::abs(residual[i]));
        }
        if (dmax < newton_tol * wmax) {
            for (size_t i = 0; i < n; ++i) {
                if (!clamped(clamps, i)) next.U[i] = (2.0 / dt) * (next.W[i] - a[i]);
            }
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NumericalError("Newton iteration did not converge in " +
                                 std::to_string(newton_max_iters) + " iterations",
                             t1);
    }
    for (size_t i = 0; i < n; ++i) {
        if (!std::isfinite(next.W[i]) || !std::isfinite(next.U[i])) {
            throw NumericalError("non-finite state after implicit step", t1,
                                 static_cast<int>(i) + 1);
        }
    }
    state = std::move(next);
}

void step_rk4(LatticeState& state, const FilamentConfig& config,
              const ClampSchedule& clamps, double dt) {
    const size_t n = static_cast<size_t>(config.n_sites());
    const double t0 = state.t;

    auto eval = [&](const std::vector<double>& W, const std::vector<double>& U,
                    double t) {
        LatticeState s;
        s.W = W;
        s.U = U;
        impose_clamps(s, config, clamps, t);
        return rhs_first_order(s, config, clamps, t);
    };

    const auto [k1W, k1U] = eval(state.W, state.U, t0);
    std::vector<double> W(n), U(n);

    auto advance = [&](const std::vector<double>& kW, const std::vector<double>& kU,
                       double frac) {
        for (size_t i = 0; i < n; ++i) {
            W[i] = state.W[i] + frac * dt * kW[i];
            U[i] = state.U[i] + frac * dt * kU[i];
        }
    };

    advance(k1W, k1U, 0.5);
    const auto [k2W, k2U] = eval(W, U, t0 + 0.5 * dt);
    advance(k2W, k2U, 0.5);
    const auto [k3W, k3U] = eval(W, U, t0 + 0.5 * dt);
    advance(k3W, k3U, 1.0);
    const auto [k4W, k4U] = eval(W, U, t0 + dt);

    for (size_t i = 0; i < n; ++i) {
        state.W[i] += dt / 6.0 * (k1W[i] + 2.0 * k2W[i] + 2.0 * k3W[i] + k4W[i]);
        state.U[i] += dt / 6.0 * (k1U[i] + 2.0 * k2U[i] + 2.0 * k3U[i] + k4U[i]);
    }
    impose_clamps(state, config, clamps, t0 + dt);
    for (size_t i = 0; i < n; ++i) {
        if (!std::isfinite(state.W[i]) || !std::isfinite(state.U[i])) {
            throw NumericalError("non-finite state after RK4 step", t0 + dt,
                                 static_cast<int>(i) + 1);
        }
    }
}

Trace run_simulation(const FilamentConfig& config,
                     const std::vector<StimulusSpec>& stimuli,
                     const RunSettings& settings, Trace* partial_out) {
    settings.validate();
    config.validate();
    auto [state, clamps] = apply_stimuli(config, stimuli);

    const long n_steps = std::lround(settings.t_end / settings.dt);
    const long sample_interval =
        std::max(1L, std::lround(settings.sample_every / settings.dt));

    Trace trace;
    trace.config_fingerprint = fingerprint_config(config, stimuli);
    trace.settings_fingerprint = fingerprint_settings(settings);
    trace.times.push_back(0.0);
    trace.voltages.push_back(cell_voltages(state, config, clamps));

    try {
        for (long s = 0; s < n_steps; ++s) {
            // t from step count, not accumulation, so samples are reproducible
            state.t = static_cast<double>(s) * settings.dt;
            if (settings.method == Method::ImplicitTrapezoidal) {
                step_implicit(state, config, clamps, settings.dt, settings.newton_tol,
                              settings.newton_max_iters);
            } else {
                step_rk4(state, config, clamps, settings.dt);
            }
            if ((s + 1) % sample_interval == 0) {
                trace.times.push_back(static_cast<double>(s + 1) * settings.dt);
                trace.voltages.push_back(cell_voltages(state, config, clamps));
            }
        }
    } catch (const NumericalError&) {
        if (partial_out != nullptr) *partial_out = trace;
        throw;
    } catch (const DomainError& e) {
        // mid-run excursions off the invertible branch are a numerical
        // failure of the run, not a configuration problem
        if (partial_out != nullptr) *partial_out = trace;
        throw NumericalError(e.what(), state.t, -1);
    }
    return trace;
}

ConvergenceReport convergence_report(const FilamentConfig& config,
                                     const std::vector<StimulusSpec>& stimuli,
                                     const RunSettings& settings) {
    RunSettings half = settings;
    half.dt = settings.dt / 2.0;
    const Trace coarse = run_simulation(config, stimuli, settings);
    const Trace fine = run_simulation(config, stimuli, half);

    ConvergenceReport report;
    report.dt = settings.dt;
    const int n = std::min(coarse.n_samples(), fine.n_samples());
    for (int k = 0; k < n; ++k) {
        for (int s = 0; s < coarse.n_sites(); ++s) {
            report.max_abs_diff = std::max(
                report.max_abs_diff,
                std::abs(coarse.voltages[static_cast<size_t>(k)][static_cast<size_t>(s)] -
                         fine.voltages[static_cast<size_t>(k)][static_cast<size_t>(s)]));
        }
    }
    return report;
}

}  // namespace actin
