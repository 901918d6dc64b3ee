#include <doctest.h>

#include <cmath>
#include <vector>

#include "actin/analysis.hpp"
#include "actin/errors.hpp"
#include "actin/integrator.hpp"
#include "actin/model.hpp"
#include "actin/params.hpp"

using namespace actin;

namespace {

CellParams lossless_unit() {
    CellParams p;
    p.R1 = 0.0;
    p.R2 = 0.0;
    p.L = 1.0;
    p.C0 = 1.0;
    p.b = 0.0;
    return p;
}

ClampSchedule no_clamps(int n) {
    ClampSchedule c;
    c.sites.resize(n);
    return c;
}

LatticeState bump_state(int n) {
    LatticeState s = LatticeState::zero(n);
    s.W[n / 2] = 0.5;
    s.W[n / 2 - 1] = 0.25;
    return s;
}

// Worst-case W difference after integrating the same state with both methods.
double cross_method_diff(const FilamentConfig& cfg, LatticeState s, double dt,
                         int steps) {
    LatticeState a = s, b = s;
    const ClampSchedule clamps = no_clamps(cfg.n_sites());
    for (int k = 0; k < steps; ++k) {
        step_implicit(a, cfg, clamps, dt);
        step_rk4(b, cfg, clamps, dt);
    }
    double worst = 0.0;
    for (int i = 0; i < cfg.n_sites(); ++i) {
        worst = std::max(worst, std::abs(a.W[i] - b.W[i]));
    }
    return worst;
}

}  // namespace

TEST_CASE("the zero state is a fixed point of both methods") {
    CellParams p;
    p.R1 = 6.11e6;
    p.R2 = 0.9e6;
    p.L = 1.7e-12;
    p.C0 = 96e-18;
    p.b = 0.1;
    FilamentConfig cfg = FilamentConfig::uniform(8, p);
    LatticeState s = LatticeState::zero(8);
    const ClampSchedule clamps = no_clamps(8);
    for (int k = 0; k < 50; ++k) step_implicit(s, cfg, clamps, 1e-12);
    for (int i = 0; i < 8; ++i) {
        CHECK(s.W[i] == 0.0);
        CHECK(s.U[i] == 0.0);
    }
    CHECK(s.t == doctest::Approx(50e-12));
}

TEST_CASE("implicit and RK4 agree on a non-stiff linear line") {
    FilamentConfig cfg = FilamentConfig::uniform(10, lossless_unit());
    CHECK(cross_method_diff(cfg, bump_state(10), 1e-4, 2000) < 1e-6);
}

TEST_CASE("RK4 shows fourth-order self-convergence") {
    FilamentConfig cfg = FilamentConfig::uniform(10, lossless_unit());
    const ClampSchedule clamps = no_clamps(10);
    auto solve = [&](double dt, int steps) {
        LatticeState s = bump_state(10);
        for (int k = 0; k < steps; ++k) step_rk4(s, cfg, clamps, dt);
        return s;
    };
    // Richardson: e(h) ~ C h^4, so (coarse - fine) shrinks ~16x per halving
    const LatticeState ref = solve(1.0 / 4096.0, 4096);
    auto err = [&](double dt, int steps) {
        const LatticeState s = solve(dt, steps);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) worst = std::max(worst, std::abs(s.W[i] - ref.W[i]));
        return worst;
    };
    const double e1 = err(1.0 / 64.0, 64);
    const double e2 = err(1.0 / 128.0, 128);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.7);
    CHECK(order < 4.3);
}

TEST_CASE("trapezoidal shows second-order self-convergence") {
    CellParams p = lossless_unit();
    p.b = 0.1;
    p.R1 = 0.3;
    p.R2 = 0.1;
    FilamentConfig cfg = FilamentConfig::uniform(10, p);
    const ClampSchedule clamps = no_clamps(10);
    auto solve = [&](double dt, int steps) {
        LatticeState s = bump_state(10);
        for (int k = 0; k < steps; ++k) step_implicit(s, cfg, clamps, dt, 1e-13, 50);
        return s;
    };
    const LatticeState ref = solve(1.0 / 8192.0, 8192);
    auto err = [&](double dt, int steps) {
        const LatticeState s = solve(dt, steps);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) worst = std::max(worst, std::abs(s.W[i] - ref.W[i]));
        return worst;
    };
    const double e1 = err(1.0 / 64.0, 64);
    const double e2 = err(1.0 / 128.0, 128);
    const double order = std::log2(e1 / e2);
    CHECK(order > 1.8);
    CHECK(order < 2.3);
}

TEST_CASE("the implicit method holds the stiff physical step where RK4 blows up") {
    CellParams p;
    p.R1 = 6.11e6;
    p.R2 = 0.9e6;
    p.L = 1.7e-12;
    p.C0 = 96e-18;
    p.b = 0.1;
    FilamentConfig cfg = FilamentConfig::uniform(15, p);
    const ClampSchedule clamps = no_clamps(15);

    LatticeState imp = LatticeState::zero(15);
    imp.W[7] = charge_map(0.9, 0.1);
    LatticeState rk = imp;
    const double dt = 1e-12;  // >> 2 L / R1 ~ 5.6e-19 s
    bool rk_diverged = false;
    for (int k = 0; k < 200; ++k) {
        step_implicit(imp, cfg, clamps, dt);
        // divergence shows either as runaway magnitude or as W leaving the
        // invertible branch of the charge map
        try {
            step_rk4(rk, cfg, clamps, dt);
        } catch (const DomainError&) {
            rk_diverged = true;
            break;
        } catch (const NumericalError&) {
            rk_diverged = true;
            break;
        }
        double mag = 0.0;
        for (double w : rk.W) mag = std::max(mag, std::abs(w));
        if (!std::isfinite(mag) || mag > 1e3) {
            rk_diverged = true;
            break;
        }
    }
    double imp_mag = 0.0;
    for (double w : imp.W) imp_mag = std::max(imp_mag, std::abs(w));
    CHECK(rk_diverged);
    CHECK(imp_mag < 1.0);
    CHECK(imp_mag > 0.0);
}

TEST_CASE("lossless linear line conserves the discrete energy") {
    FilamentConfig cfg = FilamentConfig::uniform(12, lossless_unit());
    const ClampSchedule clamps = no_clamps(12);
    LatticeState s = bump_state(12);
    auto energy = [&](const LatticeState& st) {
        // b = 0: V = W, dV/dt = U
        return line_energy(st.W, st.U, cfg);
    };
    const double e0 = energy(s);
    CHECK(e0 > 0.0);
    for (int k = 0; k < 100; ++k) step_implicit(s, cfg, clamps, 1e-3, 1e-14, 50);
    CHECK(std::abs(energy(s) - e0) / e0 < 1e-6);
}

TEST_CASE("with resistance the energy decays monotonically") {
    CellParams p = lossless_unit();
    p.R1 = 0.5;
    p.R2 = 0.2;
    FilamentConfig cfg = FilamentConfig::uniform(12, p);
    const ClampSchedule clamps = no_clamps(12);
    LatticeState s = bump_state(12);
    double prev = line_energy(s.W, s.U, cfg);
    for (int k = 0; k < 60; ++k) {
        step_implicit(s, cfg, clamps, 0.05, 1e-13, 50);
        const double e = line_energy(s.W, s.U, cfg);
        CHECK(e <= prev * (1.0 + 1e-12));
        prev = e;
    }
    CHECK(prev < 0.9 * line_energy(bump_state(12).W, bump_state(12).U, cfg));
}

TEST_CASE("mirror-symmetric initial data stays mirror symmetric") {
    CellParams p;
    p.R1 = 6.11e6;
    p.R2 = 0.9e6;
    p.L = 1.7e-12;
    p.C0 = 96e-18;
    p.b = 0.1;
    const int n = 15;
    FilamentConfig cfg = FilamentConfig::uniform(n, p);
    const ClampSchedule clamps = no_clamps(n);
    LatticeState s = LatticeState::zero(n);
    s.W[3] = s.W[n - 4] = charge_map(0.9, 0.1);
    for (int k = 0; k < 500; ++k) step_implicit(s, cfg, clamps, 1e-12);
    for (int i = 0; i < n; ++i) {
        CHECK(s.W[i] == doctest::Approx(s.W[n - 1 - i]).scale(1.0).epsilon(1e-8));
    }
}

TEST_CASE("antisymmetric data stays antisymmetric when b = 0") {
    CellParams p;
    p.R1 = 6.11e6;
    p.R2 = 0.9e6;
    p.L = 1.7e-12;
    p.C0 = 96e-18;
    p.b = 0.0;
    const int n = 15;
    FilamentConfig cfg = FilamentConfig::uniform(n, p);
    const ClampSchedule clamps = no_clamps(n);
    LatticeState s = LatticeState::zero(n);
    s.W[3] = 0.9;
    s.W[n - 4] = -0.9;
    for (int k = 0; k < 500; ++k) step_implicit(s, cfg, clamps, 1e-12);
    for (int i = 0; i < n; ++i) {
        CHECK(s.W[i] == doctest::Approx(-s.W[n - 1 - i]).scale(1.0).epsilon(1e-8));
    }
    CHECK(std::abs(s.W[n / 2]) < 1e-12);
}

TEST_CASE("run_simulation samples t = 0 first and is bit-reproducible") {
    CellParams p;
    p.R1 = 6.11e6;
    p.R2 = 0.9e6;
    p.L = 1.7e-12;
    p.C0 = 96e-18;
    p.b = 0.1;
    FilamentConfig cfg = FilamentConfig::uniform(20, p);
    StimulusSpec stim;
    stim.cells = {8, 15};
    stim.waveform = Waveform::constant(0.9);
    RunSettings set;
    set.t_end = 0.5e-9;
    const Trace a = run_simulation(cfg, {stim}, set);
    const Trace b = run_simulation(cfg, {stim}, set);
    CHECK(a.times.front() == 0.0);
    CHECK(a.voltages.front()[7] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(a.n_samples() == 51);
    CHECK(a.n_sites() == 20);
    CHECK(a.times.back() == doctest::Approx(0.5e-9).epsilon(1e-12));
    REQUIRE(a.n_samples() == b.n_samples());
    for (int k = 0; k < a.n_samples(); ++k) {
        for (int i = 0; i < 20; ++i) {
            CHECK(a.voltages[k][i] == b.voltages[k][i]);  // bitwise
        }
    }
    CHECK(a.config_fingerprint == b.config_fingerprint);
    CHECK(a.settings_fingerprint == b.settings_fingerprint);
    CHECK_FALSE(a.config_fingerprint.empty());
}

TEST_CASE("clamped runs follow the imposed waveform exactly at the clamp site") {
    CellParams p;
    p.R1 = 9.23e6;
    p.R2 = 1.32e6;
    p.L = 1.7e-12;
    p.C0 = 96e-18;
    p.b = 0.1;
    FilamentConfig cfg = FilamentConfig::uniform(20, p);
    StimulusSpec stim;
    stim.cells = {8};
    stim.mode = StimulusSpec::Mode::Clamp;
    stim.waveform = Waveform::sine(1.0, 1e-9, 0.0, 0.05);
    RunSettings set;
    set.t_end = 2e-9;
    const Trace tr = run_simulation(cfg, {stim}, set);
    for (int k = 0; k < tr.n_samples(); ++k) {
        const double expect = stim.waveform.eval(tr.times[k]);
        CHECK(tr.voltages[k][7] == doctest::Approx(expect).scale(1.0).epsilon(1e-9));
    }
}

TEST_CASE("convergence report shrinks with the step and stays small at dt = 1 ps") {
    CellParams p;
    p.R1 = 6.11e6;
    p.R2 = 0.9e6;
    p.L = 1.7e-12;
    p.C0 = 96e-18;
    p.b = 0.1;
    FilamentConfig cfg = FilamentConfig::uniform(20, p);
    StimulusSpec stim;
    stim.cells = {8, 15};
    stim.waveform = Waveform::constant(0.9);
    RunSettings set;
    set.t_end = 1e-9;
    const ConvergenceReport fine = convergence_report(cfg, {stim}, set);
    CHECK(fine.max_abs_diff < 1e-6);
    set.dt = 8e-12;
    const ConvergenceReport coarse = convergence_report(cfg, {stim}, set);
    CHECK(fine.max_abs_diff < coarse.max_abs_diff);
}

TEST_CASE("invalid settings are rejected") {
    RunSettings s;
    s.dt = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = RunSettings{};
    s.t_end = -1.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = RunSettings{};
    s.sample_every = 0.5e-12;  // finer than dt
    CHECK_THROWS_AS(s.validate(), ConfigError);
}
