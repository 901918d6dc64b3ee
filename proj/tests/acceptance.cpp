// Acceptance gate: one PASS/FAIL line per criterion (sub-checks where a
// criterion bundles several assertions). Exits nonzero if any check fails.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "actin/analysis.hpp"
#include "actin/config.hpp"
#include "actin/gates.hpp"
#include "actin/integrator.hpp"
#include "actin/output.hpp"
#include "actin/params.hpp"

#ifndef CONFIG_DIR
#define CONFIG_DIR "configs"
#endif

using namespace actin;

namespace {

int failures = 0;

void check(const std::string& label, bool ok, const std::string& detail = "") {
    std::printf("%-60s %s%s%s\n", label.c_str(), ok ? "PASS" : "FAIL",
                detail.empty() ? "" : "  -- ", detail.c_str());
    if (!ok) ++failures;
}

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

RunConfig load(const std::string& name) {
    std::ifstream in(std::string(CONFIG_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ---------------------------------------------------------------- criterion 1

void criterion_1() {
    const DerivationInputs in;
    const double lb = bjerrum_length(in);
    const CellParams p = derive_cell_params(in, 0.1);
    const bool ok = within(lb, 7.1e-10, 0.05) && within(p.C0, 96e-18, 0.05) &&
                    within(p.L, 1.7e-12, 0.05) && within(p.R1, 6.11e6, 0.05) &&
                    within(p.R2, 0.87e6, 0.05);
    check("1 parameter reproduction (5 values within 5%)", ok,
          "lambda_B=" + fmt(lb) + " R1=" + fmt(p.R1));
}

// ---------------------------------------------------------------- criteria 2+3

void criteria_2_3() {
    const RunConfig base = load("fig2a.json");
    const RunConfig low = load("fig2b.json");
    const Trace tr = run_simulation(base.filament(), base.stimuli, base.run);
    const Trace tr_low = run_simulation(low.filament(), low.stimuli, low.run);
    const double theta = kArrivalThreshold;

    const double speed = estimate_speed(tr, theta, 1.0);
    check("2 pulse speed in [8, 24] m/s", speed >= 8.0 && speed <= 24.0,
          fmt(speed) + " m/s");

    const auto arrivals = arrival_times(tr, theta, 1.0);
    const bool has12 = arrivals[11].has_value();
    const double t12 = has12 ? *arrivals[11] / 1e-9 : -1.0;
    check("2 cell-12 arrival in [2.5, 6] ns", has12 && t12 >= 2.5 && t12 <= 6.0,
          fmt(t12) + " ns");

    const double speed_low = estimate_speed(tr_low, theta, 1.0);
    const double ratio = speed_low / speed;
    check("2 R1/10 speed ratio in [1.5, 2.5]", ratio >= 1.5 && ratio <= 2.5,
          fmt(ratio));

    // max |V| over the last 1 ns at cells >= 15
    double worst = 0.0;
    for (int k = 0; k < tr.n_samples(); ++k) {
        if (tr.times[static_cast<size_t>(k)] < base.run.t_end - 1e-9) continue;
        for (int c = 14; c < tr.n_sites(); ++c) {
            worst = std::max(worst, std::abs(tr.voltages[static_cast<size_t>(k)]
                                                        [static_cast<size_t>(c)]));
        }
    }
    check("3 damping: cells >= 15 below 0.1 V0 in final 1 ns", worst < 0.1,
          "max " + fmt(worst) + " V");
}

// ---------------------------------------------------------------- criterion 4

void expect_table(const std::string& name) {
    const TruthTable tt = truth_table(builtin_gate_library().gates.at(name));
    const TruthSpec want = expected_truth(name);
    bool ok = true;
    std::string got;
    for (size_t i = 0; i < want.size(); ++i) {
        for (size_t k = 0; k < want[i].size(); ++k) {
            if (tt.outputs[i][k] != want[i][k]) ok = false;
            got += std::to_string(tt.outputs[i][k]);
        }
        if (i + 1 < want.size()) got += ",";
    }
    check("4 truth table " + name, ok, got);
}

void criterion_4() {
    for (const char* name :
         {"AND_u", "OR_u", "NOT_u", "AND_f", "XOR_f", "XOR_f_lumped", "HALFADDER_f"}) {
        expect_table(name);
    }
    const TruthTable casc = cascade_truth_table(builtin_gate_library().xor_cascade);
    const TruthSpec want = expected_truth("XOR_u_cascade");
    bool ok = true;
    for (size_t i = 0; i < want.size(); ++i) {
        if (casc.outputs[i] != want[i]) ok = false;
    }
    check("4 truth table XOR_u_cascade", ok);
}

// ---------------------------------------------------------------- criterion 5

void criterion_5() {
    for (const auto& [name, spec] : builtin_gate_library().gates) {
        double margin = -1.0;
        std::string detail;
        try {
            margin = gate_margin(spec, expected_truth(name)).margin;
            detail = fmt(margin);
        } catch (const std::exception& e) {
            detail = e.what();
            detail = detail.substr(0, 40);
        }
        check("5 margin > 0.1 V0: " + name, margin > 0.1, detail);
    }
}

// ---------------------------------------------------------------- criterion 6

FilamentConfig lossless_chain(int n) {
    CellParams p;
    p.R1 = 0.0;
    p.R2 = 0.0;
    p.L = 1.0;
    p.C0 = 1.0;
    p.b = 0.0;
    return FilamentConfig::uniform(n, p);
}

ClampSchedule no_clamps(int n) {
    ClampSchedule c;
    c.sites.resize(n);
    return c;
}

LatticeState bump(int n) {
    LatticeState s = LatticeState::zero(n);
    s.W[n / 2] = 0.5;
    s.W[n / 2 - 1] = 0.25;
    return s;
}

void criterion_6() {
    // (a) lossless linear energy drift < 1e-6 relative per 100 steps
    {
        const FilamentConfig cfg = lossless_chain(12);
        const ClampSchedule clamps = no_clamps(12);
        LatticeState s = bump(12);
        const double e0 = line_energy(s.W, s.U, cfg);
        for (int k = 0; k < 100; ++k) step_implicit(s, cfg, clamps, 1e-3, 1e-14, 50);
        const double drift = std::abs(line_energy(s.W, s.U, cfg) - e0) / e0;
        check("6a lossless energy drift < 1e-6 per 100 steps", drift < 1e-6,
              fmt(drift));
    }
    // (b) damped linear energy monotonically non-increasing
    {
        CellParams p;
        p.R1 = 0.5;
        p.R2 = 0.2;
        p.L = 1.0;
        p.C0 = 1.0;
        p.b = 0.0;
        const FilamentConfig cfg = FilamentConfig::uniform(12, p);
        const ClampSchedule clamps = no_clamps(12);
        LatticeState s = bump(12);
        double prev = line_energy(s.W, s.U, cfg);
        bool mono = true;
        for (int k = 0; k < 200; ++k) {
            step_implicit(s, cfg, clamps, 0.02, 1e-13, 50);
            const double e = line_energy(s.W, s.U, cfg);
            if (e > prev * (1.0 + 1e-12)) mono = false;
            prev = e;
        }
        check("6b damped energy monotone non-increasing", mono);
    }
    // (c) cross-method agreement < 1e-6 on the non-stiff config
    {
        const FilamentConfig cfg = lossless_chain(10);
        const ClampSchedule clamps = no_clamps(10);
        LatticeState a = bump(10), b = bump(10);
        for (int k = 0; k < 2000; ++k) {
            step_implicit(a, cfg, clamps, 1e-4, 1e-13, 50);
            step_rk4(b, cfg, clamps, 1e-4);
        }
        double diff = 0.0;
        for (int i = 0; i < 10; ++i) diff = std::max(diff, std::abs(a.W[i] - b.W[i]));
        check("6c cross-method agreement < 1e-6", diff < 1e-6, fmt(diff));
    }
    // (d) observed orders under dt halving
    {
        const FilamentConfig cfg = lossless_chain(10);
        const ClampSchedule clamps = no_clamps(10);
        auto solve = [&](bool rk, double dt, int steps) {
            LatticeState s = bump(10);
            for (int k = 0; k < steps; ++k) {
                if (rk) {
                    step_rk4(s, cfg, clamps, dt);
                } else {
                    step_implicit(s, cfg, clamps, dt, 1e-13, 50);
                }
            }
            return s;
        };
        auto order = [&](bool rk) {
            const LatticeState ref = solve(rk, 1.0 / 8192.0, 8192);
            auto err = [&](int den) {
                const LatticeState s = solve(rk, 1.0 / den, den);
                double worst = 0.0;
                for (int i = 0; i < 10; ++i) {
                    worst = std::max(worst, std::abs(s.W[i] - ref.W[i]));
                }
                return worst;
            };
            return std::log2(err(64) / err(128));
        };
        const double p_rk = order(true);
        const double p_tr = order(false);
        check("6d RK4 order ~ 4", p_rk > 3.7 && p_rk < 4.3, fmt(p_rk));
        check("6d implicit order >= 2", p_tr >= 1.8, fmt(p_tr));
    }
    // (e) charge-map roundtrip to 1e-12
    {
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double v = -20.0 + i * (24.0 / 4000.0);  // up to 4, inside branch
            const double back = invert_charge_map(charge_map(v, 0.1), 0.1);
            const double err = std::abs(back - v);
            worst = std::max(worst, err);
            if (err > 1e-12 * std::max(1.0, std::abs(v))) ok = false;
        }
        check("6e charge-map roundtrip to 1e-12", ok, fmt(worst));
    }
    // (f) mirror symmetry of symmetric two-clamp runs to 1e-8
    {
        CellParams p;
        p.R1 = 9.23e6;
        p.R2 = 1.32e6;
        p.L = 1.7e-12;
        p.C0 = 96e-18;
        p.b = 0.1;
        const int n = 19;  // odd length, clamps mirror-placed
        const FilamentConfig cfg = FilamentConfig::uniform(n, p);
        StimulusSpec left, right;
        left.cells = {5};
        left.mode = StimulusSpec::Mode::Clamp;
        left.waveform = Waveform::sine(1.0, 1e-9, 0.0, 0.05);
        right = left;
        right.cells = {15};
        RunSettings set;
        set.t_end = 5e-9;
        const Trace tr = run_simulation(cfg, {left, right}, set);
        double worst = 0.0;
        for (int k = 0; k < tr.n_samples(); ++k) {
            for (int i = 0; i < n; ++i) {
                worst = std::max(
                    worst, std::abs(tr.voltages[static_cast<size_t>(k)]
                                                [static_cast<size_t>(i)] -
                                    tr.voltages[static_cast<size_t>(k)]
                                               [static_cast<size_t>(n - 1 - i)]));
            }
        }
        check("6f mirror symmetry to 1e-8", worst < 1e-8, fmt(worst));
    }
    // (g) dt halving: analog gate levels move < 1e-3 V0, no bit flips
    {
        bool ok = true;
        double worst = 0.0;
        for (const auto& [name, spec] : builtin_gate_library().gates) {
            GateSpec half = spec;
            half.run.dt = spec.run.dt / 2.0;
            for (const auto& in :
                 input_combinations(static_cast<int>(spec.inputs.size()))) {
                const GateResult a = run_gate(spec, in);
                const GateResult b = run_gate(half, in);
                for (size_t i = 0; i < a.levels.size(); ++i) {
                    worst = std::max(worst, std::abs(a.levels[i] - b.levels[i]));
                    if (std::abs(a.levels[i] - b.levels[i]) >= 1e-3 * spec.v0) ok = false;
                }
                if (a.bits != b.bits) ok = false;
            }
        }
        check("6g dt-halving gate levels < 1e-3 V0, bits stable", ok, fmt(worst));
    }
}

// ---------------------------------------------------------------- criterion 7

void criterion_7() {
    bool ok = true;
    std::string bad;
    for (const char* name : {"fig2a.json", "fig2b.json", "fig3a.json", "fig3b.json"}) {
        const RunConfig cfg = load(name);
        const Trace a = run_simulation(cfg.filament(), cfg.stimuli, cfg.run);
        const Trace b = run_simulation(cfg.filament(), cfg.stimuli, cfg.run);
        const double theta =
            cfg.readout ? cfg.readout->threshold_fraction : kArrivalThreshold;
        const bool same =
            trace_to_csv(a) == trace_to_csv(b) &&
            render_raster_pbm(digitize_trace(a, theta, 1.0)) ==
                render_raster_pbm(digitize_trace(b, theta, 1.0)) &&
            a.config_fingerprint == b.config_fingerprint;
        if (!same) {
            ok = false;
            bad += std::string(name) + " ";
        }
    }
    check("7 byte-exact reruns of shipped configs", ok, bad);
}

}  // namespace

int main() {
    criterion_1();
    criteria_2_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    std::printf("\n%d check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
