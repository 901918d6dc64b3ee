#include "actin/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "actin/errors.hpp"

namespace actin {

double charge_map(double v, double b) { return v - b * v * v; }

double charge_map_domain_limit(double b) {
    return b > 0.0 ? 1.0 / (4.0 * b) : std::numeric_limits<double>::infinity();
}

double invert_charge_map(double w, double b) {
    if (b == 0.0) return w;
    const double disc = 1.0 - 4.0 * b * w;
    if (disc < 0.0) {
        throw DomainError("nonlinearity domain exceeded: W = " + std::to_string(w) +
                          " > 1/(4b) = " + std::to_string(charge_map_domain_limit(b)));
    }
    // Branch continuous with V = 0 at W = 0. The naive form loses precision
    // for small |w|; divide through by the conjugate instead.
    return 2.0 * w / (1.0 + std::sqrt(disc));
}

int FilamentConfig::site(int monomer) const {
    if (monomer < 1 || monomer > n_monomers) {
        throw ConfigError("cell index " + std::to_string(monomer) +
                          " outside filament of " + std::to_string(n_monomers) +
                          " monomers");
    }
    return site_of[static_cast<size_t>(monomer)];
}

FilamentConfig FilamentConfig::uniform(int n_cells, const CellParams& p) {
    return with_lumped_groups(n_cells, p, {});
}

FilamentConfig FilamentConfig::with_lumped_groups(
    int n_cells, const CellParams& p,
    const std::vector<std::pair<int, int>>& groups) {
    if (n_cells < 2) throw ConfigError("filament needs at least 2 cells");
    p.validate();

    std::vector<std::pair<int, int>> sorted = groups;
    std::sort(sorted.begin(), sorted.end());
    int prev_hi = 0;
    for (const auto& [lo, hi] : sorted) {
        if (lo < 1 || hi > n_cells || lo > hi) {
            throw ConfigError("lumped group [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "] out of range");
        }
        if (lo <= prev_hi) throw ConfigError("lumped groups overlap");
        prev_hi = hi;
    }

    FilamentConfig cfg;
    cfg.n_monomers = n_cells;
    cfg.site_of.assign(static_cast<size_t>(n_cells) + 1, -1);
    size_t g = 0;
    for (int m = 1; m <= n_cells;) {
        if (g < sorted.size() && m == sorted[g].first) {
            const auto [lo, hi] = sorted[g];
            const int site = cfg.n_sites();
            cfg.cells.push_back(lump_cell_params(p, hi - lo + 1));
            for (int k = lo; k <= hi; ++k) cfg.site_of[static_cast<size_t>(k)] = site;
            m = hi + 1;
            ++g;
        } else {
            cfg.site_of[static_cast<size_t>(m)] = cfg.n_sites();
            cfg.cells.push_back(p);
            ++m;
        }
    }
    cfg.validate();
    return cfg;
}

void FilamentConfig::validate() const {
    if (n_sites() < 2) throw ConfigError("filament needs at least 2 lattice sites");
    if (static_cast<int>(site_of.size()) != n_monomers + 1) {
        throw ConfigError("site map inconsistent with monomer count");
    }
    for (const auto& c : cells) c.validate();
}

LatticeState LatticeState::zero(int n_sites) {
    LatticeState s;
    s.W.assign(static_cast<size_t>(n_sites), 0.0);
    s.U.assign(static_cast<size_t>(n_sites), 0.0);
    return s;
}

void impose_clamps(LatticeState& state, const FilamentConfig& config,
                   const ClampSchedule& clamps, double t) {
    for (size_t s = 0; s < clamps.sites.size(); ++s) {
        if (!clamps.sites[s].active) continue;
        const double b = config.cells[s].b;
        const double v = clamps.sites[s].waveform.eval(t);
        state.W[s] = charge_map(v, b);
        // dW/dt = (1 - 2 b V) dV/dt, analytic
        state.U[s] = (1.0 - 2.0 * b * v) * clamps.sites[s].waveform.derivative(t);
    }
    state.t = t;
}

std::pair<std::vector<double>, std::vector<double>> rhs_first_order(
    const LatticeState& state, const FilamentConfig& config,
    const ClampSchedule& clamps, double t) {
    const int n = config.n_sites();
    std::vector<double> V(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double b = config.cells[static_cast<size_t>(i)].b;
        const double w = state.W[static_cast<size_t>(i)];
        if (b > 0.0 && 1.0 - 4.0 * b * w < 0.0) {
            throw NumericalError("nonlinearity domain exceeded (W > 1/(4b))", t, i + 1);
        }
        V[static_cast<size_t>(i)] = invert_charge_map(w, b);
    }

    std::vector<double> dW(static_cast<size_t>(n), 0.0);
    std::vector<double> dU(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const size_t si = static_cast<size_t>(i);
        if (clamps.sites.size() > si && clamps.sites[si].active) continue;
        const auto& p = config.cells[si];
        const double vl = i > 0 ? V[si - 1] : 0.0;
        const double vr = i < n - 1 ? V[si + 1] : 0.0;
        const double ul = i > 0 ? state.U[si - 1] : 0.0;
        const double ur = i < n - 1 ? state.U[si + 1] : 0.0;
        dW[si] = state.U[si];
        dU[si] = (vr + vl - 2.0 * V[si]) / (p.L * p.C0) -
                 (p.R1 / p.L) * state.U[si] -
                 (p.R2 / p.L) * (2.0 * state.U[si] - ur - ul);
    }
    return {std::move(dW), std::move(dU)};
}

std::vector<double> cell_voltages(const LatticeState& state,
                                  const FilamentConfig& config,
                                  const ClampSchedule& clamps) {
    const int n = config.n_sites();
    std::vector<double> V(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const size_t si = static_cast<size_t>(i);
        if (clamps.sites.size() > si && clamps.sites[si].active) {
            V[si] = clamps.sites[si].waveform.eval(state.t);
        } else {
            V[si] = invert_charge_map(state.W[si], config.cells[si].b);
        }
    }
    return V;
}

}  // namespace actin
