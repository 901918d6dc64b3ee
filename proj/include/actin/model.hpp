#pragma once

#include <utility>
#include <vector>

#include "actin/params.hpp"
#include "actin/stimuli.hpp"

namespace actin {

/// W = V - b V^2, the charge-like variable (Q / C0).
double charge_map(double v, double b);

/// Inverse of charge_map on the branch continuous with V = 0:
/// V = (1 - sqrt(1 - 4 b W)) / (2 b). Throws DomainError when W > 1/(4b).
double invert_charge_map(double w, double b);

/// Upper end of the invertibility domain for W, or +inf when b = 0.
double charge_map_domain_limit(double b);

/// A chain of transmission-line cells. Lumped groups collapse consecutive
/// monomers into a single lattice site, so the lattice may be shorter than
/// the monomer count; site_of maps 1-based monomer indices to site indices.
struct FilamentConfig {
    std::vector<CellParams> cells;  // one per lattice site
    std::vector<int> site_of;       // size n_monomers + 1; site_of[0] unused
    int n_monomers = 0;

    int n_sites() const { return static_cast<int>(cells.size()); }

    /// 0-based lattice site of a 1-based monomer index.
    int site(int monomer) const;

    static FilamentConfig uniform(int n_cells, const CellParams& p);

    /// Groups are inclusive 1-based monomer ranges [lo, hi]; each becomes a
    /// single lumped site. Groups must be disjoint and in-range.
    static FilamentConfig with_lumped_groups(
        int n_cells, const CellParams& p,
        const std::vector<std::pair<int, int>>& groups);

    void validate() const;
};

/// Evolved variables: W and U = dW/dt per lattice site, plus current time.
struct LatticeState {
    std::vector<double> W;  // volts
    std::vector<double> U;  // volts / second
    double t = 0.0;         // seconds

    static LatticeState zero(int n_sites);
};

/// Writes the imposed W and U of every clamped site at time t.
void impose_clamps(LatticeState& state, const FilamentConfig& config,
                   const ClampSchedule& clamps, double t);

/// Evaluates the first-order dynamics at time t. Clamped sites contribute
/// their imposed V and U to neighbors and get dW = dU = 0. Ends are grounded
/// (phantom neighbors at V = 0, U = 0).
std::pair<std::vector<double>, std::vector<double>> rhs_first_order(
    const LatticeState& state, const FilamentConfig& config,
    const ClampSchedule& clamps, double t);

/// Cell voltages V recovered from W. Clamped sites report the waveform value.
std::vector<double> cell_voltages(const LatticeState& state,
                                  const FilamentConfig& config,
                                  const ClampSchedule& clamps);

}  // namespace actin
