#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actin/model.hpp"
#include "actin/trace.hpp"

namespace actin {

/// Binary excitation image, bits[cell][sample], cell 0 = lattice site 0.
struct Raster {
    int n_cells = 0;
    int n_samples = 0;
    std::vector<std::vector<uint8_t>> bits;  // cell x sample
};

/// Earliest sample time (seconds) at which each site's voltage magnitude
/// reaches theta * v0; nullopt where never crossed.
std::vector<std::optional<double>> arrival_times(const Trace& trace, double theta,
                                                 double v0);

/// Least-squares propagation speed over all sites with arrivals: fit
/// t = a + x / v with x = (site index) * monomer_length. Throws DomainError
/// with fewer than two arrivals.
double estimate_speed(const Trace& trace, double theta, double v0,
                      double monomer_length = 5.4e-9);

/// Discrete line energy in test units; diagnostic for b = 0 configurations:
/// E = sum 1/2 L C0 (dV/dt)^2 + 1/2 sum (V_{n+1} - V_n)^2 with grounded ends.
double line_energy(const std::vector<double>& V, const std::vector<double>& dVdt,
                   const FilamentConfig& config);

/// Raster of |V| >= theta * v0 per sample and site.
Raster digitize_trace(const Trace& trace, double theta, double v0);

/// Plain PBM (P1). Width = time samples, height = cells, top row = the
/// highest-numbered cell, 1 = black = excited. Deterministic byte output.
std::string render_raster_pbm(const Raster& raster);

/// Parses render_raster_pbm output back into a raster (roundtrip check).
Raster parse_raster_pbm(const std::string& bytes);

}  // namespace actin
