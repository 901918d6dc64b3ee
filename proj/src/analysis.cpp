#include "actin/analysis.hpp"

#include <cmath>
#include <sstream>

#include "actin/errors.hpp"

namespace actin {

std::vector<std::optional<double>> arrival_times(const Trace& trace, double theta,
                                                 double v0) {
    if (!(theta > 0.0) || !(theta < 1.0)) {
        throw DomainError("arrival threshold must be in (0, 1)");
    }
    const int n = trace.n_sites();
    std::vector<std::optional<double>> arrivals(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
        for (int k = 0; k < trace.n_samples(); ++k) {
            if (std::abs(trace.voltages[static_cast<size_t>(k)][static_cast<size_t>(s)]) >=
                theta * v0) {
                arrivals[static_cast<size_t>(s)] = trace.times[static_cast<size_t>(k)];
                break;
            }
        }
    }
    return arrivals;
}

double estimate_speed(const Trace& trace, double theta, double v0,
                      double monomer_length) {
    const auto arrivals = arrival_times(trace, theta, v0);
    // fit t = a + x / v by least squares over crossing cells
    double sx = 0, st = 0, sxx = 0, sxt = 0;
    int m = 0;
    for (size_t s = 0; s < arrivals.size(); ++s) {
        if (!arrivals[s]) continue;
        const double x = static_cast<double>(s) * monomer_length;
        const double t = *arrivals[s];
        sx += x;
        st += t;
        sxx += x * x;
        sxt += x * t;
        ++m;
    }
    if (m < 2) throw DomainError("estimate_speed needs at least two arrivals");
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom == 0.0) throw DomainError("estimate_speed: degenerate positions");
    const double slope = (static_cast<double>(m) * sxt - sx * st) / denom;
    if (slope == 0.0) throw DomainError("estimate_speed: simultaneous arrivals");
    return 1.0 / slope;
}

double line_energy(const std::vector<double>& V, const std::vector<double>& dVdt,
                   const FilamentConfig& config) {
    const size_t n = V.size();
    double e = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const auto& p = config.cells[i];
        e += 0.5 * p.L * p.C0 * dVdt[i] * dVdt[i];
    }
    // boundary-inclusive gradient terms, phantom V = 0 at both ends
    double prev = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = V[i] - prev;
        e += 0.5 * d * d;
        prev = V[i];
    }
    e += 0.5 * prev * prev;
    return e;
}

Raster digitize_trace(const Trace& trace, double theta, double v0) {
    if (!(theta > 0.0) || !(theta < 1.0)) {
        throw DomainError("digitization threshold must be in (0, 1)");
    }
    Raster r;
    r.n_cells = trace.n_sites();
    r.n_samples = trace.n_samples();
    r.bits.assign(static_cast<size_t>(r.n_cells),
                  std::vector<uint8_t>(static_cast<size_t>(r.n_samples), 0));
    for (int s = 0; s < r.n_cells; ++s) {
        for (int k = 0; k < r.n_samples; ++k) {
            r.bits[static_cast<size_t>(s)][static_cast<size_t>(k)] =
                std::abs(trace.voltages[static_cast<size_t>(k)][static_cast<size_t>(s)]) >=
                        theta * v0
                    ? 1
                    : 0;
        }
    }
    return r;
}

std::string render_raster_pbm(const Raster& raster) {
    if (raster.n_cells < 1 || raster.n_samples < 1) {
        throw DomainError("raster must be non-empty");
    }
    std::ostringstream out;
    out << "P1\n" << raster.n_samples << ' ' << raster.n_cells << '\n';
    for (int row = raster.n_cells - 1; row >= 0; --row) {
        for (int k = 0; k < raster.n_samples; ++k) {
            if (k > 0) out << ' ';
            out << static_cast<int>(raster.bits[static_cast<size_t>(row)][static_cast<size_t>(k)]);
        }
        out << '\n';
    }
    return out.str();
}

Raster parse_raster_pbm(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string magic;
    in >> magic;
    if (magic != "P1") throw DomainError("not a P1 PBM");
    int width = 0, height = 0;
    in >> width >> height;
    if (width < 1 || height < 1) throw DomainError("bad PBM dimensions");
    Raster r;
    r.n_cells = height;
    r.n_samples = width;
    r.bits.assign(static_cast<size_t>(height),
                  std::vector<uint8_t>(static_cast<size_t>(width), 0));
    for (int row = height - 1; row >= 0; --row) {
        for (int k = 0; k < width; ++k) {
            int bit = 0;
            if (!(in >> bit)) throw DomainError("truncated PBM");
            r.bits[static_cast<size_t>(row)][static_cast<size_t>(k)] =
                static_cast<uint8_t>(bit != 0);
        }
    }
    return r;
}

}  // namespace actin
