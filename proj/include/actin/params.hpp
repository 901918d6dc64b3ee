#pragma once

#include <utility>

namespace actin {

/// Fixed physical constants (CODATA 2018), SI units.
namespace constants {
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double boltzmann = 1.380649e-23;  // J/K
inline constexpr double vacuum_permeability = 1.25663706212e-6;  // H/m
}  // namespace constants

/// Physical inputs for the per-monomer parameter derivation. Defaults are the
/// reference values for an actin filament in an intracellular ionic solution.
struct DerivationInputs {
    double temperature = 293.0;              // K
    double dielectric_constant = 80.0;       // relative (water)
    double monomer_length = 5.4e-9;          // m
    double actin_radius = 2.5e-9;            // m
    double ion_size = 3.6e-10;               // m (hydrated ion radius)
    double magnetic_permeability = constants::vacuum_permeability;  // H/m
    double conc_K = 0.15;                    // mol/L
    double conc_Na = 0.02;                   // mol/L
    double molar_conductivity_K = 7.4;       // (Ohm m)^-1 M^-1
    double molar_conductivity_Na = 5.0;      // (Ohm m)^-1 M^-1
    double r2_ratio = 7.0;                   // R2 = R1 / r2_ratio

    /// Throws DomainError if any field is outside its physical domain.
    void validate() const;
};

/// Electrical parameters of one transmission-line cell. A plain cell covers
/// one monomer; a lumped cell aggregates n_monomers consecutive monomers.
struct CellParams {
    double R1 = 0;       // Ohm, series resistance
    double R2 = 0;       // Ohm, shunt/coupling resistance
    double L = 0;        // H
    double C0 = 0;       // F
    double b = 0;        // 1/V, capacitor nonlinearity coefficient
    int n_monomers = 1;

    void validate() const;
};

/// Bjerrum length e^2 / (4 pi eps eps0 kB T), meters.
double bjerrum_length(const DerivationInputs& in);

/// Cylindrical-capacitor estimate 2 pi eps eps0 l / ln((r + lambda_B)/r), farads.
double monomer_capacitance(const DerivationInputs& in, double lambda_b);

/// Solenoid estimate mu N^2 pi (r + lambda_B)^2 / l with N = l / r_h, henries.
/// N is kept as a real number.
double monomer_inductance(const DerivationInputs& in, double lambda_b);

/// 1 / (Lambda_K c_K + Lambda_Na c_Na), Ohm meters.
double solution_resistivity(const DerivationInputs& in);

/// R1 = rho ln((r + lambda_B)/r) / (2 pi l) and R2 = R1 / r2_ratio, ohms.
std::pair<double, double> monomer_resistances(const DerivationInputs& in,
                                              double lambda_b, double rho);

/// Full derivation pipeline; b is the nonlinearity coefficient to attach.
CellParams derive_cell_params(const DerivationInputs& in, double b);

/// Aggregate n consecutive monomers into one cell: R1 sums in series, R2 in
/// parallel, L and C0 sum; b is unchanged.
CellParams lump_cell_params(const CellParams& base, int n);

}  // namespace actin
