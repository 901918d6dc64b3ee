#include "actin/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "actin/errors.hpp"

namespace actin {

namespace {
void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw DomainError(std::string(name) + " must be strictly positive");
    }
}
}  // namespace

void DerivationInputs::validate() const {
    require_positive(temperature, "temperature");
    require_positive(dielectric_constant, "dielectric_constant");
    require_positive(monomer_length, "monomer_length");
    require_positive(actin_radius, "actin_radius");
    require_positive(ion_size, "ion_size");
    require_positive(magnetic_permeability, "magnetic_permeability");
    require_positive(molar_conductivity_K, "molar_conductivity_K");
    require_positive(molar_conductivity_Na, "molar_conductivity_Na");
    require_positive(r2_ratio, "r2_ratio");
    if (conc_K < 0.0 || conc_Na < 0.0) {
        throw DomainError("ion concentrations must be non-negative");
    }
    if (!(conc_K > 0.0) && !(conc_Na > 0.0)) {
        throw DomainError("at least one ion concentration must be positive");
    }
}

void CellParams::validate() const {
    if (R1 < 0.0 || R2 < 0.0) throw DomainError("resistances must be non-negative");
    require_positive(L, "L");
    require_positive(C0, "C0");
    if (b < 0.0) throw DomainError("b must be non-negative");
    if (n_monomers < 1) throw DomainError("n_monomers must be >= 1");
}

double bjerrum_length(const DerivationInputs& in) {
    in.validate();
    const double e = constants::elementary_charge;
    return e * e /
           (4.0 * std::numbers::pi * in.dielectric_constant *
            constants::vacuum_permittivity * constants::boltzmann * in.temperature);
}

double monomer_capacitance(const DerivationInputs& in, double lambda_b) {
    in.validate();
    if (!(lambda_b > 0.0)) {
        throw DomainError("lambda_b must be strictly positive");
    }
    const double log_factor = std::log((in.actin_radius + lambda_b) / in.actin_radius);
    return 2.0 * std::numbers::pi * in.dielectric_constant *
           constants::vacuum_permittivity * in.monomer_length / log_factor;
}

double monomer_inductance(const DerivationInputs& in, double lambda_b) {
    in.validate();
    if (!(lambda_b > 0.0)) {
        throw DomainError("lambda_b must be strictly positive");
    }
    const double turns = in.monomer_length / in.ion_size;
    const double radius = in.actin_radius + lambda_b;
    return in.magnetic_permeability * turns * turns * std::numbers::pi * radius *
           radius / in.monomer_length;
}

double solution_resistivity(const DerivationInputs& in) {
    in.validate();
    return 1.0 / (in.molar_conductivity_K * in.conc_K +
                  in.molar_conductivity_Na * in.conc_Na);
}

std::pair<double, double> monomer_resistances(const DerivationInputs& in,
                                              double lambda_b, double rho) {
    in.validate();
    if (!(lambda_b > 0.0)) throw DomainError("lambda_b must be strictly positive");
    if (!(rho > 0.0)) throw DomainError("rho must be strictly positive");
    const double log_factor = std::log((in.actin_radius + lambda_b) / in.actin_radius);
    const double r1 = rho * log_factor / (2.0 * std::numbers::pi * in.monomer_length);
    return {r1, r1 / in.r2_ratio};
}

CellParams derive_cell_params(const DerivationInputs& in, double b) {
    const double lb = bjerrum_length(in);
    const auto [r1, r2] = monomer_resistances(in, lb, solution_resistivity(in));
    CellParams p;
    p.R1 = r1;
    p.R2 = r2;
    p.L = monomer_inductance(in, lb);
    p.C0 = monomer_capacitance(in, lb);
    p.b = b;
    p.n_monomers = 1;
    p.validate();
    return p;
}

CellParams lump_cell_params(const CellParams& base, int n) {
    base.validate();
    if (n < 1) throw DomainError("lump count must be >= 1");
    CellParams p = base;
    p.R1 = base.R1 * n;
    p.R2 = base.R2 / n;
    p.L = base.L * n;
    p.C0 = base.C0 * n;
    p.n_monomers = base.n_monomers * n;
    return p;
}

}  // namespace actin
