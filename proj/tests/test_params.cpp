#include <doctest.h>

#include <cmath>

#include "actin/errors.hpp"
#include "actin/params.hpp"

using namespace actin;

TEST_CASE("bjerrum length matches the reference value") {
    DerivationInputs in;
    const double lb = bjerrum_length(in);
    CHECK(lb == doctest::Approx(7.1e-10).epsilon(0.02));
}

TEST_CASE("bjerrum length is exactly inversely proportional to T") {
    DerivationInputs in;
    const double lb = bjerrum_length(in);
    in.temperature *= 2.0;
    CHECK(bjerrum_length(in) * 2.0 == doctest::Approx(lb).epsilon(1e-13));
}

TEST_CASE("bjerrum length at eps=40 doubles the eps=80 value") {
    DerivationInputs in;
    in.dielectric_constant = 40.0;
    // direct evaluation: e^2/(4 pi * 40 * eps0 * kB * 293)
    CHECK(bjerrum_length(in) == doctest::Approx(1.426e-9).epsilon(0.001));
}

TEST_CASE("bjerrum length decreases in T and eps") {
    DerivationInputs in;
    double prev_t = 1.0;
    for (int i = 0; i < 10; ++i) {
        in.temperature = 250.0 + 10.0 * i;
        double prev_e = 1.0;
        for (int k = 0; k < 10; ++k) {
            in.dielectric_constant = 40.0 + 10.0 * k;
            const double lb = bjerrum_length(in);
            CHECK(lb < prev_e);
            prev_e = lb;
        }
        in.dielectric_constant = 80.0;
        const double lb = bjerrum_length(in);
        CHECK(lb < prev_t);
        prev_t = lb;
    }
}

TEST_CASE("bjerrum length rejects non-positive inputs") {
    DerivationInputs in;
    in.temperature = 0.0;
    CHECK_THROWS_AS(bjerrum_length(in), DomainError);
    in.temperature = 293.0;
    in.dielectric_constant = -1.0;
    CHECK_THROWS_AS(bjerrum_length(in), DomainError);
}

TEST_CASE("capacitance matches the reference value") {
    DerivationInputs in;
    const double c = monomer_capacitance(in, 7.1e-10);
    CHECK(c == doctest::Approx(96e-6 * 1e-12).epsilon(0.05));
}

TEST_CASE("capacitance rejects lambda_b = 0 and is linear in l") {
    DerivationInputs in;
    CHECK_THROWS_AS(monomer_capacitance(in, 0.0), DomainError);
    const double c = monomer_capacitance(in, 7.1e-10);
    in.monomer_length *= 2.0;
    CHECK(monomer_capacitance(in, 7.1e-10) == doctest::Approx(2.0 * c).epsilon(1e-13));
}

TEST_CASE("inductance matches the reference value") {
    DerivationInputs in;
    const double l = monomer_inductance(in, 7.1e-10);
    CHECK(l == doctest::Approx(1.7e-12).epsilon(0.05));
    // direct evaluation with N = 15, r + lambda_B = 3.21 nm
    CHECK(l == doctest::Approx(1.695e-12).epsilon(0.005));
}

TEST_CASE("inductance scales as N^2") {
    DerivationInputs in;
    const double l = monomer_inductance(in, 7.1e-10);
    in.ion_size *= 2.0;  // N halved
    CHECK(monomer_inductance(in, 7.1e-10) == doctest::Approx(l / 4.0).epsilon(1e-13));
}

TEST_CASE("resistivity from the stated concentrations") {
    DerivationInputs in;
    CHECK(solution_resistivity(in) == doctest::Approx(1.0 / 1.21).epsilon(1e-12));
    in.conc_Na = 0.0;
    CHECK(solution_resistivity(in) == doctest::Approx(1.0 / 1.11).epsilon(1e-12));
    in.conc_K = 0.0;
    CHECK_THROWS_AS(solution_resistivity(in), DomainError);
}

TEST_CASE("resistivity halves when both concentrations double") {
    DerivationInputs in;
    const double rho = solution_resistivity(in);
    in.conc_K *= 2.0;
    in.conc_Na *= 2.0;
    CHECK(solution_resistivity(in) == doctest::Approx(rho / 2.0).epsilon(1e-13));
}

TEST_CASE("resistances match the reference values") {
    DerivationInputs in;
    const double lb = bjerrum_length(in);
    const double rho = solution_resistivity(in);
    const auto [r1, r2] = monomer_resistances(in, lb, rho);
    CHECK(r1 == doctest::Approx(6.11e6).epsilon(0.05));
    CHECK(r2 == doctest::Approx(0.87e6).epsilon(0.05));
    // arithmetic chain: rho = 0.8264, ln factor 0.25002, l = 5.4 nm
    CHECK(r1 == doctest::Approx(6.09e6).epsilon(0.01));
}

TEST_CASE("r2_ratio = 1 makes R2 equal R1") {
    DerivationInputs in;
    in.r2_ratio = 1.0;
    const auto [r1, r2] = monomer_resistances(in, 7.1e-10, 0.8264);
    CHECK(r1 == r2);
}

TEST_CASE("full pipeline reproduces all five reference values within 5%") {
    DerivationInputs in;
    const double lb = bjerrum_length(in);
    const CellParams p = derive_cell_params(in, 0.1);
    CHECK(lb == doctest::Approx(7.1e-10).epsilon(0.05));
    CHECK(p.C0 == doctest::Approx(96e-18).epsilon(0.05));
    CHECK(p.L == doctest::Approx(1.7e-12).epsilon(0.05));
    CHECK(p.R1 == doctest::Approx(6.11e6).epsilon(0.05));
    CHECK(p.R2 == doctest::Approx(0.873e6).epsilon(0.05));
    CHECK(p.b == 0.1);
}

TEST_CASE("derivation is deterministic") {
    DerivationInputs in;
    const CellParams a = derive_cell_params(in, 0.1);
    const CellParams b = derive_cell_params(in, 0.1);
    CHECK(a.R1 == b.R1);
    CHECK(a.R2 == b.R2);
    CHECK(a.L == b.L);
    CHECK(a.C0 == b.C0);
}

TEST_CASE("lumping: identity, n=10 arithmetic, composition") {
    CellParams p;
    p.R1 = 6.11e6;
    p.R2 = 9e5;
    p.L = 1.7e-12;
    p.C0 = 96e-18;
    p.b = 0.1;

    const CellParams id = lump_cell_params(p, 1);
    CHECK(id.R1 == p.R1);
    CHECK(id.R2 == p.R2);
    CHECK(id.n_monomers == 1);

    const CellParams ten = lump_cell_params(p, 10);
    CHECK(ten.R1 == doctest::Approx(61.1e6));
    CHECK(ten.R2 == doctest::Approx(0.09e6));
    CHECK(ten.L == doctest::Approx(17e-12));
    CHECK(ten.C0 == doctest::Approx(960e-18));
    CHECK(ten.b == p.b);
    CHECK(ten.n_monomers == 10);

    const CellParams composed = lump_cell_params(lump_cell_params(p, 2), 5);
    CHECK(composed.R1 == ten.R1);
    CHECK(composed.R2 == ten.R2);
    CHECK(composed.L == ten.L);
    CHECK(composed.C0 == ten.C0);
    CHECK(composed.n_monomers == ten.n_monomers);

    // R1' C0' = n^2 R1 C0 exactly
    CHECK(ten.R1 * ten.C0 == 100.0 * p.R1 * p.C0);

    CHECK_THROWS_AS(lump_cell_params(p, 0), DomainError);
}
