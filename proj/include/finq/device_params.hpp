#pragma once

#include <array>
#include <string>
#include <vector>

namespace finq {

struct DeviceGeometry {
    double L = 10.0;           // nm, gate length
    double W = 10.0;           // nm, fin spacing
    double HFIN = 30.0;        // nm
    double w_d = 1.0;          // nm, tunnel barrier thickness
    double L_QD = 5.0;         // nm, QD edge
    double r = 20.0;           // nm, LCL to qubit distance
    double eps_barrier = 3.9;  // relative permittivity
    double mu_channel = 10.0;  // relative permeability

    // Non-fatal findings (e.g. L above 28 nm).
    std::vector<std::string> warnings() const;
    void validate() const;
};

struct CarrierSpec {
    double n3d = 1e18;  // cm^-3
    int dimensionality = 1;
    double m_eff_ratio = 0.2;

    std::vector<std::string> warnings() const;
    void validate() const;
};

// n_e1 = n3d^(1/3) in nm^-1 or n_e2 = n3d^(2/3) in nm^-2.
double reduced_density(const CarrierSpec& spec);

// Fermi wave number in nm^-1 from a reduced density: pi n (1D), sqrt(2 pi n) (2D).
double fermi_wavenumber(int d, double n_ed);

// E_F = a0^2 Ry k_F^2 (m0/m*).
double fermi_energy_from_density(int d, double n_ed, double m_eff_ratio);
double fermi_energy(const CarrierSpec& spec);

// U = e^2/(2C), C = 2 eps L_QD^2 / w_d.
double capacitance(const DeviceGeometry& geom);
double charging_energy(const DeviceGeometry& geom);

// Particle-in-a-box level for the triple (n_x, n_y, n_z).
double qd_level(const DeviceGeometry& geom, double m_eff_ratio, std::array<int, 3> n);

struct LevelVariation {
    double first_order;          // 2 (dL/L_QD) eps_n, eV
    double exact;                // eps_n(L_QD - dL) - eps_n(L_QD), eV
    double published_form;       // 15.5 meV (dL/L_QD) sum (n+1)^2, eV
    double computed_coefficient; // eV, the coefficient replacing 15.5 meV
};

LevelVariation qd_level_variation(const DeviceGeometry& geom, double m_eff_ratio,
                                  std::array<int, 3> n, double dL);

// B = mu I / (2 pi r), tesla and ampere.
double lcl_field(const DeviceGeometry& geom, double I);
double lcl_current_for_field(const DeviceGeometry& geom, double B);

struct WireBudget {
    double current;         // A
    double resistance;      // ohm
    double per_wire_power;  // W
    double max_wires;       // floor(chip_power / per_wire_power)
};

WireBudget wire_budget(double resistivity_uohm_cm, double current_density_A_cm2, double width_nm,
                       double height_nm, double length_nm, double chip_power_W);

}  // namespace finq
