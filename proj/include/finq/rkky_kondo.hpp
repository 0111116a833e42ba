#pragma once

#include <string>
#include <vector>

#include "finq/grid.hpp"

namespace finq {

struct CouplingInput {
    double Gamma = 0.2e-3;  // eV
    double U = 46.4e-3;     // eV
    double E_m = 0.0;       // eV; <= 0 selects E_m = 2 V_tun
    int dimensionality = 1;
    double n_ed = 0.21;     // nm^-1 (1D) or nm^-2 (2D)
    double W = 28.0;        // nm, dot separation
    double L = 28.0;        // nm, channel length entering V_tun
    double HFIN = 30.0;     // nm, fin height (2D channel area L (W + 2 HFIN))
    double T = 0.1;         // K
    double m_eff_ratio = 0.2;

    void validate() const;
};

double k_F(const CouplingInput& in);
double fermi_energy(const CouplingInput& in);

// rho_F,1 = m*/(pi hbar^2 k_F) [1/(eV nm)], rho_F,2 = m*/(pi hbar^2) [1/(eV nm^2)].
double rho_F(const CouplingInput& in);

// Per-spin density of states of the whole channel under one dot, 1/eV.
double channel_dos(const CouplingInput& in);

// V_tun from Gamma = 2 pi |V_tun|^2 times the channel DOS.
double tunneling_amplitude(const CouplingInput& in);

// E_m actually used: the explicit value or 2 V_tun.
double effective_E_m(const CouplingInput& in);

// pi rho U^2 / 4 with rho the channel DOS.
double gamma_max(const CouplingInput& in);

double z_factor(const CouplingInput& in);

// z/(pi rho_F): eV nm (1D) or eV nm^2 (2D).
double j_sd(const CouplingInput& in);

// (z^2 E_F/pi) xi_d F_d'(k_F W), xi_1 = 1, xi_2 = 1/(4 pi^2). Signed.
double j_rkky(const CouplingInput& in);

double kondo_temperature(const CouplingInput& in);

// gamma_1 = 2 z^2 k_B T/pi, gamma_2 = z^2 k_B T/(8 pi^2), times G_d'(k_F W) when asked.
double decoherence_rate(const CouplingInput& in, bool use_range_function = false);

struct OperationBudget {
    double J;        // eV, signed
    double gamma;    // eV
    double tau_op;   // s, pi hbar / (2|J|)
    double tau_coh;  // s, hbar / gamma
    double ratio;    // 2|J| / (pi gamma)
};

OperationBudget operation_budget(const CouplingInput& in, bool use_range_function = false);

// eta_d E_F F_d'(k_F W) / (2 pi k_B T), eta_1 = 2, eta_2 = 8/pi. Signed.
double ratio_closed_form(int d, double n_ed, double W, double T, double m_eff_ratio);

struct RegimeItem {
    std::string name;
    bool pass;
    double lhs;
    double rhs;
};

std::vector<RegimeItem> regime_check(const CouplingInput& in, double B_z);

// Rows follow n3d_grid (cm^-3), columns W_grid (nm). Signed ratios.
Matrix ratio_map(int d, const std::vector<double>& n3d_grid, const std::vector<double>& W_grid, double T,
                 double m_eff_ratio = 0.2);

}  // namespace finq
