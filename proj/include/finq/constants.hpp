#pragma once

// Unit system: eV, nm, s, T, K. SI only where a quantity is inherently SI
// (charge in C, resistance in ohm, mu0 in T*m/A).

namespace finq {

struct ConstantsTable {
    double hbar = 6.582119569e-16;     // eV s
    double mu_B = 5.7883818060e-5;     // eV/T
    double k_B = 8.617333262e-5;       // eV/K
    double e_charge = 1.602176634e-19; // C
    double R_K = 25812.80745;          // ohm, h/e^2
    double a0 = 0.0529177210903;       // nm
    double Ry = 13.605693122994;       // eV
    double mu0 = 1.25663706212e-6;     // T m/A
    double eps0 = 8.8541878128e-12;    // F/m
    double g_factor = 2.0;

    // hbar^2/(2 m0) in eV nm^2
    constexpr double a0sq_Ry() const { return a0 * a0 * Ry; }
};

inline constexpr ConstantsTable kConst{};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Energy in eV of the Zeeman splitting g mu_B B.
double zeeman_splitting(double B, double g = kConst.g_factor);

double energy_to_temperature(double E);
double temperature_to_energy(double T);

// Cyclic frequency (Hz) of g mu_B B / hbar.
double larmor_frequency(double B, double g = kConst.g_factor);
double larmor_angular(double B, double g = kConst.g_factor);

// hbar * omega in eV for angular frequency omega in rad/s.
double angular_to_energy(double omega);

}  // namespace finq
