#pragma once

namespace finq {

// Conductances g are in units of 2e^2/h. Internally g' = R_K g_SI = 2 g.
struct NoiseEnv {
    double V_D = 1.0;   // V
    double T = 0.1;     // K
    double df = 1e12;   // Hz
    double g = 1.0;     // 2e^2/h units

    void validate() const;
};

struct NoiseLevel {
    double psd;       // A^2/Hz
    double dg_prime;  // fluctuation of g' = R_K g_SI
    double dg;        // fluctuation in 2e^2/h units
};

double to_g_prime(double g);
double from_g_prime(double g_prime);

NoiseLevel shot_noise(const NoiseEnv& env);
NoiseLevel thermal_noise(const NoiseEnv& env);

// 2 q V_D / R_K: S_q = coefficient * g'.
double shot_psd_coefficient(double V_D);
// sqrt(2 q R_K df): dg'_q = coefficient * sqrt(g'/V_D).
double shot_dg_coefficient(double df);
// sqrt(4 k_B T R_K df): dg'_T = coefficient * sqrt(g')/V_D.
double thermal_dg_coefficient(double T, double df);

// 2 q df / V_D in siemens; shot fluctuation stays below g iff g_SI exceeds it.
double shot_threshold_siemens(const NoiseEnv& env);

// Integral of max(P_meas - P_ref, 0) for equal-width Gaussians, closed form.
double measurement_fidelity(double g_meas, double g_ref, double sigma);

// Same integral by adaptive Gauss-Kronrod quadrature; widths may differ.
double measurement_fidelity_quadrature(double g_meas, double g_ref, double sigma_meas, double sigma_ref);

// |g_meas - g_ref| / dg_q with dg_q at the larger of the two conductances.
double snr(double g_meas, double g_ref, const NoiseEnv& env);

}  // namespace finq
