#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "finq/conductance.hpp"

namespace finq {

// Two dots (rows 0, 1 = dots 2, 4) and three channels of N_k modes each on a
// flat band [-D, D). Channel 1 couples to dot 2, channel 3 to both dots,
// channel 5 to dot 4, all with k-independent couplings.
struct DiscretizedHamiltonian {
    double D = 1.0;
    int N_k = 200;
    double E2 = 0.0;
    double E4 = 0.0;
    double V1 = 0.0;
    double V3 = 0.0;
    double V5 = 0.0;

    static constexpr int kMaxDim = 5000;

    int dim() const { return 3 * N_k + 2; }
    double spacing() const { return 2.0 * D / N_k; }
    double rho() const { return N_k / (2.0 * D); }  // modes per unit energy, one channel
    double mode_energy(int k) const { return -D + spacing() * k; }
    void validate() const;
    Eigen::MatrixXd assemble() const;

    // Couplings from level half-widths Gamma_i = pi rho V_i^2.
    static DiscretizedHamiltonian from_widths(double D, int N_k, double E2, double E4, double Gamma1,
                                              double Gamma3, double Gamma5);
};

struct Eigenpairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns
    Eigen::VectorXd nu2() const { return vectors.row(0).transpose(); }
    Eigen::VectorXd nu4() const { return vectors.row(1).transpose(); }
};

Eigenpairs diagonalize(const DiscretizedHamiltonian& h);

// max of |sum nu2^2 - 1|, |sum nu4^2 - 1|, |sum nu2 nu4|
double completeness_check(const Eigenpairs& ep);

using cplx = std::complex<double>;

struct DotGreen {
    cplx G22, G24, G42, G44;
    cplx det_inverse;  // det of [z - H_dd - Sigma]
};

// Exact continuum self-energy of one flat-band channel at E + i0.
cplx flat_band_self_energy(double V, double rho, double D, double E);

DotGreen continuum_green(const DiscretizedHamiltonian& h, double E);
DotGreen numeric_green(const Eigenpairs& ep, double E, double eta);

struct Coefficients {
    cplx x1, x2, x3, y1, y2, y3;
};

Coefficients coefficients_from_green(const DotGreen& g, const DiscretizedHamiltonian& h);

struct CoefficientSummary {
    double x1sq, x2sq, y2sq, y3sq;
    double A1, A3, A5;     // |x_i|^2 + |y_i|^2
    double C13, C15, C35;  // |x_i^* x_j + y_i^* y_j|^2
    double det_sq;         // |det[E - H_dd - Sigma]|^2
    double g;              // sum A^2 + 2 sum C
};

CoefficientSummary summarize(const Coefficients& c, const DotGreen& g);
std::vector<std::string> summary_names();
std::vector<double> summary_values(const CoefficientSummary& s);

// Maps the continuum at energy E onto the closed-form inputs:
// s_i = Re Sigma_i, Gamma_i = -Im Sigma_i, rho_F = rho/2 so that |V_i|^2 is kept.
ChannelDotSystem closed_form_system(const DiscretizedHamiltonian& h, double E);

struct CoefficientReport {
    int N_k = 0;
    double eta = 0.0;
    std::vector<double> energies;
    std::vector<std::string> names;
    std::vector<double> max_rel_error;  // numeric vs continuum, per quantity
    double worst = 0.0;
    double closed_form_g_error = 0.0;  // printed formula vs continuum, relative
};

CoefficientReport coefficient_check(const DiscretizedHamiltonian& h, const Eigenpairs& ep, double E_lo,
                                    double E_hi, int n_energies = 5, double eta_over_spacing = 1.25);

// Interquartile width of the cumulative dot-2 spectral weight. For a
// Lorentzian this equals its full width at half maximum.
double level_width_iqr(const Eigenpairs& ep, int dot_row = 0);

}  // namespace finq
