#include "finq/rkky_kondo.hpp"

#include <cmath>

#include "finq/constants.hpp"
#include "finq/device_params.hpp"
#include "finq/errors.hpp"
#include "finq/special_fns.hpp"

namespace finq {

namespace {

// m*/hbar^2 in 1/(eV nm^2)
double mass_over_hbar2(double m_eff_ratio) { return m_eff_ratio / (2.0 * kConst.a0sq_Ry()); }

}  // namespace

void CouplingInput::validate() const {
    require(dimensionality == 1 || dimensionality == 2, "CouplingInput: dimensionality must be 1 or 2");
    require(std::isfinite(Gamma) && Gamma > 0.0, "CouplingInput: Gamma must be > 0");
    require(std::isfinite(U) && U > 0.0, "CouplingInput: U must be > 0");
    require(std::isfinite(n_ed) && n_ed > 0.0, "CouplingInput: n_ed must be > 0");
    require(std::isfinite(W) && W > 0.0, "CouplingInput: W must be > 0");
    require(std::isfinite(L) && L > 0.0, "CouplingInput: L must be > 0");
    require(std::isfinite(HFIN) && HFIN > 0.0, "CouplingInput: HFIN must be > 0");
    require(std::isfinite(T) && T >= 0.0, "CouplingInput: T must be >= 0");
    require(std::isfinite(m_eff_ratio) && m_eff_ratio > 0.0, "CouplingInput: m_eff_ratio must be > 0");
    require(std::isfinite(E_m), "CouplingInput: non-finite E_m");
}

double k_F(const CouplingInput& in) { return fermi_wavenumber(in.dimensionality, in.n_ed); }

double fermi_energy(const CouplingInput& in) {
    return fermi_energy_from_density(in.dimensionality, in.n_ed, in.m_eff_ratio);
}

double rho_F(const CouplingInput& in) {
    in.validate();
    const double mh = mass_over_hbar2(in.m_eff_ratio);
    return in.dimensionality == 1 ? mh / (kPi * k_F(in)) : mh / kPi;
}

double channel_dos(const CouplingInput& in) {
    // rho_F,1 is already per spin; rho_F,2 counts both spins
    const double size = in.dimensionality == 1 ? in.L : in.L * (in.W + 2.0 * in.HFIN);
    const double per_spin = in.dimensionality == 1 ? rho_F(in) : 0.5 * rho_F(in);
    return per_spin * size;
}

double tunneling_amplitude(const CouplingInput& in) {
    return std::sqrt(in.Gamma / (2.0 * kPi * channel_dos(in)));
}

double effective_E_m(const CouplingInput& in) {
    in.validate();
    return in.E_m > 0.0 ? in.E_m : 2.0 * tunneling_amplitude(in);
}

double gamma_max(const CouplingInput& in) { return kPi * channel_dos(in) * in.U * in.U / 4.0; }

double z_factor(const CouplingInput& in) {
    const double Em = effective_E_m(in);
    if (!(Em > 0.0 && Em < in.U))
        throw DomainError("z_factor: E_m must lie strictly between 0 and U");
    return in.Gamma * in.U / ((in.U - Em) * Em);
}

double j_sd(const CouplingInput& in) { return z_factor(in) / (kPi * rho_F(in)); }

double j_rkky(const CouplingInput& in) {
    const double z = z_factor(in);
    const double xi = in.dimensionality == 1 ? 1.0 : 1.0 / (4.0 * kPi * kPi);
    return z * z * fermi_energy(in) / kPi * xi * F_prime(in.dimensionality, k_F(in) * in.W);
}

double kondo_temperature(const CouplingInput& in) {
    const double z = z_factor(in);
    return 0.5 * std::sqrt(in.Gamma * in.U) * std::exp(-kPi / z);
}

double decoherence_rate(const CouplingInput& in, bool use_range_function) {
    const double z = z_factor(in);
    const double kT = kConst.k_B * in.T;
    double g = in.dimensionality == 1 ? 2.0 * z * z * kT / kPi : z * z * kT / (8.0 * kPi * kPi);
    if (use_range_function) g *= G_prime(in.dimensionality, k_F(in) * in.W);
    return g;
}

OperationBudget operation_budget(const CouplingInput& in, bool use_range_function) {
    OperationBudget b{};
    b.J = j_rkky(in);
    const double Fp = F_prime(in.dimensionality, k_F(in) * in.W);
    if (std::abs(Fp) < 1e-14) throw DomainError("operation_budget: coupling node, choose a different W or n");
    b.gamma = decoherence_rate(in, use_range_function);
    b.tau_op = kPi * kConst.hbar / (2.0 * std::abs(b.J));
    b.tau_coh = kConst.hbar / b.gamma;
    b.ratio = 2.0 * std::abs(b.J) / (kPi * b.gamma);
    return b;
}

double ratio_closed_form(int d, double n_ed, double W, double T, double m_eff_ratio) {
    require(T > 0.0, "ratio_closed_form: T must be > 0");
    const double eta = d == 1 ? 2.0 : 8.0 / kPi;
    const double EF = fermi_energy_from_density(d, n_ed, m_eff_ratio);
    const double x = fermi_wavenumber(d, n_ed) * W;
    return eta * EF * F_prime(d, x) / (2.0 * kPi * kConst.k_B * T);
}

std::vector<RegimeItem> regime_check(const CouplingInput& in, double B_z) {
    require(std::isfinite(B_z) && B_z >= 0.0, "regime_check: B_z must be >= 0");
    const double J = std::abs(j_rkky(in));
    const double kT = kConst.k_B * in.T;
    const double zee = 2.0 * kConst.mu_B * B_z;
    const double EF = fermi_energy(in);
    const double TK = kondo_temperature(in);
    const double gmax = gamma_max(in);
    return {
        {"k_B T < J", kT < J, kT, J},
        {"J < 2 mu_B B_z", J < zee, J, zee},
        {"2 mu_B B_z < E_F", zee < EF, zee, EF},
        {"J > T_K", J > TK, J, TK},
        {"10 Gamma <= Gamma_max", 10.0 * in.Gamma <= gmax, 10.0 * in.Gamma, gmax},
    };
}

Matrix ratio_map(int d, const std::vector<double>& n3d_grid, const std::vector<double>& W_grid, double T,
                 double m_eff_ratio) {
    require(!n3d_grid.empty() && !W_grid.empty(), "ratio_map: empty grid");
    Matrix m(n3d_grid.size(), W_grid.size());
    parallel_for(m.rows, [&](std::size_t i) {
        CarrierSpec spec{n3d_grid[i], d, m_eff_ratio};
        const double n_ed = reduced_density(spec);
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = ratio_closed_form(d, n_ed, W_grid[j], T, m_eff_ratio);
    });
    return m;
}

}  // namespace finq
