#include "finq/device_params.hpp"

#include <cmath>

#include "finq/constants.hpp"
#include "finq/errors.hpp"

namespace finq {

namespace {
bool positive(double v) { return std::isfinite(v) && v > 0.0; }
}  // namespace

void DeviceGeometry::validate() const {
    require(positive(L) && positive(W) && positive(HFIN) && positive(w_d) && positive(L_QD) &&
                positive(r),
            "DeviceGeometry: all lengths must be > 0");
    require(positive(eps_barrier), "DeviceGeometry: eps_barrier must be > 0");
    require(positive(mu_channel), "DeviceGeometry: mu_channel must be > 0");
}

std::vector<std::string> DeviceGeometry::warnings() const {
    std::vector<std::string> w;
    if (L > 28.0) w.push_back("gate length L above 28 nm");
    if (L_QD > L) w.push_back("L_QD larger than gate length");
    return w;
}

void CarrierSpec::validate() const {
    require(positive(n3d), "CarrierSpec: n3d must be > 0");
    require(dimensionality == 1 || dimensionality == 2, "CarrierSpec: dimensionality must be 1 or 2");
    require(positive(m_eff_ratio), "CarrierSpec: m_eff_ratio must be > 0");
}

std::vector<std::string> CarrierSpec::warnings() const {
    std::vector<std::string> w;
    if (n3d < 1e15 || n3d > 1e20) w.push_back("n3d outside 1e15..1e20 cm^-3");
    return w;
}

double reduced_density(const CarrierSpec& spec) {
    spec.validate();
    // cm^-3 -> nm^-3
    const double n_nm3 = spec.n3d * 1e-21;
    return std::pow(n_nm3, spec.dimensionality / 3.0);
}

double fermi_wavenumber(int d, double n_ed) {
    require(d == 1 || d == 2, "fermi_wavenumber: d must be 1 or 2");
    require(positive(n_ed), "fermi_wavenumber: density must be > 0");
    return d == 1 ? kPi * n_ed : std::sqrt(2.0 * kPi * n_ed);
}

double fermi_energy_from_density(int d, double n_ed, double m_eff_ratio) {
    require(positive(m_eff_ratio), "fermi_energy: m_eff_ratio must be > 0");
    const double kF = fermi_wavenumber(d, n_ed);
    return kConst.a0sq_Ry() * kF * kF / m_eff_ratio;
}

double fermi_energy(const CarrierSpec& spec) {
    return fermi_energy_from_density(spec.dimensionality, reduced_density(spec), spec.m_eff_ratio);
}

double capacitance(const DeviceGeometry& geom) {
    geom.validate();
    const double area = geom.L_QD * geom.L_QD * 1e-18;  // m^2
    const double gap = geom.w_d * 1e-9;                 // m
    return 2.0 * geom.eps_barrier * kConst.eps0 * area / gap;
}

double charging_energy(const DeviceGeometry& geom) {
    // e^2/(2C) in J, divided by e for eV
    return kConst.e_charge / (2.0 * capacitance(geom));
}

double qd_level(const DeviceGeometry& geom, double m_eff_ratio, std::array<int, 3> n) {
    geom.validate();
    require(positive(m_eff_ratio), "qd_level: m_eff_ratio must be > 0");
    double s = 0.0;
    for (int q : n) {
        require(q >= 0, "qd_level: quantum numbers must be >= 0");
        s += double(q + 1) * double(q + 1);
    }
    // pi^2 hbar^2 / (2 m* L^2) = pi^2 a0^2 Ry (m0/m*) / L^2
    return kPi * kPi * kConst.a0sq_Ry() / m_eff_ratio * s / (geom.L_QD * geom.L_QD);
}

LevelVariation qd_level_variation(const DeviceGeometry& geom, double m_eff_ratio,
                                  std::array<int, 3> n, double dL) {
    require(std::isfinite(dL) && std::abs(dL) < geom.L_QD, "qd_level_variation: |dL| must be < L_QD");
    const double eps = qd_level(geom, m_eff_ratio, n);
    DeviceGeometry shrunk = geom;
    shrunk.L_QD = geom.L_QD - dL;
    double s = 0.0;
    for (int q : n) s += double(q + 1) * double(q + 1);
    const double ratio = dL / geom.L_QD;
    LevelVariation v{};
    v.first_order = 2.0 * ratio * eps;
    v.exact = qd_level(shrunk, m_eff_ratio, n) - eps;
    v.published_form = 15.5e-3 * ratio * s;
    v.computed_coefficient = 2.0 * eps / s;
    return v;
}

double lcl_field(const DeviceGeometry& geom, double I) {
    geom.validate();
    require(std::isfinite(I), "lcl_field: non-finite current");
    const double mu = geom.mu_channel * kConst.mu0;
    return mu * I / (2.0 * kPi * geom.r * 1e-9);
}

double lcl_current_for_field(const DeviceGeometry& geom, double B) {
    geom.validate();
    require(std::isfinite(B), "lcl_current_for_field: non-finite field");
    const double mu = geom.mu_channel * kConst.mu0;
    return 2.0 * kPi * geom.r * 1e-9 * B / mu;
}

WireBudget wire_budget(double resistivity_uohm_cm, double current_density_A_cm2, double width_nm,
                       double height_nm, double length_nm, double chip_power_W) {
    require(positive(resistivity_uohm_cm) && positive(current_density_A_cm2) && positive(width_nm) &&
                positive(height_nm) && positive(length_nm) && positive(chip_power_W),
            "wire_budget: all inputs must be > 0");
    const double area_cm2 = width_nm * height_nm * 1e-14;
    const double rho_ohm_cm = resistivity_uohm_cm * 1e-6;
    WireBudget b{};
    b.current = current_density_A_cm2 * area_cm2;
    b.resistance = rho_ohm_cm * (length_nm * 1e-7) / area_cm2;
    b.per_wire_power = b.current * b.current * b.resistance;
    b.max_wires = std::floor(chip_power_W / b.per_wire_power);
    return b;
}

}  // namespace finq
