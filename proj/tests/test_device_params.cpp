#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "finq/constants.hpp"
#include "finq/device_params.hpp"
#include "finq/errors.hpp"
#include "oracles.hpp"

using namespace finq;
using doctest::Approx;

namespace {

// SI arithmetic, independent of the library's unit bookkeeping.
constexpr double hbar_SI = 1.054571817e-34;
constexpr double m0_SI = 9.1093837015e-31;
constexpr double e_SI = 1.602176634e-19;
constexpr double eps0_SI = 8.8541878128e-12;

double box_level_eV(double L_nm, double m_ratio, int n1, int n2, int n3) {
    const double L = L_nm * 1e-9;
    const double s = (n1 + 1) * (n1 + 1) + (n2 + 1) * (n2 + 1) + (n3 + 1) * (n3 + 1);
    return oracle::pi * oracle::pi * hbar_SI * hbar_SI * s / (2 * m_ratio * m0_SI * L * L) / e_SI;
}

DeviceGeometry anchor_geometry() {
    DeviceGeometry g;
    g.L = g.W = 10.0;
    g.L_QD = 5.0;
    g.w_d = 1.0;
    g.eps_barrier = 3.9;
    g.r = 20.0;
    return g;
}

}  // namespace

TEST_CASE("reduced density") {
    CHECK(reduced_density({1e15, 1, 0.2}) == Approx(0.01).epsilon(1e-12));
    CHECK(reduced_density({1e18, 1, 0.2}) == Approx(0.1).epsilon(1e-12));
    CHECK(reduced_density({9.3e18, 2, 0.2}) == Approx(0.0441).epsilon(5e-3));
    CHECK_THROWS_AS(reduced_density({-1.0, 1, 0.2}), ValidationError);
    CHECK(!CarrierSpec{1e21, 1, 0.2}.warnings().empty());
    CHECK(CarrierSpec{1e18, 1, 0.2}.warnings().empty());
}

TEST_CASE("fermi energy") {
    CHECK(fermi_energy_from_density(1, 0.01, 0.2) == Approx(0.188e-3).epsilon(1e-2));
    CHECK(fermi_energy({1e20, 1, 0.2}) == Approx(0.405).epsilon(1e-2));
    CHECK(fermi_energy({1e20, 1, 0.5}) == Approx(0.162).epsilon(1e-2));
    CHECK(kConst.a0sq_Ry() * oracle::pi * oracle::pi == Approx(0.376).epsilon(5e-3));
    CHECK(kConst.a0sq_Ry() * 2 * oracle::pi == Approx(0.239).epsilon(5e-3));
    // hbar^2 k^2 / 2m with SI constants
    for (int d : {1, 2}) {
        const double n = d == 1 ? 0.21 : 0.0441;
        const double k = (d == 1 ? oracle::pi * n : std::sqrt(2 * oracle::pi * n)) * 1e9;
        const double ref = hbar_SI * hbar_SI * k * k / (2 * 0.2 * m0_SI) / e_SI;
        CHECK(oracle::rel(fermi_energy_from_density(d, n, 0.2), ref) < 1e-6);
    }
}

TEST_CASE("charging energy") {
    const DeviceGeometry g = anchor_geometry();
    CHECK(charging_energy(g) == Approx(46.4e-3).epsilon(2e-2));
    const double ref = e_SI / (2 * 2 * 3.9 * eps0_SI * 25e-18 / 1e-9);
    CHECK(oracle::rel(charging_energy(g), ref) < 1e-12);
    DeviceGeometry g2 = g;
    g2.w_d = 2.0;
    CHECK(charging_energy(g2) == Approx(2 * charging_energy(g)).epsilon(1e-14));
    g2 = g;
    g2.L_QD = 10.0;
    CHECK(charging_energy(g2) == Approx(charging_energy(g) / 4).epsilon(1e-14));
}

TEST_CASE("quantum dot levels") {
    const DeviceGeometry g = anchor_geometry();
    CHECK(qd_level(g, 0.2, {0, 0, 0}) == Approx(0.2256).epsilon(1e-3));
    CHECK(oracle::rel(qd_level(g, 0.2, {0, 0, 0}), box_level_eV(5.0, 0.2, 0, 0, 0)) < 1e-6);
    CHECK(oracle::rel(qd_level(g, 0.2, {1, 0, 2}), box_level_eV(5.0, 0.2, 1, 0, 2)) < 1e-6);
    CHECK(qd_level(g, 0.2, {0, 0, 0}) / qd_level(g, 0.5, {0, 0, 0}) == Approx(2.5).epsilon(1e-14));
    DeviceGeometry big = g;
    big.L_QD = 10.0;
    CHECK(qd_level(big, 0.2, {0, 0, 0}) == Approx(qd_level(g, 0.2, {0, 0, 0}) / 4).epsilon(1e-14));
    CHECK(charging_energy(big) < charging_energy(g));
}

TEST_CASE("quantum dot level variation") {
    const DeviceGeometry g = anchor_geometry();
    const auto v = qd_level_variation(g, 0.2, {0, 0, 0}, 0.5);
    CHECK(v.published_form == Approx(4.65e-3).epsilon(1e-12));
    CHECK(v.first_order == Approx(0.2 * qd_level(g, 0.2, {0, 0, 0})).epsilon(1e-14));
    CHECK(qd_level_variation(g, 0.2, {0, 0, 0}, 0.0).first_order == 0.0);
    // first order is the small-dL limit of the exact shift
    const auto tiny = qd_level_variation(g, 0.2, {0, 0, 0}, 1e-4);
    CHECK(oracle::rel(tiny.exact, tiny.first_order) < 1e-3);
    const auto tiny2 = qd_level_variation(g, 0.2, {0, 0, 0}, 2e-4);
    CHECK(tiny2.first_order == Approx(2 * tiny.first_order).epsilon(1e-14));
    CHECK_THROWS_AS(qd_level_variation(g, 0.2, {0, 0, 0}, 5.0), ValidationError);
}

TEST_CASE("LCL field and current") {
    const DeviceGeometry g = anchor_geometry();
    CHECK(lcl_current_for_field(g, 1e-3) == Approx(10e-6).epsilon(2e-2));
    CHECK(lcl_field(g, 2.35e-4) == Approx(23.5e-3).epsilon(1e-2));
    CHECK(lcl_field(g, 4.70e-3) == Approx(0.470).epsilon(1e-2));
    for (double B : {1e-4, 0.02, 0.47, 3.0}) CHECK(oracle::rel(lcl_field(g, lcl_current_for_field(g, B)), B) < 1e-12);
    // mu I / (2 pi r) with SI numbers
    CHECK(oracle::rel(lcl_field(g, 1e-5), 10 * 4e-7 * oracle::pi * 1e-5 / (2 * oracle::pi * 20e-9)) < 1e-9);
}

TEST_CASE("wire budget") {
    const auto a = wire_budget(10.0, 1.5e6, 28.0, 56.0, 300.0, 1e-3);
    CHECK(a.current == Approx(1.5e6 * 28e-7 * 56e-7).epsilon(1e-12));
    const auto b = wire_budget(10.0, 3e8, 28.0, 56.0, 300.0, 1e-3);
    CHECK(b.current == Approx(4.704e-3).epsilon(1e-9));
    // I^2 rho l / A in SI
    const double A = 28e-9 * 56e-9;
    CHECK(oracle::rel(b.per_wire_power, b.current * b.current * 10e-8 * 300e-9 / A) < 1e-9);
    const auto c = wire_budget(10.0, 3e8, 28.0, 56.0, 600.0, 1e-3);
    CHECK(c.per_wire_power == Approx(2 * b.per_wire_power).epsilon(1e-14));
    CHECK(std::floor(1e-3 / 1.72e-10) == Approx(5.8e6).epsilon(1e-2));
    CHECK_THROWS_AS(wire_budget(10.0, -1.0, 28.0, 56.0, 300.0, 1e-3), ValidationError);
}

TEST_CASE("geometry validation and warnings") {
    DeviceGeometry g = anchor_geometry();
    CHECK(g.warnings().empty());
    g.L = 40.0;
    CHECK(!g.warnings().empty());
    g.w_d = 0.0;
    CHECK_THROWS_AS(g.validate(), ValidationError);
}
