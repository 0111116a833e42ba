#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "finq/conductance.hpp"
#include "finq/errors.hpp"
#include "finq/spectral_oracle.hpp"
#include "oracles.hpp"

using namespace finq;
using doctest::Approx;
using C = std::complex<double>;

namespace {

C sigma_flat(double V, double rho, double D, double E) {
    const double w = V * V * rho;
    return {w * std::log((D + E) / (D - E)), -oracle::pi * w};
}

}  // namespace

TEST_CASE("decoupled spectrum") {
    DiscretizedHamiltonian h;
    h.N_k = 20;
    h.E2 = 0.123;
    h.E4 = -0.456;
    const auto ep = diagonalize(h);
    std::vector<double> expect{h.E2, h.E4};
    for (int k = 0; k < h.N_k; ++k)
        for (int c = 0; c < 3; ++c) expect.push_back(h.mode_energy(k));
    std::sort(expect.begin(), expect.end());
    REQUIRE(std::size_t(ep.values.size()) == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(ep.values(Eigen::Index(i)) == Approx(expect[i]).epsilon(1e-13));
    CHECK(completeness_check(ep) < 1e-14);
}

TEST_CASE("completeness identities") {
    for (int nk : {50, 200}) {
        const auto h = DiscretizedHamiltonian::from_widths(1.0, nk, 0.1, -0.1, 0.6, 0.5, 0.7);
        CHECK(completeness_check(diagonalize(h)) <= 1e-10);
    }
}

TEST_CASE("second-order shift of a weakly coupled level") {
    DiscretizedHamiltonian h;
    h.N_k = 40;
    h.E2 = 0.3 + 0.5 * h.spacing() * 0.37;  // between grid points
    h.E4 = 0.9;
    h.V1 = 1e-4;
    const auto ep = diagonalize(h);
    Eigen::Index best = 0;
    ep.nu2().cwiseAbs().maxCoeff(&best);
    double shift = 0.0;
    for (int k = 0; k < h.N_k; ++k) shift += h.V1 * h.V1 / (h.E2 - h.mode_energy(k));
    CHECK(ep.values(best) - h.E2 == Approx(shift).epsilon(1e-4));
}

TEST_CASE("continuum self-energy and determinant") {
    const auto h = DiscretizedHamiltonian::from_widths(1.0, 200, 0.05, -0.07, 0.02, 0.03, 0.04);
    const double rho = h.rho();
    for (double E : {-0.3, 0.0, 0.11}) {
        CHECK(std::abs(flat_band_self_energy(h.V3, rho, h.D, E) - sigma_flat(h.V3, rho, h.D, E)) < 1e-15);
        const C S1 = sigma_flat(h.V1, rho, h.D, E), S3 = sigma_flat(h.V3, rho, h.D, E),
                S5 = sigma_flat(h.V5, rho, h.D, E);
        const C a = E - h.E2 - S1 - S3, d = E - h.E4 - S3 - S5;
        const C det = a * d - S3 * S3;
        const auto g = continuum_green(h, E);
        CHECK(std::abs(g.det_inverse - det) < 1e-14);
        CHECK(std::abs(g.G22 - d / det) < 1e-10 * std::abs(d / det));
    }
    CHECK_THROWS_AS(flat_band_self_energy(0.1, 1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("closed-form denominators equal the Green's-function determinant") {
    const double E = 0.02;
    SUBCASE("middle channel alone") {
        const auto h = DiscretizedHamiltonian::from_widths(1.0, 200, 0.05, -0.07, 0.0, 0.03, 0.0);
        const ChannelDotSystem s = closed_form_system(h, E);
        const auto e = resonance_terms(s);
        const double s33 = s.s[1][1], G3 = s.Gamma3;
        const double D3 = std::pow(e.e2 * e.e5 - s33 * s33, 2) + G3 * G3 * std::pow(e.e2 + e.e5 + 2 * s33, 2);
        CHECK(oracle::rel(D3, std::norm(continuum_green(h, E).det_inverse)) < 1e-8);
    }
    SUBCASE("edge channels alone") {
        const auto h = DiscretizedHamiltonian::from_widths(1.0, 200, 0.05, -0.07, 0.02, 0.0, 0.04);
        const ChannelDotSystem s = closed_form_system(h, E);
        const auto e = resonance_terms(s);
        const double ref = (e.e1 * e.e1 + s.Gamma1 * s.Gamma1) * (e.e6 * e.e6 + s.Gamma5 * s.Gamma5);
        CHECK(oracle::rel(ref, std::norm(continuum_green(h, E).det_inverse)) < 1e-8);
    }
}

TEST_CASE("mirror symmetry of the coefficients") {
    const auto h = DiscretizedHamiltonian::from_widths(1.0, 100, 0.05, 0.05, 0.3, 0.2, 0.3);
    const auto ep = diagonalize(h);
    for (double E : {-0.05, 0.0, 0.07}) {
        const auto sn = summarize(coefficients_from_green(numeric_green(ep, E, 1.25 * h.spacing()), h),
                                  numeric_green(ep, E, 1.25 * h.spacing()));
        CHECK(sn.x1sq == Approx(sn.y3sq).epsilon(1e-8));
        const auto sc = summarize(coefficients_from_green(continuum_green(h, E), h), continuum_green(h, E));
        CHECK(sc.x1sq == Approx(sc.y3sq).epsilon(1e-12));
    }
}

TEST_CASE("coefficient report") {
    const auto h = DiscretizedHamiltonian::from_widths(1.0, 100, 0.1, -0.1, 0.6, 0.5, 0.7);
    const auto ep = diagonalize(h);
    const auto rep = coefficient_check(h, ep, -0.1, 0.1, 5);
    CHECK(rep.names == summary_names());
    CHECK(rep.max_rel_error.size() == rep.names.size());
    CHECK(rep.worst == *std::max_element(rep.max_rel_error.begin(), rep.max_rel_error.end()));
    CHECK(rep.worst < 0.25);
    CHECK_THROWS_AS(coefficient_check(h, ep, -2.0, 0.1, 5), ValidationError);
}

TEST_CASE("level width from the numeric spectrum") {
    const double gamma = 0.05;
    const auto h = DiscretizedHamiltonian::from_widths(1.0, 400, 0.0, 0.0, gamma, 0.0, 0.0);
    // a Lorentzian of half width gamma has full width 2 gamma
    CHECK(level_width_iqr(diagonalize(h)) / (2 * gamma) == Approx(1.0).epsilon(0.1));
}

TEST_CASE("size limits") {
    DiscretizedHamiltonian h;
    h.N_k = 5;
    CHECK_THROWS_AS(h.validate(), ValidationError);
    h.N_k = 2000;
    CHECK_THROWS_AS(h.validate(), ValidationError);
}
