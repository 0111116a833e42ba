// Acceptance run: one PASS/FAIL line per criterion.
//   finq_acceptance               all criteria
//   finq_acceptance --criterion 4 one criterion
// Exit status is nonzero when any selected criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "finq/annealer.hpp"
#include "finq/conductance.hpp"
#include "finq/constants.hpp"
#include "finq/crosstalk.hpp"
#include "finq/device_params.hpp"
#include "finq/errors.hpp"
#include "finq/noise_fidelity.hpp"
#include "finq/recipes.hpp"
#include "finq/rkky_kondo.hpp"
#include "finq/spectral_oracle.hpp"
#include "oracles.hpp"

using namespace finq;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    std::string failures;

    // Records one sub-check; failed ones are appended to `failures`.
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures += " [failed: " + what + "]";
        }
    }
    void within(double got, double want, double rel, const std::string& what) {
        const bool ok = std::abs(got - want) <= rel * std::abs(want);
        if (!ok) {
            std::ostringstream o;
            o << " [failed: " << what << " = " << got << ", want " << want << " +-" << rel * 100 << "%]";
            pass = false;
            failures += o.str();
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// 1: device and field anchors
void c1(Verdict& v) {
    const auto t0 = Clock::now();
    DeviceGeometry g;
    g.L_QD = 5.0, g.w_d = 1.0, g.eps_barrier = 3.9, g.r = 20.0, g.mu_channel = 10.0;
    v.within(charging_energy(g), 46.4e-3, 0.02, "U");
    v.within(fermi_energy(CarrierSpec{1e15, 1, 0.2}), 0.188e-3, 0.01, "E_F1(1e15)");
    v.within(fermi_energy(CarrierSpec{1e20, 1, 0.2}), 0.405, 0.01, "E_F1(1e20)");
    v.within(lcl_field(g, 10e-6), 1e-3, 0.02, "B(10 uA)");
    v.within(lcl_current_for_field(g, 1e-3), 10e-6, 0.02, "I(1 mT)");

    auto chain = [&](double I, double B, double E, double T, const std::string& tag) {
        const double b = lcl_field(g, I);
        v.within(b, B, 0.01, tag + " field");
        const double e = zeeman_splitting(b);
        v.within(e, E, 0.01, tag + " Zeeman");
        v.within(energy_to_temperature(e), T, 0.01, tag + " temperature");
    };
    chain(2.35e-4, 23.5e-3, 2.72e-6, 31.6e-3, "2.35e-4 A");
    chain(4.70e-3, 470e-3, 54.5e-6, 632e-3, "4.70e-3 A");
    const double t = seconds_since(t0);
    v.expect(t < 1.0, "runtime");
    v.detail << "U = " << charging_energy(g) * 1e3 << " meV, B(4.7 mA) = " << lcl_field(g, 4.7e-3) * 1e3 << " mT";
}

// 2: noise coefficients
void c2(Verdict& v) {
    v.within(shot_psd_coefficient(0.5), 6.21e-24, 0.01, "shot PSD coefficient");
    v.within(shot_dg_coefficient(1e12), 0.0909, 0.01, "shot fluctuation coefficient");
    v.within(thermal_dg_coefficient(0.1, 1e12), 3.78e-4, 0.01, "thermal fluctuation coefficient");
    v.detail << "shot " << shot_psd_coefficient(0.5) << ", dg " << shot_dg_coefficient(1e12) << ", thermal "
             << thermal_dg_coefficient(0.1, 1e12);
}

ChannelDotSystem random_system(std::mt19937_64& g) {
    ChannelDotSystem s;
    s.E_kF = oracle::uniform(g, 0.5, 1.5);
    s.E_SL = oracle::uniform(g, 0.3, 1.7);
    s.E_SR = oracle::uniform(g, 0.3, 1.7);
    s.Gamma1 = oracle::uniform(g, 1e-3, 0.1);
    s.Gamma3 = oracle::uniform(g, 1e-3, 0.1);
    s.Gamma5 = oracle::uniform(g, 1e-3, 0.1);
    s.s = fermi_level_table(oracle::uniform(g, -0.05, 0.05), oracle::uniform(g, -0.05, 0.05),
                            oracle::uniform(g, -0.05, 0.05));
    return s;
}

// 3: conductance consistency
void c3(Verdict& v) {
    const auto t0 = Clock::now();
    auto g = oracle::rng(301);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const ChannelDotSystem s = random_system(g);
        worst = std::max(worst, oracle::rel(middle_channel_conductance(s), conductance_terms(s).direct[1]));
    }
    v.expect(worst <= 1e-10, "middle term vs reduced form");

    // s33 and Gamma3 no larger than |delta|; see the ledger
    double law = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double delta = oracle::uniform(g, 1e-3, 0.1) * (i % 2 ? 1 : -1);
        const double ratio = oracle::uniform(g, 0.0, 1e-3);
        const double s33 = oracle::uniform(g, -0.5, 0.5) * std::abs(delta);
        const double G3 = oracle::uniform(g, 0.01, 1.0) * std::abs(delta);
        const double k_d = oracle::uniform(g, 0.5, 3.0);
        const double gg = middle_channel_reduced(ratio * delta, delta, s33, G3, k_d);
        law = std::max(law, std::abs(gg * std::pow(delta, 4) / (4.0 * k_d) - 1.0));
    }
    v.expect(law <= 5e-3, "small Delta/delta law");

    bool nonneg = true;
    for (int i = 0; i < 5000; ++i) {
        const auto t = conductance_terms(random_system(g));
        nonneg = nonneg && t.total >= 0.0;
        for (double x : t.direct) nonneg = nonneg && x >= 0.0;
        for (double x : t.cross) nonneg = nonneg && x >= 0.0;
    }
    v.expect(nonneg, "non-negativity");

    const double maxima = run_recipe("fig4a").find("anti-diagonal local maxima").computed;
    v.expect(maxima == 2.0, "two anti-diagonal maxima");
    const double t = seconds_since(t0);
    v.expect(t < 10.0, "runtime");
    v.detail << "middle-term rel err " << worst << ", law dev " << law << ", maxima " << maxima << ", " << t << " s";
}

// 4: spectral oracle against the closed forms
void c4(Verdict& v) {
    const auto t0 = Clock::now();
    double err[2] = {0, 0};
    int k = 0;
    for (int nk : {200, 400}) {
        const auto h = DiscretizedHamiltonian::from_widths(1.0, nk, 0.1, -0.1, 0.6, 0.5, 0.7);
        const auto ep = diagonalize(h);
        const double comp = completeness_check(ep);
        v.expect(comp <= 1e-10, "completeness at N_k = " + std::to_string(nk));
        err[k++] = coefficient_check(h, ep, -0.1, 0.1, 5, 1.25).worst;
    }
    const double ratio = err[1] / err[0];
    // halving read as a ratio of 0.5 with 10% slack; the ledger records why
    v.expect(ratio <= 0.55, "error halves from N_k = 200 to 400");
    v.expect(err[1] < 0.05, "error below 5% at N_k = 400");
    const double t = seconds_since(t0);
    v.expect(t < 120.0, "runtime");
    v.detail << "worst rel err " << err[0] * 100 << "% -> " << err[1] * 100 << "% (ratio " << ratio << "), " << t
             << " s";
}

CouplingInput anchor(int d) {
    CouplingInput in;
    in.Gamma = 0.2e-3;
    in.U = 46.4e-3;
    in.dimensionality = d;
    in.n_ed = d == 1 ? 0.21 : 0.21 * 0.21;
    in.L = in.W = d == 1 ? 28.0 : 14.0;
    return in;
}

// 5: RKKY anchors
void c5(Verdict& v) {
    const double J1 = std::abs(j_rkky(anchor(1))), J2 = std::abs(j_rkky(anchor(2)));
    v.expect(J1 >= 0.5 * 0.01e-3 && J1 <= 2.0 * 0.01e-3, "|J1| within factor 2 of 0.01 meV");
    v.expect(J2 >= 0.5 * 0.2e-6 && J2 <= 2.0 * 0.2e-6, "|J2| within factor 2 of 0.2 ueV");
    double tau[2];
    for (int d : {1, 2}) {
        CouplingInput in = anchor(d);
        in.Gamma = 0.15e-3;
        tau[d - 1] = operation_budget(in).tau_coh;
        v.expect(tau[d - 1] >= 1e-9 / 3 && tau[d - 1] <= 1e-8 * 3,
                 std::string("coherence time in band, ") + (d == 1 ? "1D" : "2D"));
    }
    const auto a = run_recipe("fig5a");
    v.expect(a.find("grid points with J1 <= TK1").computed == 0.0, "J1 > TK1 on the grid");
    const auto b = run_recipe("fig5b");
    v.expect(b.find("J2 > TK2 region narrows as L grows").agrees, "2D crossing narrows with L");
    v.detail << "|J1| = " << J1 * 1e3 << " meV, |J2| = " << J2 * 1e6 << " ueV, tau_coh 1D " << tau[0] << " s, 2D "
             << tau[1] << " s";
}

// 6: algebraic identities on random draws
void c6(Verdict& v) {
    const auto t0 = Clock::now();
    auto g = oracle::rng(601);
    double e_ratio = 0, e_sd = 0, e_fid = 0;
    for (int i = 0; i < 1000; ++i) {
        CouplingInput in;
        in.dimensionality = g() % 2 ? 1 : 2;
        in.Gamma = oracle::uniform(g, 0.01e-3, 0.5e-3);
        in.U = oracle::uniform(g, 20e-3, 80e-3);
        in.n_ed = in.dimensionality == 1 ? oracle::uniform(g, 0.05, 0.4) : oracle::uniform(g, 0.003, 0.1);
        in.L = in.W = oracle::uniform(g, 5.0, 30.0);
        in.T = oracle::uniform(g, 0.02, 1.0);
        in.m_eff_ratio = oracle::uniform(g, 0.1, 0.6);
        const double closed = ratio_closed_form(in.dimensionality, in.n_ed, in.W, in.T, in.m_eff_ratio);
        e_ratio = std::max(e_ratio, oracle::rel(operation_budget(in).ratio, std::abs(closed)));
        e_sd = std::max(e_sd, oracle::rel(j_sd(in) * kPi * rho_F(in), z_factor(in)));
        const double gm = oracle::uniform(g, 0.0, 10.0), gr = oracle::uniform(g, 0.0, 10.0);
        const double s = oracle::uniform(g, 0.01, 3.0);
        e_fid = std::max(e_fid, std::abs(measurement_fidelity(gm, gr, s) - measurement_fidelity_quadrature(gm, gr, s, s)));
    }
    v.expect(e_ratio <= 1e-12, "operations ratio forms");
    v.expect(e_sd <= 1e-12, "j_sd pi rho_F = z");
    v.expect(e_fid <= 1e-8, "fidelity quadrature");
    const double t = seconds_since(t0);
    v.expect(t < 5.0, "runtime");
    v.detail << "ratio " << e_ratio << ", j_sd " << e_sd << ", fidelity " << e_fid << ", " << t << " s";
}

// 7: crosstalk cancellation
void c7(Verdict& v) {
    double e_closed = 0;
    for (double p : {0.1, 0.2, 0.3, 0.45, 0.6}) {
        LCLArray arr;
        arr.N = 5, arr.n = 3, arr.p = p, arr.I_n = 1.0;
        const auto I = solve_currents(arr).I;
        const double p2 = p * p;
        const double want[6] = {p * p / (1 - p2) * p * (1 - p2) / (1 - 2 * p2), p / (1 - p2) * p * (1 - p2) / (1 - 2 * p2),
                                p * (1 - p2) / (1 - 2 * p2), 1.0, p / (1 - p2), p * p / (1 - p2)};
        for (int i = 0; i < 6; ++i) e_closed = std::max(e_closed, oracle::rel(I[std::size_t(i)], want[i]));
        const double h3 = target_field(arr, I) * 2 * oracle::pi * arr.r * 1e-9;
        const double bracket = 1 - p2 * (1 - p2) / (1 - 2 * p2) - p2 / (1 - p2);
        e_closed = std::max(e_closed, oracle::rel(h3, bracket));
    }
    v.expect(e_closed <= 1e-12, "N = 5 closed forms");

    double resid = 0;
    for (int N = 1; N <= 10; ++N)
        for (int n = 0; n <= N; ++n)
            for (double p : {0.1, 0.25, 0.4, 0.55, 0.65}) {
                LCLArray arr;
                arr.N = N, arr.n = n, arr.p = p;
                std::vector<double> I;
                try {
                    I = solve_currents(arr).I;
                } catch (const DomainError&) {
                    continue;
                }
                const auto h = qubit_fields(arr, I);
                for (int i = 0; i <= N; ++i)
                    if (i != n) resid = std::max(resid, std::abs(h[std::size_t(i)]) / std::abs(h[std::size_t(n)]));
            }
    v.expect(resid <= 1e-12, "residual fields");

    bool exact = true;
    const auto list = forbidden_geometries(10);
    exact = list.size() == 10;
    for (std::size_t k = 0; exact && k < list.size(); ++k)
        exact = list[k].m == int(k + 1) && list[k].L_over_r == std::sqrt(double(k));
    v.expect(exact, "forbidden geometry list");
    v.detail << "closed-form rel err " << e_closed << ", worst residual " << resid;
}

// 8: annealer
void c8(Verdict& v) {
    SpinNetwork two(2);
    const double J = 1e-5;
    two.set_coupling(0, 1, J);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_problem_hamiltonian(two));
    const auto w = es.eigenvalues();
    double e_spec = std::abs(w(0) + 0.75 * J);
    for (int k = 1; k < 4; ++k) e_spec = std::max(e_spec, std::abs(w(k) - 0.25 * J));
    e_spec /= J;
    v.expect(e_spec <= 1e-12, "two-spin spectrum");

    const auto t0 = Clock::now();
    const auto r = evolve(annealing_chain(4, J, 0.6, 3.0, 100.0), {});
    const double t = seconds_since(t0);
    v.expect(r.norm_drift <= 1e-9, "norm drift");
    v.expect(r.fidelity >= 0.99, "final fidelity");
    v.expect(t < 30.0, "runtime");
    v.detail << "spectrum rel err " << e_spec << ", fidelity " << r.fidelity << ", drift " << r.norm_drift << ", "
             << t << " s";
}

// 9: published-vs-computed rows are printed for the figures that do not reproduce
void c9(Verdict& v) {
    struct Need {
        const char* recipe;
        const char* quantity;  // row that must carry a published value
        const char* property;  // property check that must agree, or null
    };
    const Need needs[] = {
        {"fig4b", "|difference| at the operating point and B_check", "|difference| at the smallest nonzero B"},
        {"fig4d", nullptr, "required B falls as the levels approach E_F"},
        {"fig5g", "sqrt(SWAP) time, 1D, L = 28 nm", nullptr},
        {"fig5g", "sqrt(SWAP) time, 2D, L = 14 nm", nullptr},
        {"discussion", "per-wire power I^2 R", nullptr},
    };
    int rows = 0;
    for (const auto& n : needs) {
        const RecipeResult r = run_recipe(n.recipe);
        const std::string text = comparison_text(r);
        if (n.quantity) {
            const Comparison& c = r.find(n.quantity);
            const bool shown = std::isfinite(c.published) && std::isfinite(c.computed) &&
                               text.find(n.quantity) != std::string::npos;
            v.expect(shown, std::string(n.recipe) + ": " + n.quantity + " printed with both values");
            rows += shown;
        }
        if (n.property) v.expect(r.find(n.property).agrees, std::string(n.recipe) + ": " + n.property);
    }
    const RecipeResult d = run_recipe("discussion");
    const Comparison& p = d.find("per-wire power I^2 R");
    v.expect(!p.agrees && !p.note.empty(), "wire power discrepancy carries a note");
    v.expect(comparison_text(d).find("1.72e-10") != std::string::npos, "quoted wire power printed");
    v.detail << rows << " published/computed rows checked, wire power " << p.computed << " W vs " << p.published
             << " W";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    int only = 0;
    app.add_option("--criterion", only, "run one criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<void(Verdict&)>> all{c1, c2, c3, c4, c5, c6, c7, c8, c9};
    bool ok = true;
    for (int k = 1; k <= 9; ++k) {
        if (only && k != only) continue;
        Verdict v;
        try {
            all[std::size_t(k - 1)](v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.failures += std::string(" [exception: ") + e.what() + "]";
        }
        std::printf("criterion %d: %s  %s%s\n", k, v.pass ? "PASS" : "FAIL", v.detail.str().c_str(), v.failures.c_str());
        std::fflush(stdout);
        ok = ok && v.pass;
    }
    return ok ? 0 : 1;
}
