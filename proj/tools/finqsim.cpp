#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finq/annealer.hpp"
#include "finq/conductance.hpp"
#include "finq/constants.hpp"
#include "finq/crosstalk.hpp"
#include "finq/device_params.hpp"
#include "finq/errors.hpp"
#include "finq/io.hpp"
#include "finq/noise_fidelity.hpp"
#include "finq/recipes.hpp"
#include "finq/rkky_kondo.hpp"
#include "finq/special_fns.hpp"
#include "finq/spectral_oracle.hpp"

using namespace finq;

namespace {

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    bool svg = false;
};

void add_common(CLI::App* sub, Common& c, bool with_svg) {
    sub->add_option("--config", c.config, "flat key = value file");
    sub->add_option("--set", c.sets, "key=value override, repeatable");
    sub->add_option("--out", c.out, "output path prefix; CSV goes to stdout when absent");
    if (with_svg) sub->add_flag("--svg", c.svg, "also write <out>.svg");
}

Config make_config(const Common& c) {
    Config cfg = c.config.empty() ? Config{} : Config::load(c.config);
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        require(eq != std::string::npos && eq > 0, "--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

// Command-line flags win over config entries of the same name.
template <class T>
void flag_into(Config& cfg, const std::string& key, const std::optional<T>& v) {
    if (!v) return;
    if constexpr (std::is_same_v<T, std::string>)
        cfg.set(key, *v);
    else
        cfg.set(key, format_double(double(*v)));
}

void emit_csv(const Common& c, const CsvTable& t) {
    if (c.out.empty())
        write_csv(t, std::cout);
    else
        write_text_file(c.out + ".csv", to_csv(t));
}

void emit_svg(const Common& c, const std::string& svg) {
    if (!c.svg) return;
    require(!c.out.empty(), "--svg needs --out");
    write_text_file(c.out + ".svg", svg);
}

// ---------------------------------------------------------------------------

struct ParamsOpts {
    Common c;
    bool constants = false;
    bool csv = false;
};

int run_params(const ParamsOpts& o) {
    if (o.constants) {
        CsvTable t{{"name", "value"}, {}};
        const auto& k = kConst;
        for (auto [name, v] : std::vector<std::pair<std::string, double>>{{"hbar_eV_s", k.hbar},
                                                                         {"mu_B_eV_per_T", k.mu_B},
                                                                         {"k_B_eV_per_K", k.k_B},
                                                                         {"e_charge_C", k.e_charge},
                                                                         {"R_K_ohm", k.R_K},
                                                                         {"a0_nm", k.a0},
                                                                         {"Ry_eV", k.Ry},
                                                                         {"mu0_T_m_per_A", k.mu0},
                                                                         {"eps0_F_per_m", k.eps0},
                                                                         {"g_factor", k.g_factor},
                                                                         {"a0sq_Ry_eV_nm2", k.a0sq_Ry()}})
            t.add({name, v});
        emit_csv(o.c, t);
        return 0;
    }
    const Config cfg = make_config(o.c);
    DeviceGeometry g;
    g.L = cfg.number("L", g.L);
    g.W = cfg.number("W", g.W);
    g.HFIN = cfg.number("HFIN", g.HFIN);
    g.w_d = cfg.number("w_d", g.w_d);
    g.L_QD = cfg.number("L_QD", g.L / 2.0);
    g.r = cfg.number("r", g.r);
    g.eps_barrier = cfg.number("eps_barrier", g.eps_barrier);
    g.mu_channel = cfg.number("mu_channel", g.mu_channel);
    CarrierSpec s;
    s.n3d = cfg.number("n3d", s.n3d);
    s.dimensionality = cfg.integer("dimensionality", s.dimensionality);
    s.m_eff_ratio = cfg.number("m_eff_ratio", s.m_eff_ratio);
    const double I = cfg.number("I_lcl", 1e-5);
    const double dL = cfg.number("dL", 0.1 * g.L_QD);
    cfg.reject_unknown();
    g.validate();
    s.validate();
    for (const auto& w : g.warnings()) std::cerr << "warning: " << w << "\n";
    for (const auto& w : s.warnings()) std::cerr << "warning: " << w << "\n";

    const double n = reduced_density(s);
    const double EF = fermi_energy(s);
    const double U = charging_energy(g);
    const double e0 = qd_level(g, s.m_eff_ratio, {0, 0, 0});
    const auto var = qd_level_variation(g, s.m_eff_ratio, {0, 0, 0}, dL);
    const double B = lcl_field(g, I);
    std::vector<std::tuple<std::string, double, std::string>> rows{
        {"n_ed", n, s.dimensionality == 1 ? "nm^-1" : "nm^-2"},
        {"k_F", fermi_wavenumber(s.dimensionality, n), "nm^-1"},
        {"E_F", EF, "eV"},
        {"E_F_temperature", energy_to_temperature(EF), "K"},
        {"capacitance", capacitance(g), "F"},
        {"charging_energy_U", U, "eV"},
        {"qd_level_000", e0, "eV"},
        {"qd_level_100", qd_level(g, s.m_eff_ratio, {1, 0, 0}), "eV"},
        {"qd_shift_first_order", var.first_order, "eV"},
        {"qd_shift_exact", var.exact, "eV"},
        {"lcl_current", I, "A"},
        {"lcl_field", B, "T"},
        {"lcl_zeeman", zeeman_splitting(B), "eV"},
        {"lcl_zeeman_temperature", energy_to_temperature(zeeman_splitting(B)), "K"},
        {"larmor_frequency", larmor_frequency(B), "Hz"},
    };
    CsvTable t{{"name", "value", "unit"}, {}};
    for (const auto& [name, v, unit] : rows) t.add({name, v, unit});
    if (o.csv || !o.c.out.empty()) emit_csv(o.c, t);
    if (!o.csv) {
        for (const auto& [name, v, unit] : rows) std::printf("%-24s %14.6g  %s\n", name.c_str(), v, unit.c_str());
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct FnOpts {
    Common c;
    std::string name;
    double from = 0.0, to = 10.0;
    int points = 101;
};

int run_fn(const FnOpts& o) {
    static const std::map<std::string, std::function<double(double)>> fns{
        {"J0", [](double x) { return bessel_j(0, x); }},     {"J1", [](double x) { return bessel_j(1, x); }},
        {"Y0", [](double x) { return bessel_y(0, x); }},     {"Y1", [](double x) { return bessel_y(1, x); }},
        {"N0", [](double x) { return bessel_y(0, x); }},     {"N1", [](double x) { return bessel_y(1, x); }},
        {"si", [](double x) { return sine_integral_si(x); }}, {"F1", [](double x) { return F_prime(1, x); }},
        {"F2", [](double x) { return F_prime(2, x); }},       {"G1", [](double x) { return G_prime(1, x); }},
        {"G2", [](double x) { return G_prime(2, x); }},
    };
    auto it = fns.find(o.name);
    if (it == fns.end()) {
        std::string known;
        for (const auto& [k, v] : fns) known += " " + k;
        throw ValidationError("fn: unknown function '" + o.name + "'; known:" + known);
    }
    require(o.points >= 1, "fn: --points must be >= 1");
    make_config(o.c).reject_unknown();
    CsvTable t{{"x", "value"}, {}};
    Series s{o.name, {}, {}};
    for (double x : linspace(o.from, o.to, std::size_t(o.points))) {
        const double v = it->second(x);
        t.add({x, v});
        s.x.push_back(x), s.y.push_back(v);
    }
    emit_csv(o.c, t);
    if (o.c.svg) emit_svg(o.c, line_plot_svg({s}, {o.name, "x", o.name + "(x)", false}));
    return 0;
}

// ---------------------------------------------------------------------------

struct ConductanceOpts {
    Common c;
    std::optional<std::string> sl, sr;
};

int run_conductance(const ConductanceOpts& o) {
    const Config cfg = make_config(o.c);
    ChannelDotSystem sys;
    sys.E_kF = cfg.number("E_kF", sys.E_kF);
    sys.E_SL = cfg.number("E_SL", 0.9);
    sys.E_SR = cfg.number("E_SR", 0.95);
    sys.Gamma1 = cfg.number("gamma1", sys.Gamma1);
    sys.Gamma3 = cfg.number("gamma3", sys.Gamma3);
    sys.Gamma5 = cfg.number("gamma5", sys.Gamma5);
    const int ch[3] = {1, 3, 5};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            sys.s[i][j] = cfg.number("s" + std::to_string(ch[i]) + std::to_string(ch[j]), 0.0);
    sys.rho_F = cfg.number("rho_F", sys.rho_F);
    sys.dimensionality = cfg.integer("dimensionality", sys.dimensionality);
    sys.n_e2 = cfg.number("n_e2", sys.n_e2);
    sys.W = cfg.number("W", sys.W);
    cfg.reject_unknown();
    sys.validate();

    const auto sl = o.sl ? parse_axis(*o.sl, "--sl") : std::vector<double>{sys.E_SL};
    const auto sr = o.sr ? parse_axis(*o.sr, "--sr") : std::vector<double>{sys.E_SR};
    const Matrix m = conductance_map(sys, sl, sr);
    CsvTable t{{"E_SL", "E_SR", "g_over_2e2h"}, {}};
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t.add({sl[i], sr[j], m(i, j)});
    emit_csv(o.c, t);
    if (o.c.svg)
        emit_svg(o.c, heatmap_svg(m, sr, sl, {"Conductance", "E_SR", "E_SL", "g [2e^2/h k_d]", ColorScale::log_viridis}));

    if (sl.size() == 1 && sr.size() == 1 && !o.c.out.empty()) {
        ChannelDotSystem one = sys;
        one.E_SL = sl[0], one.E_SR = sr[0];
        const auto e = resonance_terms(one);
        const auto terms = conductance_terms(one);
        const auto mv = middle_variables(one);
        std::printf("e1..e6      %.6g %.6g %.6g %.6g %.6g %.6g\n", e.e1, e.e2, e.e3, e.e4, e.e5, e.e6);
        std::printf("direct      %.6g %.6g %.6g\n", terms.direct[0], terms.direct[1], terms.direct[2]);
        std::printf("cross       %.6g %.6g %.6g\n", terms.cross[0], terms.cross[1], terms.cross[2]);
        std::printf("Delta delta %.6g %.6g\n", mv.Delta, mv.delta);
        std::printf("g           %.10g (2e^2/h)  R_K' = %.4g kOhm\n", terms.total, 0.5e-3 * kConst.R_K * one.k_d());
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct RkkyOpts {
    Common c;
    std::optional<int> d;
    std::optional<std::string> gamma_sweep, L;
    std::optional<double> n, U, T, m, Em, HFIN;
    bool range_function = false;
};

int run_rkky(const RkkyOpts& o) {
    Config cfg = make_config(o.c);
    flag_into(cfg, "dimensionality", o.d);
    flag_into(cfg, "n_ed", o.n);
    flag_into(cfg, "U_meV", o.U);
    flag_into(cfg, "T", o.T);
    flag_into(cfg, "m_eff_ratio", o.m);
    flag_into(cfg, "E_m_meV", o.Em);
    flag_into(cfg, "HFIN", o.HFIN);
    flag_into(cfg, "gamma_sweep_meV", o.gamma_sweep);
    flag_into(cfg, "L", o.L);

    CouplingInput base;
    base.dimensionality = cfg.integer("dimensionality", 1);
    base.n_ed = cfg.number("n_ed", base.dimensionality == 1 ? 0.21 : 0.0441);
    base.U = cfg.number("U_meV", 46.4) * 1e-3;
    base.T = cfg.number("T", base.T);
    base.m_eff_ratio = cfg.number("m_eff_ratio", base.m_eff_ratio);
    base.E_m = cfg.number("E_m_meV", 0.0) * 1e-3;
    base.HFIN = cfg.number("HFIN", base.HFIN);
    const auto gammas = parse_axis(cfg.text("gamma_sweep_meV", "0.01:0.5:100"), "gamma sweep");
    const auto Ls = parse_axis(cfg.text("L", "10,20,28"), "L list");
    cfg.reject_unknown();

    CsvTable t{{"Gamma_meV", "L_nm", "J_meV", "TK_meV", "tau_coh_s", "tau_op_s", "ratio"}, {}};
    std::vector<Series> series;
    for (double L : Ls) {
        Series sj{"|J|, L = " + format_double(L) + " nm", {}, {}};
        for (double g : gammas) {
            CouplingInput in = base;
            in.Gamma = g * 1e-3;
            in.L = in.W = L;
            const auto ob = operation_budget(in, o.range_function);
            t.add({g, L, ob.J * 1e3, kondo_temperature(in) * 1e3, ob.tau_coh, ob.tau_op, ob.ratio});
            sj.x.push_back(g), sj.y.push_back(std::abs(ob.J) * 1e3);
        }
        series.push_back(std::move(sj));
    }
    emit_csv(o.c, t);
    if (o.c.svg) emit_svg(o.c, line_plot_svg(series, {"RKKY coupling", "Gamma [meV]", "|J| [meV]", true}));
    return 0;
}

// ---------------------------------------------------------------------------

struct NoiseOpts {
    Common c;
    std::optional<double> vd, T, df, g_ref;
    std::optional<std::string> g_sweep;
};

int run_noise(const NoiseOpts& o) {
    Config cfg = make_config(o.c);
    flag_into(cfg, "V_D", o.vd);
    flag_into(cfg, "T", o.T);
    flag_into(cfg, "df", o.df);
    flag_into(cfg, "g_ref", o.g_ref);
    flag_into(cfg, "g_sweep", o.g_sweep);
    NoiseEnv env;
    env.V_D = cfg.number("V_D", env.V_D);
    env.T = cfg.number("T", env.T);
    env.df = cfg.number("df", env.df);
    const auto gp = parse_axis(cfg.text("g_sweep", "0.1:100:100"), "g' sweep");
    const double ref = cfg.number("g_ref", gp.front());
    cfg.reject_unknown();

    CsvTable t{{"g_prime", "dg_shot", "dg_thermal", "fidelity_vs_ref"}, {}};
    std::vector<Series> series{{"shot", {}, {}}, {"thermal", {}, {}}};
    for (double g : gp) {
        require(g >= 0.0, "noise: g' must be >= 0");
        NoiseEnv e = env;
        e.g = from_g_prime(g);
        const auto shot = shot_noise(e), th = thermal_noise(e);
        e.g = from_g_prime(std::max(g, ref));
        const double sigma = shot_noise(e).dg_prime;
        const double F = sigma > 0.0 ? measurement_fidelity(g, ref, sigma) : (g == ref ? 0.0 : 1.0);
        t.add({g, shot.dg_prime, th.dg_prime, F});
        series[0].x.push_back(g), series[0].y.push_back(shot.dg_prime);
        series[1].x.push_back(g), series[1].y.push_back(th.dg_prime);
    }
    emit_csv(o.c, t);
    if (o.c.svg) emit_svg(o.c, line_plot_svg(series, {"Conductance fluctuation", "g' = R_K g", "dg'", false}));
    return 0;
}

// ---------------------------------------------------------------------------

struct CrosstalkOpts {
    Common c;
    std::optional<int> N, n;
    std::optional<double> p, L, r, In, mu;
};

int run_crosstalk(const CrosstalkOpts& o) {
    Config cfg = make_config(o.c);
    flag_into(cfg, "N", o.N);
    flag_into(cfg, "n", o.n);
    flag_into(cfg, "p", o.p);
    flag_into(cfg, "L", o.L);
    flag_into(cfg, "r", o.r);
    flag_into(cfg, "I_n", o.In);
    flag_into(cfg, "mu_channel", o.mu);
    LCLArray arr;
    arr.N = cfg.integer("N", arr.N);
    arr.n = cfg.integer("n", arr.n);
    arr.r = cfg.number("r", arr.r);
    arr.I_n = cfg.number("I_n", arr.I_n);
    arr.mu_channel = cfg.number("mu_channel", arr.mu_channel);
    if (cfg.has("L")) {
        require(!cfg.has("p"), "crosstalk: give either p or L, not both");
        arr = LCLArray::from_geometry(arr.N, arr.r, cfg.number("L", 0.0), arr.n, arr.I_n);
        arr.mu_channel = cfg.number("mu_channel", 10.0);
    } else {
        arr.p = cfg.number("p", arr.p);
    }
    const int n_max = cfg.integer("n_max", 10);
    cfg.reject_unknown();
    arr.validate();

    const auto sol = solve_currents(arr);
    const auto h = qubit_fields(arr, sol.I);
    const auto h_all = qubit_fields_all_neighbours(arr, sol.I);
    CsvTable t{{"index", "current_A", "field_A_per_m", "field_all_lines_A_per_m"}, {}};
    for (std::size_t i = 0; i < sol.I.size(); ++i) t.add({(long long)i, sol.I[i], h[i], h_all[i]});
    emit_csv(o.c, t);
    if (!o.c.out.empty()) {
        std::printf("p = %.6g, L = %.6g nm, condition estimate %.3g\n", arr.p, arr.pitch(), sol.condition_estimate);
        std::printf("target field h_%d = %.10g A/m, B = %.6g T\n", arr.n, target_field(arr, sol.I),
                    target_flux_density(arr, sol.I));
        if (arr.N == 5 && arr.n == 3) std::printf("printed bracket = %.12g\n", five_line_bracket(arr.p));
        for (const auto& f : singularity_check(arr, n_max))
            std::printf("forbidden: m = %d (L = sqrt(%d) r)\n", f.m, f.m - 1);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct AnnealOpts {
    Common c;
    std::string input;
    std::optional<double> dt;
    std::size_t record_every = 10;
    bool ising = false;
    int demo_N = 4;
    double demo_time = 100.0;
};

int run_anneal(const AnnealOpts& o) {
    const Config cfg = make_config(o.c);
    cfg.reject_unknown();
    SpinNetwork net(1);
    if (o.input.empty()) {
        net = annealing_chain(o.demo_N, 1e-5, 0.6, 3.0, o.demo_time);
    } else {
        std::ifstream f(o.input);
        if (!f) throw ValidationError("cannot read network file '" + o.input + "'");
        net = parse_network(f);
    }
    net.ising_only = o.ising;
    if (o.dt) net.dt = *o.dt;
    EvolveOptions opt;
    opt.record_every = std::max<std::size_t>(1, o.record_every);
    const auto res = evolve(net, opt);
    CsvTable t{{"t", "energy", "fidelity"}, {}};
    for (std::size_t i = 0; i < res.times.size(); ++i) t.add({res.times[i], res.energies[i], res.fidelities[i]});
    emit_csv(o.c, t);
    if (!o.c.out.empty()) {
        std::printf("N = %d, steps = %zu, total time = %.6g s\n", net.N, res.steps, net.total_time());
        std::printf("initial fidelity %.6f, final fidelity %.6f, norm drift %.3g\n", res.initial_fidelity, res.fidelity,
                    res.norm_drift);
    }
    if (o.c.svg) {
        Series s{"fidelity", res.times, res.fidelities};
        emit_svg(o.c, line_plot_svg({s}, {"Annealing", "t [s]", "ground-space weight", false}));
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct OracleOpts {
    Common c;
    std::optional<std::string> nk;
    std::string report;
};

int run_oracle(const OracleOpts& o) {
    Config cfg = make_config(o.c);
    flag_into(cfg, "nk", o.nk);
    const double D = cfg.number("D", 1.0);
    const double E2 = cfg.number("E2", 0.1), E4 = cfg.number("E4", -0.1);
    const double g1 = cfg.number("gamma1", 0.6), g3 = cfg.number("gamma3", 0.5), g5 = cfg.number("gamma5", 0.7);
    const auto window = parse_axis(cfg.text("window", "-0.1,0.1"), "window");
    const int energies = cfg.integer("energies", 5);
    const double eta = cfg.number("eta_over_spacing", 1.25);
    const double width_gamma = cfg.number("width_gamma", 0.05);
    const auto ladder = parse_axis(cfg.text("nk", "400"), "nk");
    cfg.reject_unknown();
    require(window.size() == 2, "oracle: window needs two values lo,hi");

    CsvTable t{{"N_k", "quantity", "value"}, {}};
    for (double nkd : ladder) {
        const int nk = int(nkd);
        const auto h = DiscretizedHamiltonian::from_widths(D, nk, E2, E4, g1, g3, g5);
        const auto ep = diagonalize(h);
        t.add({(long long)nk, std::string("completeness"), completeness_check(ep)});
        const auto rep = coefficient_check(h, ep, window[0], window[1], energies, eta);
        for (std::size_t i = 0; i < rep.names.size(); ++i) t.add({(long long)nk, rep.names[i], rep.max_rel_error[i]});
        t.add({(long long)nk, std::string("worst"), rep.worst});
        t.add({(long long)nk, std::string("closed_form_g_error"), rep.closed_form_g_error});
        const auto one = DiscretizedHamiltonian::from_widths(D, nk, 0.0, 0.0, width_gamma, 0.0, 0.0);
        t.add({(long long)nk, std::string("level_width_over_2gamma"), level_width_iqr(diagonalize(one)) / (2 * width_gamma)});
    }
    Common out = o.c;
    if (!o.report.empty()) {
        write_text_file(o.report, to_csv(t));
    } else {
        emit_csv(out, t);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ReproduceOpts {
    Common c;
    std::string name;
    bool list = false;
    std::string format = "csv+svg";
};

int run_reproduce(const ReproduceOpts& o) {
    if (o.list || o.name.empty()) {
        for (const auto& n : recipe_names()) std::printf("%-11s %s\n", n.c_str(), recipe_summary(n).c_str());
        return o.list ? 0 : (throw ValidationError("reproduce: name a recipe or pass --list"), 2);
    }
    require(o.format == "csv" || o.format == "csv+svg", "reproduce: --format must be csv or csv+svg");
    const Config cfg = make_config(o.c);
    const RecipeResult r = run_recipe(o.name, cfg);
    const std::string prefix = o.c.out.empty() ? o.name : o.c.out;
    for (const auto& f : r.files) {
        if (o.format == "csv" && f.suffix.size() > 4 && f.suffix.substr(f.suffix.size() - 4) == ".svg") continue;
        write_text_file(prefix + f.suffix, f.content);
    }
    std::printf("recipe %s (version %d)\n%s\n%s", r.name.c_str(), kRecipeVersion, parameter_text(r).c_str(),
                comparison_text(r).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finqsim: common-gate FinFET spin-qubit modelling"};
    app.require_subcommand(1);

    ParamsOpts params;
    auto* p = app.add_subcommand("params", "device parameters from geometry and carrier density");
    add_common(p, params.c, false);
    p->add_flag("--constants", params.constants, "dump the constants table as name,value CSV");
    p->add_flag("--csv", params.csv, "print CSV instead of the table");

    FnOpts fn;
    auto* f = app.add_subcommand("fn", "tabulate a special or range function");
    add_common(f, fn.c, true);
    f->add_option("--name", fn.name, "J0 J1 Y0 Y1 si F1 F2 G1 G2")->required();
    f->add_option("--from", fn.from);
    f->add_option("--to", fn.to);
    f->add_option("--points", fn.points);

    ConductanceOpts cond;
    auto* c = app.add_subcommand("conductance", "two-dot three-channel conductance over (E_SL, E_SR)");
    add_common(c, cond.c, true);
    c->add_option("--sl", cond.sl, "E_SL axis from:to:points or list");
    c->add_option("--sr", cond.sr, "E_SR axis from:to:points or list");

    RkkyOpts rk;
    auto* r = app.add_subcommand("rkky", "RKKY coupling, Kondo temperature and time budget against Gamma");
    add_common(r, rk.c, true);
    r->add_option("--d", rk.d, "dimensionality 1 or 2");
    r->add_option("--gamma-sweep", rk.gamma_sweep, "Gamma axis in meV");
    r->add_option("--L", rk.L, "L = W values in nm");
    r->add_option("--n", rk.n, "reduced density, nm^-1 or nm^-2");
    r->add_option("--U", rk.U, "charging energy in meV");
    r->add_option("--T", rk.T, "temperature in K");
    r->add_option("--m", rk.m, "m*/m0");
    r->add_option("--Em", rk.Em, "E_m in meV, 0 selects 2 V_tun");
    r->add_option("--HFIN", rk.HFIN, "fin height in nm");
    r->add_flag("--range-function", rk.range_function, "multiply the decoherence rate by G_d'");

    NoiseOpts nz;
    auto* n = app.add_subcommand("noise", "shot and thermal conductance fluctuations");
    add_common(n, nz.c, true);
    n->add_option("--vd", nz.vd, "drain voltage in V");
    n->add_option("--T", nz.T, "temperature in K");
    n->add_option("--df", nz.df, "bandwidth in Hz");
    n->add_option("--g-sweep", nz.g_sweep, "g' = R_K g axis");
    n->add_option("--g-ref", nz.g_ref, "reference g' for the fidelity column");

    CrosstalkOpts ct;
    auto* x = app.add_subcommand("crosstalk", "LCL currents that null all but one qubit field");
    add_common(x, ct.c, false);
    x->add_option("--N", ct.N, "highest qubit index");
    x->add_option("--n", ct.n, "target qubit");
    x->add_option("--p", ct.p, "nearest-neighbour coupling r/sqrt(r^2+L^2)");
    x->add_option("--L", ct.L, "line pitch in nm (instead of --p)");
    x->add_option("--r", ct.r, "line to qubit distance in nm");
    x->add_option("--In", ct.In, "target line current in A");
    x->add_option("--mu", ct.mu, "relative permeability");

    AnnealOpts an;
    auto* a = app.add_subcommand("anneal", "exact Heisenberg annealing run");
    add_common(a, an.c, true);
    a->add_option("--input", an.input, "network file; a gapped 4-spin chain when absent");
    a->add_option("--dt", an.dt, "time step in s");
    a->add_option("--record-every", an.record_every);
    a->add_flag("--ising", an.ising, "keep only sigma_z sigma_z exchange");
    a->add_option("--demo-N", an.demo_N, "chain length of the built-in instance");
    a->add_option("--demo-time", an.demo_time, "run time of the built-in instance, hbar/J units");

    OracleOpts orc;
    auto* o = app.add_subcommand("oracle", "discretised-band check of the analytic coefficients");
    add_common(o, orc.c, false);
    o->add_option("--nk", orc.nk, "modes per channel, or a list for a convergence ladder");
    o->add_option("--report", orc.report, "CSV report path");

    ReproduceOpts rp;
    auto* g = app.add_subcommand("reproduce", "figure and anchor recipes");
    add_common(g, rp.c, false);
    g->add_option("name", rp.name, "recipe name");
    g->add_flag("--list", rp.list, "list recipes");
    g->add_option("--format", rp.format, "csv or csv+svg");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*p) return run_params(params);
        if (*f) return run_fn(fn);
        if (*c) return run_conductance(cond);
        if (*r) return run_rkky(rk);
        if (*n) return run_noise(nz);
        if (*x) return run_crosstalk(ct);
        if (*a) return run_anneal(an);
        if (*o) return run_oracle(orc);
        if (*g) return run_reproduce(rp);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
