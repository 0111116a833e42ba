#include "finq/conductance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "finq/errors.hpp"

namespace finq {

namespace {

int slot(int channel) {
    switch (channel) {
        case 1: return 0;
        case 3: return 1;
        case 5: return 2;
        default: throw ValidationError("channel index must be 1, 3 or 5");
    }
}

double sq(double x) { return x * x; }

}  // namespace

SelfEnergyTable fermi_level_table(double s1, double s3, double s5) {
    SelfEnergyTable t{};
    const double row[3] = {s1, s3, s5};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = row[i];
    return t;
}

double ChannelDotSystem::s_at(int i, int j) const { return s[slot(i)][slot(j)]; }

double ChannelDotSystem::V2(int channel) const {
    const double G = channel == 1 ? Gamma1 : channel == 3 ? Gamma3 : channel == 5 ? Gamma5 : -1.0;
    require(G >= 0.0, "V2: channel must be 1, 3 or 5");
    return G / (2.0 * kPi * rho_F);
}

double ChannelDotSystem::k_d() const {
    if (dimensionality == 1) return 1.0;
    return kPi * n_e2 * W * W;
}

void ChannelDotSystem::validate() const {
    require(std::isfinite(E_kF) && std::isfinite(E_SL) && std::isfinite(E_SR), "ChannelDotSystem: non-finite energy");
    require(Gamma1 > 0.0 && Gamma3 > 0.0 && Gamma5 > 0.0, "ChannelDotSystem: Gamma_i must be > 0");
    require(rho_F > 0.0 && std::isfinite(rho_F), "ChannelDotSystem: rho_F must be > 0");
    require(dimensionality == 1 || dimensionality == 2, "ChannelDotSystem: dimensionality must be 1 or 2");
    if (dimensionality == 2) require(n_e2 > 0.0 && W > 0.0, "ChannelDotSystem: 2D needs n_e2 > 0 and W > 0");
    for (const auto& row : s)
        for (double v : row) require(std::isfinite(v), "ChannelDotSystem: non-finite self-energy");
}

ResonanceTerms resonance_terms(const ChannelDotSystem& sys) {
    const auto& s = sys.s;
    // s[i][j]: i = coupling channel, j = evaluation channel
    ResonanceTerms t{};
    t.e1 = sys.E_kF - sys.E_SL - s[0][0] - s[1][0];
    t.e2 = sys.E_kF - sys.E_SL - s[0][1] - s[1][1];
    t.e3 = sys.E_kF - sys.E_SL - s[0][2] - s[1][2];
    t.e4 = sys.E_kF - sys.E_SR - s[2][0] - s[1][0];
    t.e5 = sys.E_kF - sys.E_SR - s[2][1] - s[1][1];
    t.e6 = sys.E_kF - sys.E_SR - s[2][2] - s[1][2];
    return t;
}

ConductanceTerms conductance_terms(const ChannelDotSystem& sys) {
    sys.validate();
    const ResonanceTerms e = resonance_terms(sys);
    const double s31 = sys.s[1][0];
    const double s33 = sys.s[1][1];
    const double s35 = sys.s[1][2];
    const double G1 = sys.Gamma1, G3 = sys.Gamma3, G5 = sys.Gamma5;
    const double V1 = sys.V2(1), V3 = sys.V2(3), V5 = sys.V2(5);

    const double D1 = sq(e.e1 * e.e4 - s31 * s31) + sq(e.e4 * G1);
    const double D5 = sq(e.e3 * e.e6 - s35 * s35) + sq(e.e3 * G5);
    const double D3 = sq(e.e2 * e.e5 - s33 * s33) + sq(G3 * (e.e2 + e.e5 + 2.0 * s33));
    if (!(D3 > 0.0))
        throw DomainError("full_conductance: on-resonance pole at e2 = e5 = -s33 (E_SL, E_SR both on the shifted Fermi level)");

    // With s31 = 0 (s35 = 0) the printed channel-1 (channel-5) factors have a
    // removable 0/0 at e4 = 0 (e3 = 0); these are the divided-out forms.
    const bool free1 = (s31 == 0.0);
    const bool free5 = (s35 == 0.0);
    const double L1 = sq(e.e1) + sq(G1);  // D1 / e4^2 when s31 = 0
    const double L5 = sq(e.e6) + sq(G5);  // D5 / e3^2 when s35 = 0

    ConductanceTerms out;
    // |x1 x1* + y1 y1*| and |x3 x3* + y3 y3*|
    const double A1 = free1 ? V1 / L1 : V1 * (sq(e.e4) + sq(s31)) / D1;
    const double A5 = free5 ? V5 / L5 : V5 * (sq(e.e3) + sq(s35)) / D5;
    const double A3 = V3 * (sq(e.e2 + s33) + sq(e.e5 + s33)) / D3;
    out.direct = {A1 * A1, A3 * A3, A5 * A5};

    const double c13 = free1 ? 2.0 * V1 * V3 * sq(e.e2 + s33) / (L1 * D3)
                             : 2.0 * V1 * V3 * sq(e.e4 * (e.e2 + s33) + s31 * (e.e5 + s33)) / (D1 * D3);
    double c15;
    if (free1 && free5)
        c15 = 0.0;
    else if (free1)
        c15 = 2.0 * V1 * V5 * sq(s35) / (L1 * D5);
    else if (free5)
        c15 = 2.0 * V1 * V5 * sq(s31) / (D1 * L5);
    else
        c15 = 2.0 * V1 * V5 * sq(s35 * e.e4 + s31 * e.e3) / (D1 * D5);
    const double c35 = free5 ? 2.0 * V3 * V5 * sq(e.e5 + s33) / (D3 * L5)
                             : 2.0 * V3 * V5 * sq(s35 * (e.e2 + s33) + e.e3 * (e.e5 + s33)) / (D3 * D5);
    out.cross = {c13, c15, c35};

    const double kd = sys.k_d();
    double sum = 0.0;
    for (double v : out.direct) sum += v;
    for (double v : out.cross) sum += v;
    for (auto& v : out.direct) v *= kd;
    for (auto& v : out.cross) v *= kd;
    out.total = kd * sum;
    if (!std::isfinite(out.total))
        throw DomainError("full_conductance: on-resonance pole, broadenings inconsistent with the level configuration");
    return out;
}

double full_conductance(const ChannelDotSystem& sys) { return conductance_terms(sys).total; }

MiddleVariables middle_variables(const ChannelDotSystem& sys) {
    const double s11 = sys.s[0][0];
    const double s55 = sys.s[2][2];
    MiddleVariables m{};
    m.Delta = 0.5 * (2.0 * sys.E_kF - sys.E_SL - sys.E_SR - s11 - s55);
    m.delta = 0.5 * ((sys.E_SL + s11) - (sys.E_SR + s55));
    return m;
}

double middle_channel_reduced(double Delta, double delta, double s33, double Gamma3, double k_d) {
    const double num = 4.0 * sq(sq(Delta) + sq(delta));
    const double den = sq(sq(Delta) - 2.0 * s33 * Delta - sq(delta)) + 4.0 * sq(Delta) * sq(Gamma3);
    if (!(den > 0.0)) throw DomainError("middle_channel_conductance: pole at Delta = delta = 0");
    return k_d * num / sq(den);
}

double middle_channel_conductance(const ChannelDotSystem& sys) {
    sys.validate();
    const MiddleVariables m = middle_variables(sys);
    const double V3 = sys.V2(3);
    return V3 * V3 * middle_channel_reduced(m.Delta, m.delta, sys.s[1][1], sys.Gamma3, sys.k_d());
}

double edge_channel_conductance(const ChannelDotSystem& sys, double E_dot) {
    sys.validate();
    const double e1 = sys.E_kF - E_dot - sys.s[0][0];
    const double V1 = sys.V2(1);
    return sys.k_d() * sq(V1 / (sq(e1) + sq(sys.Gamma1)));
}

Matrix conductance_map(const ChannelDotSystem& sys, const std::vector<double>& E_SL_grid,
                       const std::vector<double>& E_SR_grid) {
    sys.validate();
    require(!E_SL_grid.empty() && !E_SR_grid.empty(), "conductance_map: empty grid");
    for (double v : E_SL_grid) require(std::isfinite(v), "conductance_map: non-finite grid value");
    for (double v : E_SR_grid) require(std::isfinite(v), "conductance_map: non-finite grid value");
    require(std::is_sorted(E_SL_grid.begin(), E_SL_grid.end()) && std::is_sorted(E_SR_grid.begin(), E_SR_grid.end()),
            "conductance_map: grids must be sorted");
    Matrix m(E_SL_grid.size(), E_SR_grid.size());
    parallel_for(m.rows, [&](std::size_t i) {
        ChannelDotSystem p = sys;
        p.E_SL = E_SL_grid[i];
        for (std::size_t j = 0; j < m.cols; ++j) {
            p.E_SR = E_SR_grid[j];
            m(i, j) = full_conductance(p);
        }
    });
    return m;
}

void SpinConfig::validate() const {
    require(!spins.empty(), "SpinConfig: need at least one dot");
    require(Delta_z >= 0.0 && std::isfinite(Delta_z), "SpinConfig: Delta_z must be >= 0");
    require(std::isfinite(E_S_up), "SpinConfig: non-finite E_S_up");
}

double channel_conductance(const ChannelDotSystem& sys_template, const SpinConfig& levels, std::size_t n_dots,
                           std::size_t c, Spin left, Spin right) {
    require(n_dots >= 1, "channel_conductance: need at least one dot");
    require(c <= n_dots, "channel_conductance: channel index out of range");
    if (c == 0) return edge_channel_conductance(sys_template, levels.level(right));
    if (c == n_dots) return edge_channel_conductance(sys_template, levels.level(left));
    ChannelDotSystem p = sys_template;
    p.E_SL = levels.level(left);
    p.E_SR = levels.level(right);
    return middle_channel_conductance(p);
}

ReadoutSignature readout_signature(const SpinConfig& config, const ChannelDotSystem& sys_template) {
    config.validate();
    const std::size_t N = config.spins.size();
    ReadoutSignature r;
    r.g.resize(N + 1);
    r.reference.resize(N + 1);
    r.difference.resize(N + 1);
    for (std::size_t c = 0; c <= N; ++c) {
        const Spin left = c > 0 ? config.spins[c - 1] : Spin::up;
        const Spin right = c < N ? config.spins[c] : Spin::up;
        r.g[c] = channel_conductance(sys_template, config, N, c, left, right);
        if (c == 0 || c == N)
            r.reference[c] = channel_conductance(sys_template, config, N, c, Spin::up, Spin::up);
        else
            r.reference[c] = channel_conductance(sys_template, config, N, c, left, left);
        r.difference[c] = r.g[c] - r.reference[c];
    }
    return r;
}

InterleavedMeasurement measure_interleaved(const SpinConfig& config, const ChannelDotSystem& sys_template) {
    const ReadoutSignature sig = readout_signature(config, sys_template);
    InterleavedMeasurement m;
    m.pattern_a.resize(sig.g.size());
    m.pattern_b.resize(sig.g.size());
    for (std::size_t c = 0; c < sig.g.size(); ++c) {
        if (c % 2 == 0)
            m.pattern_a[c] = sig.g[c];
        else
            m.pattern_b[c] = sig.g[c];
    }
    return m;
}

std::vector<Spin> infer_spins(const InterleavedMeasurement& m, const SpinConfig& levels,
                              const ChannelDotSystem& sys_template, double tol) {
    const std::size_t channels = m.pattern_a.size();
    require(channels >= 2 && m.pattern_b.size() == channels, "infer_spins: need N+1 >= 2 channels in both patterns");
    const std::size_t N = channels - 1;
    const Spin both[2] = {Spin::up, Spin::down};

    // allowed[c][l][r]: spins (l, r) of dots c-1, c are consistent with channel c
    std::vector<std::array<std::array<bool, 2>, 2>> allowed(channels);
    std::vector<std::size_t> unmatched;
    std::vector<std::size_t> unmeasured;
    for (std::size_t c = 0; c <= N; ++c) {
        std::vector<double> values;
        if (m.pattern_a[c]) values.push_back(*m.pattern_a[c]);
        if (m.pattern_b[c]) values.push_back(*m.pattern_b[c]);
        if (values.empty()) unmeasured.push_back(c);
        double table[2][2];
        std::vector<double> distinct;
        for (int l = 0; l < 2; ++l)
            for (int r = 0; r < 2; ++r) {
                table[l][r] = channel_conductance(sys_template, levels, N, c, both[l], both[r]);
                distinct.push_back(table[l][r]);
            }
        double t = tol;
        if (t <= 0.0) {
            std::sort(distinct.begin(), distinct.end());
            double gap = 0.0;
            for (std::size_t k = 1; k < distinct.size(); ++k) {
                const double d = distinct[k] - distinct[k - 1];
                if (d > 1e-12 * std::max(std::abs(distinct[k]), 1e-300) && (gap == 0.0 || d < gap)) gap = d;
            }
            t = 0.5 * gap;
        }
        bool any = false;
        for (int l = 0; l < 2; ++l)
            for (int r = 0; r < 2; ++r) {
                bool ok = true;
                for (double v : values) ok = ok && std::abs(v - table[l][r]) <= t;
                allowed[c][l][r] = ok;
                any = any || ok;
            }
        if (!any) unmatched.push_back(c);
    }

    auto list = [](const std::vector<std::size_t>& v) {
        std::ostringstream os;
        for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
        return os.str();
    };
    if (!unmeasured.empty()) throw ValidationError("infer_spins: channels never measured: " + list(unmeasured));
    if (!unmatched.empty())
        throw DomainError("infer_spins: inconsistent measurements on channels " + list(unmatched));

    // Forward count of assignments for dots 0..k, capped at 2.
    auto edge_ok = [&](std::size_t c, int s) {
        // channel 0 sees only its right dot, channel N only its left dot
        return c == 0 ? (allowed[c][0][s] || allowed[c][1][s]) : (allowed[c][s][0] || allowed[c][s][1]);
    };
    std::vector<std::array<int, 2>> count(N);
    std::vector<std::array<int, 2>> parent(N);
    for (int s = 0; s < 2; ++s) count[0][s] = edge_ok(0, s) ? 1 : 0;
    for (std::size_t k = 1; k < N; ++k) {
        for (int s = 0; s < 2; ++s) {
            int total = 0;
            parent[k][s] = -1;
            for (int p = 0; p < 2; ++p) {
                if (count[k - 1][p] && allowed[k][p][s]) {
                    total += count[k - 1][p];
                    parent[k][s] = p;
                }
            }
            count[k][s] = std::min(total, 2);
        }
    }
    int total = 0;
    int last = -1;
    for (int s = 0; s < 2; ++s) {
        if (count[N - 1][s] && edge_ok(N, s)) {
            total += count[N - 1][s];
            last = s;
        }
    }
    if (total == 0) {
        std::vector<std::size_t> dead;
        for (std::size_t k = 0; k < N; ++k) {
            if (!count[k][0] && !count[k][1]) {
                if (k > 0) dead.push_back(k - 1);
                dead.push_back(k);
                break;
            }
        }
        if (dead.empty()) dead = {N - 1, N};
        throw DomainError("infer_spins: no spin assignment fits; conflicting channels " + list(dead));
    }
    if (total > 1) {
        std::vector<std::size_t> loose;
        for (std::size_t c = 0; c <= N; ++c) {
            int n = 0;
            for (int l = 0; l < 2; ++l)
                for (int r = 0; r < 2; ++r) n += allowed[c][l][r];
            if (n > 1) loose.push_back(c);
        }
        throw DomainError("infer_spins: several spin assignments fit; ambiguous channels " + list(loose));
    }
    std::vector<Spin> spins(N);
    int s = last;
    for (std::size_t k = N; k-- > 0;) {
        spins[k] = both[s];
        if (k > 0) s = parent[k][s];
    }
    return spins;
}

}  // namespace finq
