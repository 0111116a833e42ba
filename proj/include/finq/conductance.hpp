#pragma once

#include <array>
#include <optional>
#include <vector>

#include "finq/constants.hpp"
#include "finq/grid.hpp"

namespace finq {

// Channel slots 0,1,2 stand for fin channels 1,3,5.
// s[i][j] = Sigma_i evaluated at the channel-j energy.
using SelfEnergyTable = std::array<std::array<double, 3>, 3>;

// All self-energies evaluated at the Fermi level: s[i][j] = s_i.
SelfEnergyTable fermi_level_table(double s1, double s3, double s5);

struct ChannelDotSystem {
    double E_kF = 1.0;
    double E_SL = 0.0;
    double E_SR = 0.0;
    SelfEnergyTable s{};
    double Gamma1 = 0.01;
    double Gamma3 = 0.01;
    double Gamma5 = 0.01;
    // Gamma_i = 2 pi |V_i|^2 rho_F. The default makes |V_i|^2 = Gamma_i.
    double rho_F = 1.0 / (2.0 * kPi);
    int dimensionality = 1;
    double n_e2 = 0.0;  // nm^-2, only for d = 2
    double W = 0.0;     // nm, only for d = 2

    double s_at(int i, int j) const;  // i, j in {1,3,5}
    double V2(int channel) const;     // |V|^2 for channel 1, 3 or 5
    double k_d() const;
    void validate() const;
};

struct ResonanceTerms {
    double e1, e2, e3, e4, e5, e6;
};

ResonanceTerms resonance_terms(const ChannelDotSystem& sys);

struct ConductanceTerms {
    std::array<double, 3> direct{};  // channels 1, 3, 5
    std::array<double, 3> cross{};   // (1,3), (1,5), (3,5), each including the factor 2
    double total = 0.0;              // k_d * sum, in units of 2e^2/h
};

ConductanceTerms conductance_terms(const ChannelDotSystem& sys);
double full_conductance(const ChannelDotSystem& sys);

struct MiddleVariables {
    double Delta;
    double delta;
};

// Delta = (2E_kF - E_SL - E_SR - s11 - s55)/2,
// delta = [(E_SL + s11) - (E_SR + s55)]/2.
MiddleVariables middle_variables(const ChannelDotSystem& sys);

// k_d 4(Delta^2+delta^2)^2 / [(Delta^2 - 2 s33 Delta - delta^2)^2 + 4 Delta^2 Gamma3^2]^2
double middle_channel_reduced(double Delta, double delta, double s33, double Gamma3, double k_d = 1.0);

// |V3|^4 times the reduced form; equals the channel-3 term of full_conductance.
double middle_channel_conductance(const ChannelDotSystem& sys);

// One dot next to an edge channel: k_d |V1|^4 / (e1^2 + Gamma1^2)^2 with s31 = 0.
double edge_channel_conductance(const ChannelDotSystem& sys, double E_dot);

Matrix conductance_map(const ChannelDotSystem& sys, const std::vector<double>& E_SL_grid,
                       const std::vector<double>& E_SR_grid);

enum class Spin { up, down };

struct SpinConfig {
    std::vector<Spin> spins;
    double E_S_up = 0.0;
    double Delta_z = 0.0;  // E_S_down = E_S_up - Delta_z

    double level(Spin s) const { return s == Spin::up ? E_S_up : E_S_up - Delta_z; }
    void validate() const;
};

struct ReadoutSignature {
    std::vector<double> g;           // per channel, N+1 entries
    std::vector<double> reference;   // g with the reference spin arrangement
    std::vector<double> difference;  // g - reference
};

// Channel c in [0, N] sees dots c-1 and c. The reference for a middle
// channel puts both neighbours in the left dot's state; for an edge channel
// the reference dot sits at E_S_up.
ReadoutSignature readout_signature(const SpinConfig& config, const ChannelDotSystem& sys_template);

// Conductance of channel c for neighbouring spins (left, right); edge
// channels ignore the missing side.
double channel_conductance(const ChannelDotSystem& sys_template, const SpinConfig& levels,
                           std::size_t n_dots, std::size_t c, Spin left, Spin right);

struct InterleavedMeasurement {
    // Size N+1 each. Pattern A measures even channels, pattern B odd ones.
    std::vector<std::optional<double>> pattern_a;
    std::vector<std::optional<double>> pattern_b;
};

// Noiseless measurement of a spin configuration under both patterns.
InterleavedMeasurement measure_interleaved(const SpinConfig& config, const ChannelDotSystem& sys_template);

// Recovers the spins. tol <= 0 selects, per channel, half the smallest gap
// between distinct reference values. Throws DomainError naming the
// conflicting channels when no or several assignments fit.
std::vector<Spin> infer_spins(const InterleavedMeasurement& m, const SpinConfig& levels,
                              const ChannelDotSystem& sys_template, double tol = 0.0);

}  // namespace finq
