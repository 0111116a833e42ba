#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "finq/rkky_kondo.hpp"

namespace finq {

// Basis index bit i = 0 means spin i up (sigma_z = +1).
struct SpinNetwork {
    int N = 2;
    std::vector<double> J;                               // N*N, symmetric, eV
    std::vector<double> Bz;                              // N, eV (already g mu_B B)
    std::vector<std::pair<double, double>> schedule;     // (t [s], Delta [eV]), piecewise linear
    std::vector<double> delta_scale;                     // per-qubit factor on Delta(t), empty = all 1
    double dt = 1e-13;                                   // s
    bool ising_only = false;                             // keep only sigma_z sigma_z of the exchange

    static constexpr int kMaxSpins = 12;

    explicit SpinNetwork(int n = 2);
    double& coupling(int i, int j) { return J[std::size_t(i * N + j)]; }
    double coupling(int i, int j) const { return J[std::size_t(i * N + j)]; }
    void set_coupling(int i, int j, double v);
    double delta(double t) const;
    double delta_on(int i, double t) const;
    double total_time() const;
    std::size_t dim() const { return std::size_t(1) << N; }
    void validate() const;
};

using StateVector = Eigen::VectorXcd;

// out = H(t) in, matrix-free.
void apply_hamiltonian(const SpinNetwork& net, double t, const StateVector& in, StateVector& out);
// The same operator with Delta pinned to `delta` on every qubit.
void apply_hamiltonian_delta(const SpinNetwork& net, double delta, const StateVector& in, StateVector& out);

Eigen::MatrixXd build_hamiltonian(const SpinNetwork& net, double t);
Eigen::MatrixXd build_problem_hamiltonian(const SpinNetwork& net);  // Delta = 0

struct GroundState {
    double energy;
    Eigen::MatrixXd basis;  // columns span the ground space
    int degeneracy;
};

GroundState ground_state(const Eigen::MatrixXd& H, double degeneracy_tol = 1e-9);
GroundState ground_state(const SpinNetwork& net, double t);

// Upper bound on ||H(t)|| over the schedule, eV.
double energy_scale(const SpinNetwork& net);

struct EvolveOptions {
    std::optional<StateVector> initial;  // default: ground state of H(0)
    std::size_t record_every = 1;
    bool require_final_zero = true;
};

struct EvolveResult {
    StateVector final_state;
    double fidelity;  // weight in the Delta = 0 ground space
    double initial_fidelity;
    double norm_drift;
    std::vector<double> times;
    std::vector<double> energies;
    std::vector<double> fidelities;
    std::size_t steps;
};

// Exponential midpoint stepping, exp(-i H(t + dt/2) dt/hbar) by Taylor series.
EvolveResult evolve(const SpinNetwork& net, const EvolveOptions& opt = {});

// Distance between runs at dt and dt/2 (final states, 2-norm).
double step_halving_error(const SpinNetwork& net, const EvolveOptions& opt = {});

// <S_total^2> in units of hbar^2.
double total_spin_squared(const StateVector& psi, int N);

struct DevicePair {
    int i;
    int j;
    double W;  // nm
};

struct DeviceNetwork {
    SpinNetwork net;
    std::vector<std::string> warnings;
};

// J_ij from j_rkky with W set per pair; Bz_i = g mu_B B_i with B_i the LCL
// field of current I_i at distance r (nm) with relative permeability mu_rel.
DeviceNetwork couplings_from_device(int N, const std::vector<DevicePair>& pairs, const CouplingInput& base,
                                    const std::vector<double>& lcl_currents, double r = 20.0, double mu_rel = 10.0);

// Nearest-neighbour pairs of a chain with the given pitch; all_pairs adds
// every (i, j) at distance |i - j| pitch.
std::vector<DevicePair> chain_pairs(int N, double pitch, bool all_pairs = false);

// Open chain with antiferromagnetic J, staggered fields +-stagger*J and a
// transverse drive falling linearly from delta0*J to 0 over total_time
// (in units of hbar/J). dt is set to 0.05 hbar / energy_scale.
SpinNetwork annealing_chain(int N, double J, double stagger, double delta0, double total_time_hbar_over_J);

// Text format, one item per line, '#' comments:
//   i j J_eV | field i Bz_eV | schedule t_s Delta_eV
SpinNetwork parse_network(std::istream& in);

}  // namespace finq
