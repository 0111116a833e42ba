#pragma once

#include <vector>

namespace finq {

// N+1 current lines above qubits 0..N. p = r / sqrt(r^2 + L^2) is the
// nearest-neighbour coupling. Lengths in nm, currents in A.
struct LCLArray {
    int N = 5;
    double r = 20.0;
    double p = 0.3;
    int n = 3;
    double I_n = 1e-5;
    double mu_channel = 10.0;

    static LCLArray from_geometry(int N, double r, double L, int n, double I_n);
    double pitch() const;  // L recovered from p and r
    void validate() const;
};

struct CurrentSolution {
    std::vector<double> I;        // I_0..I_N
    double condition_estimate;    // (1 + 2p) / min |pivot|
};

// I_i = p (I_{i-1} + I_{i+1}) for i != n, with I_n fixed.
CurrentSolution solve_currents(const LCLArray& arr);

// h_i = [I_i - p (I_{i-1} + I_{i+1})] / (2 pi r), A/m, for every qubit.
std::vector<double> qubit_fields(const LCLArray& arr, const std::vector<double>& I);
double target_field(const LCLArray& arr, const std::vector<double>& I);
// mu_channel mu0 h, tesla.
double target_flux_density(const LCLArray& arr, const std::vector<double>& I);

// The N = 5, n = 3 bracket as printed: 1 - p^2(1-p^2)/(1-2p^2) - p^2/(1-p^2).
double five_line_bracket(double p);

// Same kernel without the nearest-neighbour truncation:
// h_i = [I_i - sum_m p_m (I_{i-m} + I_{i+m})]/(2 pi r), p_m = r/sqrt(r^2 + m^2 L^2).
std::vector<double> qubit_fields_all_neighbours(const LCLArray& arr, const std::vector<double>& I);

struct ForbiddenGeometry {
    int m;
    double p;
    double L_over_r;  // sqrt(m - 1)
    double mismatch;  // |m p^2 - 1| at the queried geometry
};

// Flags m in [1, n_max] with |m p^2 - 1| < tol, and lists L = sqrt(m-1) r.
std::vector<ForbiddenGeometry> singularity_check(const LCLArray& arr, int n_max, double tol = 1e-9);
std::vector<ForbiddenGeometry> forbidden_geometries(int n_max);

// Couplings p in (0,1] at which a one-sided run of `length` non-target lines
// has a vanishing elimination pivot.
std::vector<double> exact_singular_couplings(int length);

}  // namespace finq
