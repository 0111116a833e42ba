#include "finq/crosstalk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "finq/constants.hpp"
#include "finq/errors.hpp"

namespace finq {

LCLArray LCLArray::from_geometry(int N, double r, double L, int n, double I_n) {
    require(r > 0.0 && L >= 0.0, "LCLArray: r must be > 0 and L >= 0");
    LCLArray a;
    a.N = N;
    a.r = r;
    a.p = r / std::sqrt(r * r + L * L);
    a.n = n;
    a.I_n = I_n;
    a.validate();
    return a;
}

double LCLArray::pitch() const { return p > 0.0 ? r * std::sqrt(1.0 / (p * p) - 1.0) : INFINITY; }

void LCLArray::validate() const {
    require(N >= 1, "LCLArray: need N >= 1");
    require(n >= 0 && n <= N, "LCLArray: target index must be in [0, N]");
    require(std::isfinite(r) && r > 0.0, "LCLArray: r must be > 0");
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "LCLArray: p must be in [0, 1]");
    require(std::isfinite(I_n), "LCLArray: non-finite target current");
}

namespace {

// Ratios I_k = rho_k I_{k+1} counted from the far end of a run of `len` lines.
std::vector<double> run_ratios(double p, int len, double& min_pivot) {
    std::vector<double> rho(std::size_t(std::max(len, 0)));
    double prev = 0.0;
    for (int k = 0; k < len; ++k) {
        const double pivot = 1.0 - p * prev;
        min_pivot = std::min(min_pivot, std::abs(pivot));
        prev = p / pivot;
        rho[std::size_t(k)] = prev;
    }
    return rho;
}

}  // namespace

CurrentSolution solve_currents(const LCLArray& arr) {
    arr.validate();
    const int N = arr.N, n = arr.n;
    double min_pivot = 1.0;
    const auto left = run_ratios(arr.p, n, min_pivot);           // lines n-1 .. 0
    const auto right = run_ratios(arr.p, N - n, min_pivot);      // lines n+1 .. N
    const double cond = (1.0 + 2.0 * arr.p) / min_pivot;
    if (!(min_pivot > 0.0) || !std::isfinite(cond) || cond > 1e12) {
        std::ostringstream os;
        os << "solve_currents: singular line geometry (p = " << arr.p << ", L = " << arr.pitch()
           << " nm, r = " << arr.r << " nm); move L away from the forbidden values L = sqrt(m-1) r";
        throw DomainError(os.str());
    }
    CurrentSolution s;
    s.condition_estimate = cond;
    s.I.assign(std::size_t(N + 1), 0.0);
    s.I[std::size_t(n)] = arr.I_n;
    // left[k] relates line k to line k+1 counting from line 0
    for (int k = n - 1; k >= 0; --k) s.I[std::size_t(k)] = left[std::size_t(k)] * s.I[std::size_t(k + 1)];
    // right[k] relates line N-k to line N-k-1
    for (int k = N - n - 1; k >= 0; --k)
        s.I[std::size_t(N - k)] = right[std::size_t(k)] * s.I[std::size_t(N - k - 1)];
    return s;
}

std::vector<double> qubit_fields(const LCLArray& arr, const std::vector<double>& I) {
    require(I.size() == std::size_t(arr.N + 1), "qubit_fields: need N+1 currents");
    const double scale = 1.0 / (2.0 * kPi * arr.r * 1e-9);
    std::vector<double> h(I.size());
    for (std::size_t i = 0; i < I.size(); ++i) {
        const double lft = i > 0 ? I[i - 1] : 0.0;
        const double rgt = i + 1 < I.size() ? I[i + 1] : 0.0;
        h[i] = scale * (I[i] - arr.p * (lft + rgt));
    }
    return h;
}

double target_field(const LCLArray& arr, const std::vector<double>& I) {
    return qubit_fields(arr, I)[std::size_t(arr.n)];
}

double target_flux_density(const LCLArray& arr, const std::vector<double>& I) {
    return arr.mu_channel * kConst.mu0 * target_field(arr, I);
}

double five_line_bracket(double p) {
    const double p2 = p * p;
    return 1.0 - p2 * (1.0 - p2) / (1.0 - 2.0 * p2) - p2 / (1.0 - p2);
}

std::vector<double> qubit_fields_all_neighbours(const LCLArray& arr, const std::vector<double>& I) {
    require(I.size() == std::size_t(arr.N + 1), "qubit_fields_all_neighbours: need N+1 currents");
    const double scale = 1.0 / (2.0 * kPi * arr.r * 1e-9);
    const double L = arr.pitch();
    const int M = int(I.size());
    std::vector<double> h(I.size());
    for (int i = 0; i < M; ++i) {
        double acc = I[std::size_t(i)];
        for (int j = 0; j < M; ++j) {
            if (j == i) continue;
            const double m = std::abs(i - j);
            const double pm = std::isfinite(L) ? arr.r / std::sqrt(arr.r * arr.r + m * m * L * L) : 0.0;
            acc -= pm * I[std::size_t(j)];
        }
        h[std::size_t(i)] = scale * acc;
    }
    return h;
}

std::vector<ForbiddenGeometry> forbidden_geometries(int n_max) {
    require(n_max >= 1, "forbidden_geometries: n_max must be >= 1");
    std::vector<ForbiddenGeometry> out;
    for (int m = 1; m <= n_max; ++m) out.push_back({m, 1.0 / std::sqrt(double(m)), std::sqrt(double(m - 1)), 0.0});
    return out;
}

std::vector<ForbiddenGeometry> singularity_check(const LCLArray& arr, int n_max, double tol) {
    require(n_max >= 1, "singularity_check: n_max must be >= 1");
    std::vector<ForbiddenGeometry> hits;
    for (const auto& g : forbidden_geometries(n_max)) {
        const double mismatch = std::abs(g.m * arr.p * arr.p - 1.0);
        if (mismatch < tol) hits.push_back({g.m, g.p, g.L_over_r, mismatch});
    }
    return hits;
}

std::vector<double> exact_singular_couplings(int length) {
    require(length >= 0, "exact_singular_couplings: length must be >= 0");
    // Pivot k of a run equals D_{k+1}/D_k, D_j = prod_i (1 - 2p cos(pi i/(j+1))).
    std::vector<double> out;
    for (int j = 2; j <= length; ++j) {
        for (int i = 1; 2 * i <= j; ++i) {
            const double p = 1.0 / (2.0 * std::cos(kPi * i / (j + 1)));
            if (p > 0.0 && p <= 1.0 + 1e-12) out.push_back(std::min(p, 1.0));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
}

}  // namespace finq
