#pragma once

// Reference implementations used only by the tests. None of these call into
// the library's own numerics.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

// Si(x) - pi/2 by Gauss-Kronrod over unit-length pieces of sin t / t.
inline double si(double x) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    auto f = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
    double acc = 0.0;
    double a = 0.0;
    while (a < x) {
        const double b = std::min(x, a + 1.0);
        acc += GK::integrate(f, a, b, 10, 1e-15);
        a = b;
    }
    return acc - pi / 2.0;
}

inline double J(int n, double x) { return std::cyl_bessel_j(double(n), x); }
inline double Y(int n, double x) { return std::cyl_neumann(double(n), x); }

// Integral of max(N(g_meas, s) - N(g_ref, s), 0) by composite Simpson on a wide grid.
inline double gaussian_overlap_gain(double gm, double gr, double s) {
    const double lo = std::min(gm, gr) - 12.0 * s, hi = std::max(gm, gr) + 12.0 * s;
    const int n = 200000;
    const double h = (hi - lo) / n;
    auto pdf = [s](double x, double m) { return std::exp(-0.5 * (x - m) * (x - m) / (s * s)) / (s * std::sqrt(2 * pi)); };
    auto f = [&](double x) { return std::max(pdf(x, gm) - pdf(x, gr), 0.0); };
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return acc * h / 3.0;
}

inline std::mt19937_64 rng(unsigned long long seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
