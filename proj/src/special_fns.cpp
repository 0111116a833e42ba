#include "finq/special_fns.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "finq/constants.hpp"
#include "finq/errors.hpp"

namespace finq {

namespace {

// Below this the power series is used; above it the Hankel expansion.
constexpr double kSeriesMax = 13.0;

void check_order(int n, const char* who) {
    require(n == 0 || n == 1, std::string(who) + ": order must be 0 or 1");
}

double j_series(int n, double x) {
    const double q = 0.25 * x * x;
    double term = (n == 0) ? 1.0 : 0.5 * x;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (double(k) * double(k + n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > 2) break;
    }
    return sum;
}

// Y0 = (2/pi)[ln(x/2)+gamma] J0 + (2/pi) sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k/(k!)^2
double y0_series(double x) {
    const double q = 0.25 * x * x;
    double t = 1.0;
    double H = 0.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        t *= -q / (double(k) * double(k));
        H += 1.0 / k;
        const double add = -t * H;
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum) && k > 2) break;
    }
    return (2.0 / kPi) * ((std::log(0.5 * x) + kEulerGamma) * j_series(0, x) + sum);
}

// Y1 = -2/(pi x) + (2/pi) ln(x/2) J1
//      - (1/pi) sum_{k>=0} (-1)^k [psi(k+1)+psi(k+2)] (x/2)^{2k+1}/(k!(k+1)!)
double y1_series(double x) {
    const double h = 0.5 * x;
    const double q = h * h;
    double t = h;  // (x/2)^{2k+1}/(k!(k+1)!) with sign
    double psi1 = -kEulerGamma;        // psi(k+1)
    double psi2 = 1.0 - kEulerGamma;   // psi(k+2)
    double sum = t * (psi1 + psi2);
    for (int k = 1; k < 200; ++k) {
        t *= -q / (double(k) * double(k + 1));
        psi1 += 1.0 / k;
        psi2 += 1.0 / (k + 1);
        const double add = t * (psi1 + psi2);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum) && k > 2) break;
    }
    return -2.0 / (kPi * x) + (2.0 / kPi) * std::log(h) * j_series(1, x) - sum / kPi;
}

// Hankel asymptotic P, Q for order n; stops at the smallest term.
void hankel_pq(int n, double x, double& P, double& Q) {
    const double mu = 4.0 * n * n;
    const double z = 8.0 * x;
    P = 1.0;
    Q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 60; ++k) {
        const double f = (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (double(k) * z);
        const double next = term * f;
        if (std::abs(next) > last) break;
        last = std::abs(next);
        term = next;
        // k odd -> Q, k even -> P, signs alternate in pairs
        if (k % 2 == 1)
            Q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
        else
            P += ((k / 2) % 2 == 1 ? -1.0 : 1.0) * term;
        if (last < 1e-18) break;
    }
}

double hankel(int n, double x, bool second_kind) {
    double P = 0, Q = 0;
    hankel_pq(n, x, P, Q);
    const double chi = x - (0.5 * n + 0.25) * kPi;
    const double amp = std::sqrt(2.0 / (kPi * x));
    if (second_kind) return amp * (P * std::sin(chi) + Q * std::cos(chi));
    return amp * (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace

double bessel_j(int n, double x) {
    check_order(n, "bessel_j");
    require(std::isfinite(x), "bessel_j: non-finite argument");
    const double ax = std::abs(x);
    const double v = (ax <= kSeriesMax) ? j_series(n, ax) : hankel(n, ax, false);
    return (n == 1 && x < 0) ? -v : v;
}

double bessel_y(int n, double x) {
    check_order(n, "bessel_y");
    require(std::isfinite(x), "bessel_y: non-finite argument");
    if (x <= 0.0) throw DomainError("bessel_y: argument must be > 0 (Y_n is singular at x <= 0)");
    if (x > kSeriesMax) return hankel(n, x, true);
    return n == 0 ? y0_series(x) : y1_series(x);
}

double sine_integral_si(double x) {
    require(std::isfinite(x) && x >= 0.0, "sine_integral_si: x must be >= 0");
    if (x <= 4.0) {
        // Si(x) = sum (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
        double t = x;
        double sum = x;
        const double xx = x * x;
        for (int k = 1; k < 100; ++k) {
            t *= -xx / (double(2 * k) * double(2 * k + 1));
            const double add = t / (2 * k + 1);
            sum += add;
            if (std::abs(add) < 1e-18) break;
        }
        return sum - 0.5 * kPi;
    }
    // Lentz continued fraction for E1(ix); si(x) = Im[e^{-ix} CF]
    using cd = std::complex<double>;
    const double tiny = 1e-300;
    cd b(1.0, x);
    cd c = 1.0 / tiny;
    cd d = 1.0 / b;
    cd h = d;
    for (int i = 2; i < 1000; ++i) {
        const double a = -double(i - 1) * double(i - 1);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cd del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    h *= cd(std::cos(x), -std::sin(x));
    return h.imag();
}

double range_function(RangeFunctionKind kind, double x) {
    require(kind.dimensionality == 1 || kind.dimensionality == 2,
            "range_function: dimensionality must be 1 or 2");
    require(std::isfinite(x) && x >= 0.0, "range_function: x must be >= 0");
    if (kind.flavor == RangeFlavor::coupling) {
        if (kind.dimensionality == 1) return sine_integral_si(2.0 * x);
        if (x == 0.0) throw DomainError("range_function: F2'(0) is singular (Y0 at 0)");
        return bessel_j(0, x) * bessel_y(0, x) + bessel_j(1, x) * bessel_y(1, x);
    }
    if (kind.dimensionality == 1) return 0.5 * (1.0 - std::cos(2.0 * x));
    const double j0 = bessel_j(0, x);
    return 1.0 - j0 * j0;
}

}  // namespace finq
