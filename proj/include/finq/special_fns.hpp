#pragma once

namespace finq {

// Bessel functions of the first and second kind, orders 0 and 1, real argument.
double bessel_j(int n, double x);
double bessel_y(int n, double x);

// si(x) = Si(x) - pi/2, so si(0) = -pi/2 and si(x) -> 0 for large x.
double sine_integral_si(double x);

enum class RangeFlavor { coupling, relaxation };

struct RangeFunctionKind {
    int dimensionality = 1;
    RangeFlavor flavor = RangeFlavor::coupling;
};

// F1' = si(2x), F2' = J0 Y0 + J1 Y1, G1' = (1 - cos 2x)/2, G2' = 1 - J0^2.
double range_function(RangeFunctionKind kind, double x);

inline double F_prime(int d, double x) { return range_function({d, RangeFlavor::coupling}, x); }
inline double G_prime(int d, double x) { return range_function({d, RangeFlavor::relaxation}, x); }

}  // namespace finq
