#include "finq/constants.hpp"

#include <cmath>

#include "finq/errors.hpp"

namespace finq {

double zeeman_splitting(double B, double g) {
    require(std::isfinite(B) && B >= 0.0, "zeeman_splitting: B must be >= 0");
    return g * kConst.mu_B * B;
}

double energy_to_temperature(double E) {
    require(std::isfinite(E) && E >= 0.0, "energy_to_temperature: E must be >= 0");
    return E / kConst.k_B;
}

double temperature_to_energy(double T) {
    require(std::isfinite(T) && T >= 0.0, "temperature_to_energy: T must be >= 0");
    return kConst.k_B * T;
}

double larmor_angular(double B, double g) { return zeeman_splitting(B, g) / kConst.hbar; }

double larmor_frequency(double B, double g) { return larmor_angular(B, g) / (2.0 * kPi); }

double angular_to_energy(double omega) {
    require(std::isfinite(omega) && omega >= 0.0, "angular_to_energy: omega must be >= 0");
    return kConst.hbar * omega;
}

}  // namespace finq
