#include "finq/noise_fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "finq/constants.hpp"
#include "finq/errors.hpp"

namespace finq {

namespace {

constexpr double kBoltzmannJ = 1.380649e-23;  // J/K

double gauss(double x, double mu, double s) {
    const double u = (x - mu) / s;
    return std::exp(-0.5 * u * u) / (s * std::sqrt(2.0 * kPi));
}

}  // namespace

void NoiseEnv::validate() const {
    require(std::isfinite(V_D) && V_D > 0.0, "NoiseEnv: V_D must be > 0");
    require(std::isfinite(df) && df > 0.0, "NoiseEnv: df must be > 0");
    require(std::isfinite(T) && T >= 0.0, "NoiseEnv: T must be >= 0");
    require(std::isfinite(g) && g >= 0.0, "NoiseEnv: g must be >= 0");
}

double to_g_prime(double g) { return 2.0 * g; }
double from_g_prime(double g_prime) { return 0.5 * g_prime; }

double shot_psd_coefficient(double V_D) { return 2.0 * kConst.e_charge * V_D / kConst.R_K; }

double shot_dg_coefficient(double df) { return std::sqrt(2.0 * kConst.e_charge * kConst.R_K * df); }

double thermal_dg_coefficient(double T, double df) { return std::sqrt(4.0 * kBoltzmannJ * T * kConst.R_K * df); }

NoiseLevel shot_noise(const NoiseEnv& env) {
    env.validate();
    const double gp = to_g_prime(env.g);
    NoiseLevel n{};
    n.psd = shot_psd_coefficient(env.V_D) * gp;
    n.dg_prime = shot_dg_coefficient(env.df) * std::sqrt(gp / env.V_D);
    n.dg = from_g_prime(n.dg_prime);
    return n;
}

NoiseLevel thermal_noise(const NoiseEnv& env) {
    env.validate();
    const double gp = to_g_prime(env.g);
    NoiseLevel n{};
    n.psd = 4.0 * kBoltzmannJ * env.T * gp / kConst.R_K;
    n.dg_prime = thermal_dg_coefficient(env.T, env.df) * std::sqrt(gp) / env.V_D;
    n.dg = from_g_prime(n.dg_prime);
    return n;
}

double shot_threshold_siemens(const NoiseEnv& env) {
    env.validate();
    return 2.0 * kConst.e_charge * env.df / env.V_D;
}

double measurement_fidelity(double g_meas, double g_ref, double sigma) {
    require(std::isfinite(sigma) && sigma > 0.0, "measurement_fidelity: sigma must be > 0");
    require(std::isfinite(g_meas) && std::isfinite(g_ref), "measurement_fidelity: non-finite conductance");
    return std::erf(std::abs(g_meas - g_ref) / (2.0 * std::sqrt(2.0) * sigma));
}

double measurement_fidelity_quadrature(double g_meas, double g_ref, double sigma_meas, double sigma_ref) {
    require(sigma_meas > 0.0 && sigma_ref > 0.0, "measurement_fidelity_quadrature: sigmas must be > 0");
    require(std::isfinite(g_meas) && std::isfinite(g_ref), "measurement_fidelity_quadrature: non-finite conductance");
    const double smax = std::max(sigma_meas, sigma_ref);
    const double lo = std::min(g_meas, g_ref) - 12.0 * smax;
    const double hi = std::max(g_meas, g_ref) + 12.0 * smax;

    // Breakpoints where the two densities cross, so each piece has a fixed sign.
    std::vector<double> cuts{lo, hi};
    const double a = 1.0 / (sigma_ref * sigma_ref) - 1.0 / (sigma_meas * sigma_meas);
    const double b = 2.0 * (g_meas / (sigma_meas * sigma_meas) - g_ref / (sigma_ref * sigma_ref));
    const double c = g_ref * g_ref / (sigma_ref * sigma_ref) - g_meas * g_meas / (sigma_meas * sigma_meas) +
                     2.0 * std::log(sigma_ref / sigma_meas);
    // a x^2 + b x + c = 0 from log P_meas = log P_ref (multiplied by -2, sign flipped)
    if (std::abs(a) < 1e-300) {
        if (b != 0.0) cuts.push_back(-c / b);
    } else {
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            const double r = std::sqrt(disc);
            cuts.push_back((-b + r) / (2.0 * a));
            cuts.push_back((-b - r) / (2.0 * a));
        }
    }
    // extra cuts at the means keep the Gaussian peaks well resolved
    cuts.push_back(g_meas);
    cuts.push_back(g_ref);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double x) { return x < lo || x > hi; }), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto f = [&](double x) { return std::max(gauss(x, g_meas, sigma_meas) - gauss(x, g_ref, sigma_ref), 0.0); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] <= cuts[k]) continue;
        total += GK::integrate(f, cuts[k], cuts[k + 1], 10, 1e-11);
    }
    return std::min(std::max(total, 0.0), 1.0);
}

double snr(double g_meas, double g_ref, const NoiseEnv& env) {
    NoiseEnv e = env;
    e.g = std::max(g_meas, g_ref);
    const double dg = shot_noise(e).dg;
    if (dg == 0.0) return 0.0;
    return std::abs(g_meas - g_ref) / dg;
}

}  // namespace finq
