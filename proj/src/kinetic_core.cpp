#include "skineff/kinetic_core.hpp"

#include <cmath>
#include <stdexcept>

#include "skineff/specfun.hpp"

namespace skineff {
namespace {

constexpr double kSqrtPi = 1.772453850905516027298167483341145183;
constexpr double kPi = 3.141592653589793238462643383279502884;
const Complex kImag{0.0, 1.0};

void require_positive(double k, const char* who) {
  if (!(k > 0.0)) throw std::domain_error(std::string(who) + ": wavenumber must be positive");
}

}  // namespace

PlasmaParams::PlasmaParams(double omega_over_nu_, double alpha_, double q_)
    : omega_over_nu(omega_over_nu_), alpha(alpha_), q(q_) {
  if (!(omega_over_nu >= 0.0))
    throw std::invalid_argument("PlasmaParams: omega/nu must be >= 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("PlasmaParams: alpha must be > 0");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("PlasmaParams: q must lie in [0,1]");
}

Complex dispersion(double k, const PlasmaParams& p) {
  if (k < 0.0) throw std::domain_error("dispersion: wavenumber must be >= 0");
  const Complex z0 = p.z0();
  if (k == 0.0) return -kImag * p.alpha / z0;
  return k * k - kImag * (p.alpha * kSqrtPi / k) * scaled_erfc(z0 / k);
}

Complex dispersion_tau(double tau, const PlasmaParams& p) {
  if (!(tau > 0.0)) throw std::domain_error("dispersion_tau: tau must be positive");
  const Complex z0 = p.z0();
  return 1.0 - kImag * kSqrtPi * p.alpha * tau * tau * tau * scaled_erfc(z0 * tau);
}

Complex kernel_one_pole(double k, const PlasmaParams& p) {
  require_positive(k, "kernel_one_pole");
  const Complex x = p.z0_sq() / (k * k);
  return exp_e1_scaled(x) / (k * k);
}

Complex kernel_diag(double k, const PlasmaParams& p) {
  require_positive(k, "kernel_diag");
  const Complex z0sq = p.z0_sq();
  const Complex x = z0sq / (k * k);
  // int e^{-u}/(z0^2+k^2 u)^2 du = (1 - x e^x E1(x)) / (z0^2 k^2)
  return exp_e1_scaled_diff(x) / (z0sq * k * k);
}

Complex kernel(double k1, double k2, const PlasmaParams& p) {
  require_positive(k1, "kernel");
  require_positive(k2, "kernel");
  const double s = k1 * k1;
  const double t = k2 * k2;
  if (std::abs(s - t) < 1e-6 * std::max(s, t))
    return kernel_diag(std::sqrt(0.5 * (s + t)), p);
  const Complex z0sq = p.z0_sq();
  const Complex denom = z0sq * (t - s);
  const Complex a = -s / denom;
  const Complex b = t / denom;
  return a * kernel_one_pole(k1, p) + b * kernel_one_pole(k2, p);
}

Complex coupling_constant(Coupling c) {
  const double inv_pi_3_2 = 1.0 / (kPi * kSqrtPi);
  switch (c) {
    case Coupling::derived:
      return Complex{0.0, -inv_pi_3_2};
    case Coupling::alternate:
      return Complex{0.0, -2.0 * inv_pi_3_2};
  }
  throw std::invalid_argument("coupling_constant: unknown switch value");
}

}  // namespace skineff
