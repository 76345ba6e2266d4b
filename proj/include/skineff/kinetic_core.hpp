#ifndef SKINEFF_KINETIC_CORE_HPP
#define SKINEFF_KINETIC_CORE_HPP

#include <complex>

namespace skineff {

using Complex = std::complex<double>;

// Dimensionless problem parameters.  Lengths are measured in mean free paths,
// frequencies in collision frequencies; alpha = 2 (l/delta)^2 compares the
// mean free path with the normal-skin-effect penetration depth, and q is the
// fraction of electrons reflected specularly at the surface.
struct PlasmaParams {
  double omega_over_nu;
  double alpha;
  double q;

  PlasmaParams(double omega_over_nu_, double alpha_, double q_);

  Complex z0() const { return Complex(1.0, -omega_over_nu); }
  Complex z0_sq() const { Complex z = z0(); return z * z; }
};

// Dispersion function L(k) = k^2 - i (alpha sqrt(pi)/k) S(z0/k), the Fourier
// symbol of the field-kinetic system.  k = 0 returns the limit -i alpha / z0.
Complex dispersion(double k, const PlasmaParams& p);

// Reduced form lambda(i z0 tau) = 1 - i sqrt(pi) alpha tau^3 S(z0 tau),
// satisfying L(k) = k^2 lambda(i z0 / k).
Complex dispersion_tau(double tau, const PlasmaParams& p);

// One-pole exponential kernel  int_0^inf e^{-u} / (z0^2 + k^2 u) du.
Complex kernel_one_pole(double k, const PlasmaParams& p);

// Coupling kernel  K(k1,k2) = int_0^inf e^{-u} du / ((z0^2+k1^2 u)(z0^2+k2^2 u)),
// reduced by partial fractions to one-pole kernels away from the diagonal and
// routed to kernel_diag inside the guard band |k1^2-k2^2| < 1e-6 max(k1^2,k2^2).
Complex kernel(double k1, double k2, const PlasmaParams& p);

// Diagonal limit  K(k,k) = int_0^inf e^{-u} / (z0^2 + k^2 u)^2 du.
Complex kernel_diag(double k, const PlasmaParams& p);

// Constant multiplying alpha z0^2 (1-q) int K(k,k1) E(k1) dk1 in the field
// equation.  `derived` = -i/pi^{3/2} comes from folding the boundary term
// through the Gaussian velocity average; `alternate` = -2i/pi^{3/2} keeps the
// extra factor 2 a Gaussian-weight (e^{-u^2}) reduction of the kernel would
// produce.  The diffuse-limit oracle selects the shipped default.
enum class Coupling { derived, alternate };

Complex coupling_constant(Coupling c);

inline constexpr Coupling kDefaultCoupling = Coupling::derived;

}  // namespace skineff

#endif
