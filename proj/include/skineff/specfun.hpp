#ifndef SKINEFF_SPECFUN_HPP
#define SKINEFF_SPECFUN_HPP

#include <complex>

namespace skineff {

using Complex = std::complex<double>;

// Scaled complementary error function S(a) = exp(a^2) erfc(a), Re(a) > 0.
//
// Satisfies  int_0^inf exp(-t^2)/(t^2 + a^2) dt = pi/(2a) * S(a)
// and the ODE S'(a) = 2a S(a) - 2/sqrt(pi), S(0) = 1.
//
// Throws std::domain_error for Re(a) <= 0 and std::overflow_error if an
// internal scale cannot be represented.
Complex scaled_erfc(Complex a);

// Principal-branch exponential integral E1(z) = int_z^inf exp(-s)/s ds.
// Throws std::domain_error at z = 0 and on the cut (negative real axis).
Complex exp_e1(Complex z);

// exp(z) * E1(z).  Never forms exp(z) outside the small-|z| region, so it is
// usable for |z| far beyond the range where E1 itself under/overflows.
Complex exp_e1_scaled(Complex z);

// 1 - z * exp(z) * E1(z), evaluated without the cancellation the direct
// difference suffers for large |z| (where z e^z E1(z) -> 1).
Complex exp_e1_scaled_diff(Complex z);

}  // namespace skineff

#endif
