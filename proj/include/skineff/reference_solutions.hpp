#ifndef SKINEFF_REFERENCE_SOLUTIONS_HPP
#define SKINEFF_REFERENCE_SOLUTIONS_HPP

#include <complex>
#include <vector>

#include "skineff/kinetic_core.hpp"

namespace skineff {

// Continuous argument of k^{-2} L(k) along a k-sample chain, anchored at 0 for
// k -> inf where k^{-2} L -> 1.  Pointwise principal-branch logs jump by 2 pi
// once Re(k^{-2} L) goes negative at large alpha; the chain removes that.
struct BranchTracker {
  std::vector<double> k_samples;  // ascending
  std::vector<double> phase;      // unwrapped arg(k^{-2} L(k_i))
};

// Throws std::runtime_error if adjacent samples are too coarse to unwrap.
BranchTracker track_branch(const PlasmaParams& p, const std::vector<double>& k_samples);

// Exact specular (q = 1) impedance, zeta_ref = -2 int_0^inf dk / L(k).
Complex impedance_specular(const PlasmaParams& p, double rel_tol = 1e-11);

// Same quantity through the tau parametrization, -2 int_0^inf dtau / lambda(i z0 tau).
Complex impedance_specular_tau(const PlasmaParams& p, double rel_tol = 1e-11);

// Exact diffuse (q = 0) impedance,
//   zeta_dif = -pi^2 / int_0^inf ln(k^{-2} L(k)) dk,
// with the logarithm on the tracked branch.  The constant is normalized so the
// specular and diffuse values coincide in the alpha -> 0 (local) limit.
// sample_order 0 picks the default density and retries on unwrap failure;
// an explicit value fixes the per-panel sample count (refinement studies).
Complex impedance_diffuse(const PlasmaParams& p, int sample_order = 0);

}  // namespace skineff

#endif
