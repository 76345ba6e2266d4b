#ifndef SKINEFF_NEUMANN_SOLVER_HPP
#define SKINEFF_NEUMANN_SOLVER_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "skineff/kinetic_core.hpp"
#include "skineff/quadrature.hpp"

namespace skineff {

// Discretized integral operator of the field equation on a shared k-grid:
//   M[i][j] = c alpha z0^2 w_j K(k_i, k_j) / L(k_i),
// so that E_n = M E_{n-1} realizes one series iteration.
struct KernelMatrix {
  SpectralGrid grid;
  PlasmaParams params;
  Coupling coupling;
  std::vector<Complex> entries;             // row-major, size() x size()
  std::vector<Complex> dispersion_on_nodes; // L(k_i)
  std::vector<Complex> one_pole_on_nodes;   // int e^{-u}/(z0^2+k_i^2 u) du

  std::size_t size() const { return grid.size(); }
  Complex at(std::size_t i, std::size_t j) const { return entries[i * size() + j]; }
};

// Grid layout adapted to the parameters: panels cluster around the scale where
// |L| is smallest and the tail starts well beyond it.
SpectralGrid default_grid(const PlasmaParams& p, GridSpec base = GridSpec{});

KernelMatrix build_kernel_matrix(const SpectralGrid& grid, const PlasmaParams& p,
                                 Coupling coupling = kDefaultCoupling);

// Zeroth series iterate E_0(k_i) = -2 e_s' / L(k_i) with e_s' = 1.
std::vector<Complex> zeroth_iterate(const SpectralGrid& grid, const PlasmaParams& p);

// E_n = M E_{n-1}; deterministic ascending-index summation.
std::vector<Complex> next_iterate(const KernelMatrix& m, const std::vector<Complex>& prev);

// One iteration evaluated at an arbitrary k > 0 (the natural Nystrom
// interpolation of the discrete operator applied to `prev`).
Complex iterate_at(const KernelMatrix& m, const std::vector<Complex>& prev, double k);

// zeta_n = sum_i w_i E_n(k_i); the physical impedance is (4 i omega l / c^2) zeta.
Complex impedance_term(const SpectralGrid& grid, const std::vector<Complex>& En);

struct ImpedanceSeries {
  std::vector<Complex> terms;         // zeta_0 ... zeta_N
  double q = 0.0;
  std::vector<Complex> partial_sums;  // sequential sums of (1-q)^n terms[n]
  double tail_estimate = 0.0;
  bool diverged = false;

  Complex total() const { return partial_sums.back(); }
};

ImpedanceSeries sum_series(const KernelMatrix& m, int max_order);
ImpedanceSeries sum_series(const PlasmaParams& p, int max_order);

struct DirectSolution {
  std::vector<Complex> field_transform;  // E(k_i) solving (I - (1-q)M) E = E_0
  Complex impedance;                     // zeta = sum_i w_i E(k_i)
  double condition_estimate;             // 1-norm estimate of cond(I - (1-q)M)
};

// Direct Fredholm solve; the series limit whenever the series converges.
DirectSolution solve_direct(const KernelMatrix& m);

// Pointwise E(k) reconstructed from a solved transform:
//   E(k) = E_0(k) + (1-q) [M E](k).
Complex transform_at(const KernelMatrix& m, const std::vector<Complex>& E, double k);

struct FieldProfile {
  std::vector<double> x_nodes;     // depths in mean free paths
  std::vector<Complex> e_values;   // e(x)/e_s'
  double e_s_prime = 1.0;
  bool accuracy_ok = true;
};

// Fourier-cosine reconstruction e(x) = (1/pi) int_0^inf E(k) cos(kx) dk with a
// closed-form split that carries the surface gradient exactly.
FieldProfile field_profile(const KernelMatrix& m, const std::vector<Complex>& E,
                           std::vector<double> x_nodes);

struct DistributionSample {
  Complex value;
  bool accuracy_ok = true;
};

// Distribution correction h(x, mu) for x >= 0, mu != 0.
DistributionSample distribution(const KernelMatrix& m, const std::vector<Complex>& E,
                                double x, double mu);

}  // namespace skineff

#endif
