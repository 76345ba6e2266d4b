#ifndef SKINEFF_QUADRATURE_HPP
#define SKINEFF_QUADRATURE_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace skineff {

using Complex = std::complex<double>;

struct QuadResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Adaptive evaluation of int_0^inf f(k) dk for a decaying complex integrand.
// The half line is mapped onto (0,1] twice (identity below 1, k = 1/t above)
// and refined with an embedded Gauss pair.  Throws std::runtime_error if the
// integrand produces a non-finite value; budget exhaustion is reported through
// converged = false with the best estimate kept.
QuadResult integrate_semi_infinite(const std::function<Complex(double)>& f,
                                   double rel_tol, int max_intervals = 4000);

// int_0^inf f(k) cos(kx) dk and int_0^inf f(k) sin(kx) dk for x >= 0.
// Large x is handled by summing half-period panels with Wynn epsilon
// acceleration of the partial sums.
QuadResult fourier_cos_semi_infinite(const std::function<Complex(double)>& f,
                                     double x, double rel_tol);
QuadResult fourier_sin_semi_infinite(const std::function<Complex(double)>& f,
                                     double x, double rel_tol);

// Panel/tail layout for the shared k-grid.  Finite panels carry Gauss-Legendre
// rules; beyond tail_start the substitution k = tail_start/t maps the rest of
// the axis onto (0,1).
struct GridSpec {
  int panel_order = 24;    // Gauss points per finite panel
  int tail_order = 32;     // Gauss points on the mapped tail
  double first_edge = 0.125;
  double growth = 1.7;     // geometric ratio of consecutive panel widths
  double tail_start = 40.0;
};

enum class TailMap { algebraic };  // k = tail_start / t

struct SpectralGrid {
  std::vector<double> nodes;       // strictly increasing, all > 0
  std::vector<double> weights;     // tail weights include the map Jacobian
  std::vector<double> panel_edges; // ascending, panel_edges.front() == 0
  double tail_start = 0.0;
  TailMap tail_map = TailMap::algebraic;
  int panel_order = 0;
  int tail_order = 0;

  std::size_t size() const { return nodes.size(); }

  // Fixed ascending-node compensated sum; bit-identical for identical inputs.
  Complex integrate(const std::vector<Complex>& f_on_nodes) const;

  template <typename F>
  Complex integrate_fn(F&& f) const {
    std::vector<Complex> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = f(nodes[i]);
    return integrate(vals);
  }
};

// Deterministic construction; throws std::invalid_argument on a bad spec.
SpectralGrid build_grid(const GridSpec& spec);

// Gauss-Legendre rule on (-1, 1), nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace skineff

#endif
