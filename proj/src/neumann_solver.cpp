#include "skineff/neumann_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "skineff/specfun.hpp"

namespace skineff {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct KahanSum {
  Complex sum{0.0, 0.0};
  Complex carry{0.0, 0.0};
  void add(Complex term) {
    Complex y = term - carry;
    Complex t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void parallel_rows(std::size_t n, const std::function<void(std::size_t)>& work) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += threads) work(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Off-diagonal kernel from cached one-pole values; identical arithmetic to
// kinetic_core::kernel so both paths agree bitwise.
Complex kernel_from_cache(const PlasmaParams& p, double k1, Complex pole1, double k2,
                          Complex pole2) {
  const double s = k1 * k1;
  const double t = k2 * k2;
  if (std::abs(s - t) < 1e-6 * std::max(s, t))
    return kernel_diag(std::sqrt(0.5 * (s + t)), p);
  const Complex denom = p.z0_sq() * (t - s);
  return (-s / denom) * pole1 + (t / denom) * pole2;
}

// ---------------------------------------------------------------------------
// dense complex LU with partial pivoting (the grids stay a few hundred nodes)
// ---------------------------------------------------------------------------

struct LuFactors {
  std::size_t n = 0;
  std::vector<Complex> a;  // row-major, holds L\U
  std::vector<std::size_t> piv;

  void solve(std::vector<Complex>& b) const {
    for (std::size_t i = 0; i < n; ++i) std::swap(b[i], b[piv[i]]);
    for (std::size_t i = 1; i < n; ++i) {
      Complex s = b[i];
      for (std::size_t j = 0; j < i; ++j) s -= a[i * n + j] * b[j];
      b[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = b[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
      b[i] = s / a[i * n + i];
    }
  }

  // Solves A^H x = b (needed by the 1-norm condition estimator).
  void solve_adjoint(std::vector<Complex>& b) const {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = b[i];
      for (std::size_t j = 0; j < i; ++j) s -= std::conj(a[j * n + i]) * b[j];
      b[i] = s / std::conj(a[i * n + i]);
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = b[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= std::conj(a[j * n + i]) * b[j];
      b[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) std::swap(b[i], b[piv[i]]);
  }
};

LuFactors lu_factor(std::vector<Complex> a, std::size_t n) {
  LuFactors lu;
  lu.n = n;
  lu.piv.resize(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double mag = std::abs(a[r * n + col]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (!(best > 0.0)) throw std::runtime_error("solve_direct: singular system");
    lu.piv[col] = pivot;
    if (pivot != col)
      for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
    const Complex inv_diag = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = a[r * n + col] * inv_diag;
      a[r * n + col] = factor;
      for (std::size_t j = col + 1; j < n; ++j) a[r * n + j] -= factor * a[col * n + j];
    }
  }
  lu.a = std::move(a);
  return lu;
}

double one_norm(const std::vector<Complex>& a, std::size_t n) {
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(a[i * n + j]);
    best = std::max(best, col);
  }
  return best;
}

// Hager/Higham estimate of ||A^{-1}||_1 from a handful of solves.
double inverse_one_norm_estimate(const LuFactors& lu) {
  const std::size_t n = lu.n;
  std::vector<Complex> x(n, Complex{1.0 / static_cast<double>(n), 0.0});
  double estimate = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    std::vector<Complex> y = x;
    lu.solve(y);
    double norm1 = 0.0;
    for (const Complex& v : y) norm1 += std::abs(v);
    estimate = std::max(estimate, norm1);
    std::vector<Complex> xi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(y[i]);
      xi[i] = mag > 0.0 ? y[i] / mag : Complex{1.0, 0.0};
    }
    lu.solve_adjoint(xi);
    std::size_t best_j = 0;
    double best_mag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double mag = std::abs(xi[j]);
      if (mag > best_mag) {
        best_mag = mag;
        best_j = j;
      }
    }
    double xh = 0.0;
    for (std::size_t j = 0; j < n; ++j) xh += (xi[j] * std::conj(x[j])).real();
    if (best_mag <= std::abs(xh) * (1.0 + 1e-12)) break;
    std::fill(x.begin(), x.end(), Complex{0.0, 0.0});
    x[best_j] = 1.0;
  }
  return estimate;
}

double power_int(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

}  // namespace

SpectralGrid default_grid(const PlasmaParams& p, GridSpec base) {
  // Cluster where |L| bottoms out: k ~ (alpha sqrt(pi))^{1/3} in the anomalous
  // regime, k ~ sqrt(alpha/|z0|) when alpha is small.
  const double anomalous_scale = std::cbrt(p.alpha * 1.772453850905516);
  const double cluster = std::max(1.0, anomalous_scale);
  const double low_scale = std::sqrt(p.alpha / std::abs(p.z0()));
  base.first_edge = std::max(1e-5, std::min(cluster / 8.0, low_scale / 8.0));
  base.tail_start = 40.0 * cluster;
  return build_grid(base);
}

KernelMatrix build_kernel_matrix(const SpectralGrid& grid, const PlasmaParams& p,
                                 Coupling coupling) {
  const std::size_t n = grid.size();
  KernelMatrix m{grid, p, coupling, {}, {}, {}};
  m.entries.assign(n * n, Complex{0.0, 0.0});
  m.dispersion_on_nodes.resize(n);
  m.one_pole_on_nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.dispersion_on_nodes[i] = dispersion(grid.nodes[i], p);
    m.one_pole_on_nodes[i] = kernel_one_pole(grid.nodes[i], p);
  }
  const Complex prefactor = coupling_constant(coupling) * p.alpha * p.z0_sq();
  parallel_rows(n, [&](std::size_t i) {
    const Complex row_factor = prefactor / m.dispersion_on_nodes[i];
    const double ki = grid.nodes[i];
    for (std::size_t j = 0; j < n; ++j) {
      const Complex kij = kernel_from_cache(p, ki, m.one_pole_on_nodes[i], grid.nodes[j],
                                            m.one_pole_on_nodes[j]);
      m.entries[i * n + j] = row_factor * grid.weights[j] * kij;
    }
  });
  return m;
}

std::vector<Complex> zeroth_iterate(const SpectralGrid& grid, const PlasmaParams& p) {
  std::vector<Complex> e0(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) e0[i] = -2.0 / dispersion(grid.nodes[i], p);
  return e0;
}

std::vector<Complex> next_iterate(const KernelMatrix& m, const std::vector<Complex>& prev) {
  const std::size_t n = m.size();
  if (prev.size() != n) throw std::invalid_argument("next_iterate: vector/grid size mismatch");
  std::vector<Complex> out(n);
  parallel_rows(n, [&](std::size_t i) {
    KahanSum s;
    for (std::size_t j = 0; j < n; ++j) s.add(m.entries[i * n + j] * prev[j]);
    out[i] = s.sum;
  });
  return out;
}

Complex iterate_at(const KernelMatrix& m, const std::vector<Complex>& prev, double k) {
  const std::size_t n = m.size();
  if (prev.size() != n) throw std::invalid_argument("iterate_at: vector/grid size mismatch");
  const Complex pole_k = kernel_one_pole(k, m.params);
  KahanSum s;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex kij = kernel_from_cache(m.params, k, pole_k, m.grid.nodes[j],
                                          m.one_pole_on_nodes[j]);
    s.add(m.grid.weights[j] * kij * prev[j]);
  }
  const Complex prefactor = coupling_constant(m.coupling) * m.params.alpha * m.params.z0_sq();
  return prefactor / dispersion(k, m.params) * s.sum;
}

Complex impedance_term(const SpectralGrid& grid, const std::vector<Complex>& En) {
  return grid.integrate(En);
}

ImpedanceSeries sum_series(const KernelMatrix& m, int max_order) {
  if (max_order < 0) throw std::invalid_argument("sum_series: order must be >= 0");
  ImpedanceSeries series;
  series.q = m.params.q;
  const double weight_base = 1.0 - m.params.q;

  std::vector<Complex> current = zeroth_iterate(m.grid, m.params);
  series.terms.push_back(impedance_term(m.grid, current));
  series.partial_sums.push_back(series.terms[0]);
  for (int n = 1; n <= max_order; ++n) {
    current = next_iterate(m, current);
    const Complex zeta_n = impedance_term(m.grid, current);
    series.terms.push_back(zeta_n);
    series.partial_sums.push_back(series.partial_sums.back() +
                                  power_int(weight_base, n) * zeta_n);
  }

  int growing = 0;
  for (std::size_t n = 0; n + 1 < series.terms.size(); ++n) {
    const double denom = std::abs(series.terms[n]);
    const double ratio = denom > 0.0
                             ? weight_base * std::abs(series.terms[n + 1]) / denom
                             : 0.0;
    growing = ratio >= 1.0 ? growing + 1 : 0;
    if (growing >= 2) series.diverged = true;
  }

  const std::size_t last = series.terms.size() - 1;
  if (last >= 1) {
    const double denom = std::abs(series.terms[last - 1]);
    const double ratio = denom > 0.0
                             ? weight_base * std::abs(series.terms[last]) / denom
                             : 0.0;
    if (ratio < 1.0) {
      series.tail_estimate = std::abs(series.terms[last]) *
                             power_int(weight_base, static_cast<int>(last)) / (1.0 - ratio);
    } else {
      series.tail_estimate = std::numeric_limits<double>::infinity();
      series.diverged = true;
    }
  }
  return series;
}

ImpedanceSeries sum_series(const PlasmaParams& p, int max_order) {
  const KernelMatrix m = build_kernel_matrix(default_grid(p), p);
  return sum_series(m, max_order);
}

DirectSolution solve_direct(const KernelMatrix& m) {
  const std::size_t n = m.size();
  const double weight = 1.0 - m.params.q;
  std::vector<Complex> system(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      system[i * n + j] = (i == j ? Complex{1.0, 0.0} : Complex{0.0, 0.0}) -
                          weight * m.entries[i * n + j];

  const double norm_a = one_norm(system, n);
  const LuFactors lu = lu_factor(std::move(system), n);

  DirectSolution sol;
  sol.field_transform = zeroth_iterate(m.grid, m.params);
  lu.solve(sol.field_transform);
  sol.impedance = impedance_term(m.grid, sol.field_transform);
  sol.condition_estimate = norm_a * inverse_one_norm_estimate(lu);
  return sol;
}

Complex transform_at(const KernelMatrix& m, const std::vector<Complex>& E, double k) {
  const Complex e0 = -2.0 / dispersion(k, m.params);
  const double weight = 1.0 - m.params.q;
  if (weight == 0.0) return e0;
  return e0 + weight * iterate_at(m, E, k);
}

FieldProfile field_profile(const KernelMatrix& m, const std::vector<Complex>& E,
                           std::vector<double> x_nodes) {
  for (double x : x_nodes)
    if (!(x >= 0.0)) throw std::invalid_argument("field_profile: depths must be >= 0");

  // e(x) = -e_s' e^{-x} + (1/pi) int_0^inf [E(k) + 2/(k^2+1)] cos(kx) dk.
  // The subtracted Lorentzian carries the k^{-2} tail of E, so the remainder
  // decays like k^{-4} and the surface gradient lives in the closed form.
  FieldProfile profile;
  profile.x_nodes = std::move(x_nodes);
  profile.e_values.resize(profile.x_nodes.size());
  const auto remainder = [&](double k) { return transform_at(m, E, k) + 2.0 / (k * k + 1.0); };
  for (std::size_t i = 0; i < profile.x_nodes.size(); ++i) {
    const double x = profile.x_nodes[i];
    const QuadResult r = fourier_cos_semi_infinite(remainder, x, 1e-9);
    profile.accuracy_ok = profile.accuracy_ok && r.converged;
    profile.e_values[i] = -std::exp(-x) + r.value / kPi;
  }
  return profile;
}

DistributionSample distribution(const KernelMatrix& m, const std::vector<Complex>& E,
                                double x, double mu) {
  if (!(x >= 0.0)) throw std::invalid_argument("distribution: x must be >= 0");
  if (mu == 0.0) throw std::invalid_argument("distribution: mu must be nonzero");

  const Complex z0 = m.params.z0();
  const Complex z0sq = m.params.z0_sq();
  const double musq = mu * mu;
  const double abs_mu = std::abs(mu);

  // Incoming amplitude P(mu) = (z0/pi) int_0^inf E(k) dk / (z0^2 + k^2 mu^2).
  KahanSum p_sum;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double k = m.grid.nodes[j];
    p_sum.add(m.grid.weights[j] * E[j] / (z0sq + k * k * musq));
  }
  const Complex incoming = z0 / kPi * p_sum.sum;

  // E-driven part; the constant boundary piece of the bracket has the closed
  // form -(1-q) P(mu) e^{-z0 x/mu} theta(mu > 0) after the k-integrals.
  const auto cos_part = [&](double k) {
    return z0 * transform_at(m, E, k) / (z0sq + k * k * musq);
  };
  const auto sin_part = [&](double k) {
    return k * mu * transform_at(m, E, k) / (z0sq + k * k * musq);
  };
  const QuadResult rc = fourier_cos_semi_infinite(cos_part, x, 1e-8);
  const QuadResult rs = fourier_sin_semi_infinite(sin_part, x, 1e-8);
  Complex h = (rc.value + rs.value) / kPi;
  if (mu > 0.0) h -= (1.0 - m.params.q) * incoming * std::exp(-z0 * x / abs_mu);
  return {h, rc.converged && rs.converged};
}

}  // namespace skineff
