#include "skineff/reference_solutions.hpp"

#include <cmath>
#include <stdexcept>

#include "skineff/quadrature.hpp"

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

// Layout shared by the log integral: dense panels around the dispersion
// minimum plus the algebraic tail map.
SpectralGrid log_grid(const PlasmaParams& p, int panel_order) {
  GridSpec spec;
  spec.panel_order = panel_order;
  spec.tail_order = 2 * panel_order;
  spec.growth = 1.5;
  const double cluster = std::max(1.0, std::cbrt(p.alpha * 1.772453850905516));
  const double low_scale = std::sqrt(p.alpha / std::abs(p.z0()));
  spec.first_edge = std::max(1e-5, std::min(cluster / 8.0, low_scale / 8.0));
  spec.tail_start = 60.0 * cluster;
  return build_grid(spec);
}

std::vector<double> unwrap_phase(const PlasmaParams& p, const std::vector<double>& ks) {
  std::vector<double> phase(ks.size());
  double prev = 0.0;  // anchor: arg(k^{-2} L) -> 0 as k -> inf
  for (std::size_t idx = ks.size(); idx-- > 0;) {
    const double k = ks[idx];
    const Complex g = dispersion(k, p) / (k * k);
    double a = std::arg(g);
    a += 2.0 * kPi * std::round((prev - a) / (2.0 * kPi));
    if (idx + 1 < ks.size() && std::abs(a - prev) > 0.5 * kPi)
      throw std::runtime_error("track_branch: sample chain too coarse to unwrap");
    phase[idx] = a;
    prev = a;
  }
  return phase;
}

Complex diffuse_log_integral(const PlasmaParams& p, int panel_order) {
  const SpectralGrid grid = log_grid(p, panel_order);
  const std::vector<double> phase = unwrap_phase(p, grid.nodes);

  // int_0^{e1} splits off the -2 ln k piece in closed form; past e1 the
  // integrand ln|k^{-2}L| + i theta is smooth through the mapped tail.
  const double e1 = grid.panel_edges[1];
  KahanSum total;
  std::size_t i = 0;
  for (; i < static_cast<std::size_t>(grid.panel_order); ++i) {
    const double k = grid.nodes[i];
    const Complex lnL{std::log(std::abs(dispersion(k, p))), phase[i]};
    total.add(grid.weights[i] * lnL);
  }
  total.add(Complex{-2.0 * (e1 * std::log(e1) - e1), 0.0});
  for (; i < grid.size(); ++i) {
    const double k = grid.nodes[i];
    const Complex ln_g{std::log(std::abs(dispersion(k, p))) - 2.0 * std::log(k), phase[i]};
    total.add(grid.weights[i] * ln_g);
  }
  return total.sum;
}

}  // namespace

BranchTracker track_branch(const PlasmaParams& p, const std::vector<double>& k_samples) {
  for (std::size_t i = 0; i + 1 < k_samples.size(); ++i)
    if (!(k_samples[i] > 0.0 && k_samples[i] < k_samples[i + 1]))
      throw std::invalid_argument("track_branch: samples must be positive and ascending");
  BranchTracker tracker;
  tracker.k_samples = k_samples;
  tracker.phase = unwrap_phase(p, k_samples);
  return tracker;
}

Complex impedance_specular(const PlasmaParams& p, double rel_tol) {
  const QuadResult r = integrate_semi_infinite(
      [&](double k) { return 1.0 / dispersion(k, p); }, rel_tol);
  if (!r.converged) throw std::runtime_error("impedance_specular: quadrature did not converge");
  return -2.0 * r.value;
}

Complex impedance_specular_tau(const PlasmaParams& p, double rel_tol) {
  const QuadResult r = integrate_semi_infinite(
      [&](double tau) { return 1.0 / dispersion_tau(tau, p); }, rel_tol);
  if (!r.converged)
    throw std::runtime_error("impedance_specular_tau: quadrature did not converge");
  return -2.0 * r.value;
}

Complex impedance_diffuse(const PlasmaParams& p, int sample_order) {
  if (sample_order > 0) return -kPi * kPi / diffuse_log_integral(p, sample_order);
  // Retry with denser sampling if the phase chain cannot be unwrapped.
  int order = 24;
  for (int attempt = 0; attempt < 3; ++attempt, order *= 2) {
    try {
      return -kPi * kPi / diffuse_log_integral(p, order);
    } catch (const std::runtime_error&) {
      if (attempt == 2) throw;
    }
  }
  throw std::runtime_error("impedance_diffuse: unreachable");
}

}  // namespace skineff
