#include "skineff/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace skineff {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrtPi = 1.772453850905516027298167483341145183;
constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

// Compensated (Kahan) accumulator; the series below alternate in sign.
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

bool is_finite(Complex v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

// exp(w) - 1 without the cancellation the direct form has near w = 0.
Complex complex_expm1(Complex w) {
  const double em1 = std::expm1(w.real());
  const double s = std::sin(0.5 * w.imag());
  return {em1 * std::cos(w.imag()) - 2.0 * s * s, (em1 + 1.0) * std::sin(w.imag())};
}

// ---------------------------------------------------------------------------
// scaled_erfc
// ---------------------------------------------------------------------------

// Trapezoidal sampling of int_-inf^inf e^{-t^2}/(t^2+a^2) dt = (pi/a) S(a).
// With step h the Poisson tail is O(e^{-pi^2/h^2}) and the pole images sum to
// the closed geometric correction, so the truncated sum is machine-accurate
// throughout Re(a) > 0 as long as exp(a^2) is representable.
Complex scaled_erfc_sampled(Complex a) {
  constexpr double h = 0.4;
  constexpr int n_terms = 17;  // exp(-(n h)^2) < 1e-20 beyond this
  const Complex a2 = a * a;
  KahanSum s;
  s.add(1.0 / a2);
  for (int n = 1; n <= n_terms; ++n) {
    const double t = n * h;
    s.add(2.0 * std::exp(-t * t) / (t * t + a2));
  }
  const Complex trapezoid = (a / kPi) * (h * s.sum);
  const Complex image = 2.0 * std::exp(a2) / complex_expm1(2.0 * kPi * a / h);
  return trapezoid - image;
}

// Laplace continued fraction
//   sqrt(pi) S(a) = 1/(a + (1/2)/(a + 1/(a + (3/2)/(a + ...)))),
// modified Lentz evaluation; rapidly convergent once |a| is moderately large.
Complex scaled_erfc_cf(Complex a) {
  constexpr double tiny = 1e-290;
  Complex f{tiny, 0.0}, c{tiny, 0.0}, d{0.0, 0.0};
  for (int n = 1; n <= 500; ++n) {
    const Complex an = (n == 1) ? Complex{1.0, 0.0} : Complex{0.5 * (n - 1), 0.0};
    d = a + an * d;
    if (std::abs(d) < tiny) d = tiny;
    c = a + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-15) return f / kSqrtPi;
  }
  throw std::runtime_error("scaled_erfc: continued fraction did not converge");
}

// ---------------------------------------------------------------------------
// exp_e1 family
// ---------------------------------------------------------------------------

enum class E1Region { series, fraction, asymptotic };

// The power series is stable wherever the result is not exponentially smaller
// than the largest term, i.e. when |z| + Re(z) stays small; the continued
// fraction covers the right half plane and everything far from the cut; the
// optimally truncated asymptotic series handles large |z| near the cut.
E1Region pick_region(Complex z) {
  const double r = std::abs(z);
  if (r <= 3.0) return E1Region::series;
  if (z.real() < 0.0 && r + z.real() <= 6.0)
    return r < 40.0 ? E1Region::series : E1Region::asymptotic;
  if (r >= 40.0 && std::abs(std::arg(z)) > 2.8) return E1Region::asymptotic;
  return E1Region::fraction;
}

// E1(z) = -gamma - ln z + sum_{n>=1} (-1)^{n+1} z^n / (n n!)
Complex e1_series(Complex z) {
  KahanSum s;
  Complex power_over_fact{1.0, 0.0};  // z^n / n!
  double scale = 1.0;
  for (int n = 1; n <= 600; ++n) {
    power_over_fact *= z / static_cast<double>(n);
    const Complex term = ((n & 1) ? power_over_fact : -power_over_fact) / static_cast<double>(n);
    s.add(term);
    scale = std::max(scale, std::abs(s.sum));
    if (std::abs(term) < 1e-18 * scale) break;
  }
  return -kEulerGamma - std::log(z) + s.sum;
}

// e^z E1(z) = 1/(z+1 - 1/(z+3 - 4/(z+5 - 9/(z+7 - ...)))).  Returns the whole
// fraction; `from_level` = 1 gives the full value, 2 gives the inner tail used
// by the diagonal helper.
Complex e1_cf_tail(Complex z, int from_level) {
  constexpr double tiny = 1e-290;
  Complex f{tiny, 0.0}, c{tiny, 0.0}, d{0.0, 0.0};
  for (int m = 0; m < 600; ++m) {
    const int n = from_level + m;
    const Complex an = (m == 0) ? Complex{1.0, 0.0}
                                : Complex{-static_cast<double>(n - 1) * (n - 1), 0.0};
    const Complex bn = z + static_cast<double>(2 * n - 1);
    d = bn + an * d;
    if (std::abs(d) < tiny) d = tiny;
    c = bn + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-15) return f;
  }
  throw std::runtime_error("exp_e1: continued fraction did not converge");
}

// Optimally truncated e^z E1(z) ~ sum_{n>=0} (-1)^n n! / z^{n+1}.
Complex e1_scaled_asymptotic(Complex z) {
  const Complex inv = 1.0 / z;
  Complex term = inv;
  KahanSum s;
  s.add(term);
  double prev = std::abs(term);
  for (int n = 1; n <= 400; ++n) {
    term *= -static_cast<double>(n) * inv;
    const double mag = std::abs(term);
    if (mag >= prev) break;  // past the optimal truncation point
    s.add(term);
    if (mag < 1e-18 * std::abs(s.sum)) break;
    prev = mag;
  }
  return s.sum;
}

// 1 - z e^z E1(z) ~ sum_{n>=1} (-1)^{n-1} n! / z^n.
Complex e1_scaled_diff_asymptotic(Complex z) {
  const Complex inv = 1.0 / z;
  Complex term = inv;
  KahanSum s;
  s.add(term);
  double prev = std::abs(term);
  for (int n = 2; n <= 400; ++n) {
    term *= -static_cast<double>(n) * inv;
    const double mag = std::abs(term);
    if (mag >= prev) break;
    s.add(term);
    if (mag < 1e-18 * std::abs(s.sum)) break;
    prev = mag;
  }
  return s.sum;
}

void check_e1_domain(Complex z) {
  if (z == Complex{0.0, 0.0}) throw std::domain_error("exp_e1: z = 0");
  if (z.imag() == 0.0 && z.real() < 0.0)
    throw std::domain_error("exp_e1: z on the branch cut (negative real axis)");
}

}  // namespace

Complex scaled_erfc(Complex a) {
  if (!is_finite(a)) throw std::domain_error("scaled_erfc: non-finite argument");
  if (a.real() <= 0.0) throw std::domain_error("scaled_erfc: Re(a) <= 0");
  const Complex result = (std::abs(a) < 12.0) ? scaled_erfc_sampled(a) : scaled_erfc_cf(a);
  if (!is_finite(result)) throw std::overflow_error("scaled_erfc: result not representable");
  return result;
}

Complex exp_e1(Complex z) {
  check_e1_domain(z);
  Complex result;
  switch (pick_region(z)) {
    case E1Region::series:
      result = e1_series(z);
      break;
    case E1Region::fraction:
      result = std::exp(-z) * e1_cf_tail(z, 1);
      break;
    case E1Region::asymptotic:
      result = std::exp(-z) * e1_scaled_asymptotic(z);
      break;
  }
  if (!is_finite(result)) throw std::overflow_error("exp_e1: result not representable");
  return result;
}

Complex exp_e1_scaled(Complex z) {
  check_e1_domain(z);
  Complex result;
  switch (pick_region(z)) {
    case E1Region::series:
      result = std::exp(z) * e1_series(z);
      break;
    case E1Region::fraction:
      result = e1_cf_tail(z, 1);
      break;
    case E1Region::asymptotic:
      result = e1_scaled_asymptotic(z);
      break;
  }
  if (!is_finite(result)) throw std::overflow_error("exp_e1_scaled: result not representable");
  return result;
}

Complex exp_e1_scaled_diff(Complex z) {
  check_e1_domain(z);
  Complex result;
  switch (pick_region(z)) {
    case E1Region::series:
      result = 1.0 - z * std::exp(z) * e1_series(z);
      break;
    case E1Region::fraction: {
      // With u the level-2 tail, e^z E1 = 1/(z+1-u) and
      // 1 - z e^z E1 = (1-u)/(z+1-u); no subtraction of near-equal terms.
      const Complex u = e1_cf_tail(z, 2);
      result = (1.0 - u) / (z + 1.0 - u);
      break;
    }
    case E1Region::asymptotic:
      result = e1_scaled_diff_asymptotic(z);
      break;
  }
  if (!is_finite(result)) throw std::overflow_error("exp_e1_scaled_diff: result not representable");
  return result;
}

}  // namespace skineff
