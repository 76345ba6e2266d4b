#include "skineff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

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

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Newton iteration on the Legendre recurrence; deterministic to the last bit.
Rule make_gauss_rule(int n) {
  Rule r;
  r.x.assign(n, 0.0);
  r.w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // one polishing pass after convergence
        p0 = 1.0;
        p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;  // initial guesses start near +1; store ascending
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

const Rule& gauss_rule(int n) {
  static std::map<int, Rule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// adaptive semi-infinite integration
// ---------------------------------------------------------------------------

struct Segment {
  double a, b;
  bool mapped;  // true: integrand is f(1/t)/t^2 on t in (a,b)
  Complex value;
  double error;
  long id;
};

struct SegmentOrder {
  bool operator()(const Segment& lhs, const Segment& rhs) const {
    if (lhs.error != rhs.error) return lhs.error < rhs.error;
    return lhs.id > rhs.id;  // deterministic tie-break
  }
};

class CountingIntegrand {
 public:
  explicit CountingIntegrand(const std::function<Complex(double)>& f) : f_(f) {}

  Complex eval(double t, bool mapped) {
    ++count_;
    Complex v = mapped ? f_(1.0 / t) / (t * t) : f_(t);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::runtime_error("integrate_semi_infinite: integrand returned a non-finite value");
    return v;
  }

  int count() const { return count_; }

 private:
  const std::function<Complex(double)>& f_;
  int count_ = 0;
};

void estimate_segment(CountingIntegrand& f, Segment& s) {
  const Rule& lo = gauss_rule(12);
  const Rule& hi = gauss_rule(24);
  const double mid = 0.5 * (s.a + s.b);
  const double hw = 0.5 * (s.b - s.a);
  Complex coarse{0.0, 0.0};
  for (int i = 0; i < 12; ++i) coarse += hw * lo.w[i] * f.eval(mid + hw * lo.x[i], s.mapped);
  KahanSum fine;
  for (int i = 0; i < 24; ++i) fine.add(hw * hi.w[i] * f.eval(mid + hw * hi.x[i], s.mapped));
  s.value = fine.sum;
  s.error = std::abs(fine.sum - coarse);
}

// Priority-driven bisection over a starting segment list.
QuadResult adaptive_segments(CountingIntegrand& integrand,
                             std::vector<Segment> initial, double rel_tol,
                             int max_intervals) {
  long next_id = 0;
  std::priority_queue<Segment, std::vector<Segment>, SegmentOrder> queue;
  std::vector<Segment> done;
  Complex total{0.0, 0.0};
  double total_error = 0.0;

  auto push = [&](double a, double b, bool mapped) {
    Segment s{a, b, mapped, {0.0, 0.0}, 0.0, next_id++};
    estimate_segment(integrand, s);
    total += s.value;
    total_error += s.error;
    queue.push(s);
  };

  for (const Segment& s : initial) push(s.a, s.b, s.mapped);

  int splits = 0;
  while (total_error > rel_tol * std::max(std::abs(total), 1e-300) &&
         splits < max_intervals && !queue.empty()) {
    Segment worst = queue.top();
    queue.pop();
    if (worst.b - worst.a < 1e-14 * std::max(1.0, std::abs(worst.b))) {
      done.push_back(worst);
      continue;
    }
    total -= worst.value;
    total_error -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    push(worst.a, mid, worst.mapped);
    push(mid, worst.b, worst.mapped);
    ++splits;
  }

  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(), [](const Segment& l, const Segment& r) {
    if (l.mapped != r.mapped) return !l.mapped;
    return l.a < r.a;
  });

  KahanSum value;
  double error = 0.0;
  for (const Segment& s : done) {
    value.add(s.value);
    error += s.error;
  }

  QuadResult result;
  result.value = value.sum;
  result.error_estimate = error;
  result.evaluations = integrand.count();
  result.converged = error <= rel_tol * std::max(std::abs(value.sum), 1e-300);
  return result;
}

std::pair<Complex, double> wynn_epsilon(const std::vector<Complex>& partials);

// Fallback for tails the algebraic map cannot tame (persistent oscillation):
// fixed-width Gauss panels whose partial sums carry a near-geometric
// oscillatory transient that Wynn's epsilon algorithm removes.
QuadResult oscillatory_tail(CountingIntegrand& integrand, double start,
                            double rel_tol) {
  const Rule& rule = gauss_rule(24);
  constexpr double width = 2.0;
  constexpr int max_panels = 1500;

  KahanSum sum;
  std::vector<Complex> partials;
  double scale = 1e-300;
  int quiet = 0;
  QuadResult result;

  for (int m = 0; m < max_panels; ++m) {
    const double a = start + m * width;
    const double mid = a + 0.5 * width;
    KahanSum panel;
    for (int i = 0; i < 24; ++i)
      panel.add(0.5 * width * rule.w[i] * integrand.eval(mid + 0.5 * width * rule.x[i], false));
    sum.add(panel.sum);
    partials.push_back(sum.sum);
    scale = std::max(scale, std::abs(sum.sum));
    result.error_estimate = std::abs(panel.sum);
    if (result.error_estimate <= rel_tol * scale) {
      if (++quiet >= 3) {
        result.value = sum.sum;
        result.converged = true;
        return result;
      }
    } else {
      quiet = 0;
    }
    if (partials.size() >= 12 && (partials.size() % 4) == 0) {
      const std::size_t window = std::min<std::size_t>(partials.size(), 24);
      std::vector<Complex> tail_seq(partials.end() - window, partials.end());
      auto [accelerated, acc_error] = wynn_epsilon(tail_seq);
      if (std::isfinite(accelerated.real()) && std::isfinite(accelerated.imag()) &&
          acc_error <= rel_tol * std::max(std::abs(accelerated), scale)) {
        result.value = accelerated;
        result.error_estimate = acc_error;
        result.converged = true;
        return result;
      }
    }
  }
  result.value = sum.sum;
  result.converged = false;
  return result;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  const Rule& r = gauss_rule(n);
  nodes = r.x;
  weights = r.w;
}

QuadResult integrate_semi_infinite(const std::function<Complex(double)>& f,
                                   double rel_tol, int max_intervals) {
  if (rel_tol <= 0.0) throw std::invalid_argument("integrate_semi_infinite: tol must be positive");

  // int_0^1 f dk + int_0^1 f(1/t)/t^2 dt, refined together.
  {
    CountingIntegrand integrand(f);
    std::vector<Segment> initial{{0.0, 1.0, false, {}, 0.0, 0},
                                 {0.0, 1.0, true, {}, 0.0, 0}};
    QuadResult mapped = adaptive_segments(integrand, initial, rel_tol, max_intervals);
    if (mapped.converged) return mapped;
  }

  // The mapped tail compresses persistent oscillation into an unresolvable
  // boundary layer; redo the tail with epsilon-accelerated fixed panels.
  CountingIntegrand integrand(f);
  constexpr double split = 40.0;
  std::vector<Segment> finite{{0.0, split, false, {}, 0.0, 0}};
  QuadResult head = adaptive_segments(integrand, finite, 0.5 * rel_tol, max_intervals);
  QuadResult tail = oscillatory_tail(integrand, split, 0.5 * rel_tol);

  QuadResult result;
  result.value = head.value + tail.value;
  result.error_estimate = head.error_estimate + tail.error_estimate;
  result.evaluations = integrand.count();
  result.converged = head.converged && tail.converged;
  return result;
}

namespace {

// Wynn's epsilon table over the trailing partial sums; returns the highest
// even-column entry and a crude consistency error.
std::pair<Complex, double> wynn_epsilon(const std::vector<Complex>& partials) {
  const std::size_t n = partials.size();
  std::vector<Complex> prev_col(n, Complex{0.0, 0.0});  // epsilon_{-1} = 0
  std::vector<Complex> col(partials);
  Complex best = col.back();
  Complex prev_best = best;
  for (std::size_t pass = 1; pass < n; ++pass) {
    std::vector<Complex> next(n - pass);
    for (std::size_t i = 0; i + pass < n; ++i) {
      const Complex diff = col[i + 1] - col[i];
      if (std::abs(diff) < 1e-300) {
        next[i] = col[i + 1];
        continue;
      }
      next[i] = prev_col[i + 1] + 1.0 / diff;
    }
    prev_col = std::move(col);
    col = std::move(next);
    if (pass % 2 == 0 && !col.empty()) {
      prev_best = best;
      best = col.back();
    }
  }
  return {best, std::abs(best - prev_best)};
}

QuadResult fourier_panels(const std::function<Complex(double)>& f, double x,
                          double rel_tol, bool cosine) {
  const Rule& rule = gauss_rule(24);
  const double period = kPi / x;  // half period of the oscillation
  constexpr int max_panels = 4000;

  KahanSum sum;
  std::vector<Complex> partials;
  partials.reserve(256);
  double scale = 1e-300;  // largest partial sum: the attainable-accuracy scale
  int evals = 0;
  int quiet = 0;

  QuadResult result;
  auto target = [&]() { return rel_tol * std::max(std::abs(sum.sum), 1e-3 * scale); };

  for (int m = 0; m < max_panels; ++m) {
    const double a = m * period;
    const double mid = a + 0.5 * period;
    const double hw = 0.5 * period;
    KahanSum panel;
    for (int i = 0; i < 24; ++i) {
      const double k = mid + hw * rule.x[i];
      const double osc = cosine ? std::cos(k * x) : std::sin(k * x);
      Complex v = f(k) * osc;
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::runtime_error("fourier integral: integrand returned a non-finite value");
      panel.add(hw * rule.w[i] * v);
      ++evals;
    }
    sum.add(panel.sum);
    partials.push_back(sum.sum);
    scale = std::max(scale, std::abs(sum.sum));
    result.value = sum.sum;
    result.error_estimate = std::abs(panel.sum);

    if (result.error_estimate <= target()) {
      if (++quiet >= 3) {
        result.converged = true;
        break;
      }
    } else {
      quiet = 0;
    }

    if (partials.size() >= 12 && (partials.size() % 4) == 0) {
      const std::size_t window = std::min<std::size_t>(partials.size(), 24);
      std::vector<Complex> tail(partials.end() - window, partials.end());
      auto [accelerated, acc_error] = wynn_epsilon(tail);
      if (std::isfinite(accelerated.real()) && std::isfinite(accelerated.imag()) &&
          acc_error <= rel_tol * std::max(std::abs(accelerated), 1e-3 * scale)) {
        result.value = accelerated;
        result.error_estimate = acc_error;
        result.converged = true;
        break;
      }
    }
  }
  result.evaluations = evals;
  return result;
}

}  // namespace

QuadResult fourier_cos_semi_infinite(const std::function<Complex(double)>& f,
                                     double x, double rel_tol) {
  if (x < 0.0) throw std::invalid_argument("fourier_cos_semi_infinite: x must be >= 0");
  if (x < 0.25)
    return integrate_semi_infinite([&](double k) { return f(k) * std::cos(k * x); }, rel_tol);
  return fourier_panels(f, x, rel_tol, true);
}

QuadResult fourier_sin_semi_infinite(const std::function<Complex(double)>& f,
                                     double x, double rel_tol) {
  if (x < 0.0) throw std::invalid_argument("fourier_sin_semi_infinite: x must be >= 0");
  if (x == 0.0) return QuadResult{{0.0, 0.0}, 0.0, 0, true};
  if (x < 0.25)
    return integrate_semi_infinite([&](double k) { return f(k) * std::sin(k * x); }, rel_tol);
  return fourier_panels(f, x, rel_tol, false);
}

Complex SpectralGrid::integrate(const std::vector<Complex>& f_on_nodes) const {
  if (f_on_nodes.size() != nodes.size())
    throw std::invalid_argument("SpectralGrid::integrate: size mismatch");
  KahanSum s;
  for (std::size_t i = 0; i < nodes.size(); ++i) s.add(weights[i] * f_on_nodes[i]);
  return s.sum;
}

SpectralGrid build_grid(const GridSpec& spec) {
  if (spec.panel_order < 2 || spec.tail_order < 2)
    throw std::invalid_argument("build_grid: rule order must be at least 2");
  if (spec.first_edge <= 0.0)
    throw std::invalid_argument("build_grid: first_edge must be positive");
  if (spec.growth <= 1.05)
    throw std::invalid_argument("build_grid: growth must exceed 1.05");
  if (spec.tail_start <= spec.first_edge)
    throw std::invalid_argument("build_grid: tail_start must exceed first_edge");

  SpectralGrid grid;
  grid.panel_order = spec.panel_order;
  grid.tail_order = spec.tail_order;
  grid.panel_edges.push_back(0.0);
  double edge = spec.first_edge;
  while (true) {
    grid.panel_edges.push_back(edge);
    if (edge >= spec.tail_start) break;
    edge *= spec.growth;
  }
  grid.tail_start = grid.panel_edges.back();

  const Rule& panel_rule = gauss_rule(spec.panel_order);
  for (std::size_t p = 0; p + 1 < grid.panel_edges.size(); ++p) {
    const double a = grid.panel_edges[p];
    const double b = grid.panel_edges[p + 1];
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    for (int i = 0; i < spec.panel_order; ++i) {
      grid.nodes.push_back(mid + hw * panel_rule.x[i]);
      grid.weights.push_back(hw * panel_rule.w[i]);
    }
  }

  // Tail: k = K/t maps (K, inf) to t in (0, 1); dk = -K/t^2 dt.
  const Rule& tail_rule = gauss_rule(spec.tail_order);
  const double K = grid.tail_start;
  for (int i = spec.tail_order - 1; i >= 0; --i) {  // descending t -> ascending k
    const double t = 0.5 * (1.0 + tail_rule.x[i]);
    grid.nodes.push_back(K / t);
    grid.weights.push_back(0.5 * tail_rule.w[i] * K / (t * t));
  }

  for (std::size_t i = 0; i + 1 < grid.nodes.size(); ++i)
    if (!(grid.nodes[i] < grid.nodes[i + 1]))
      throw std::invalid_argument("build_grid: nodes are not strictly increasing");
  return grid;
}

}  // namespace skineff
