#include "skineff/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "skineff/neumann_solver.hpp"
#include "skineff/reference_solutions.hpp"

namespace skineff {
namespace {

constexpr double kSpeedOfLight = 2.99792458e10;  // cm/s

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", v);  // 12 significant digits
  return buf;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> values(count);
  const double step = (std::log(hi) - std::log(lo)) / (count - 1);
  for (int i = 0; i < count; ++i) values[i] = std::exp(std::log(lo) + step * i);
  values.front() = lo;
  values.back() = hi;
  return values;
}

void validate(const SweepConfig& c) {
  if (!(c.alpha_min < c.alpha_max)) throw std::invalid_argument("sweep: alpha_min must be < alpha_max");
  if (!(c.alpha_min > 0.0)) throw std::invalid_argument("sweep: alpha_min must be positive");
  if (c.alpha_count < 2) throw std::invalid_argument("sweep: alpha_count must be >= 2");
  if (c.q_values.empty()) throw std::invalid_argument("sweep: at least one q value required");
  for (double q : c.q_values)
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("sweep: q must lie in [0,1]");
  if (c.max_order < 0) throw std::invalid_argument("sweep: max_order must be >= 0");
  if (!(c.omega_over_nu >= 0.0)) throw std::invalid_argument("sweep: omega/nu must be >= 0");
  if (!(c.tol > 0.0)) throw std::invalid_argument("sweep: tol must be positive");
  if (c.physical && (!(c.omega > 0.0) || !(c.nu > 0.0) || !(c.mean_free_path > 0.0)))
    throw std::invalid_argument("sweep: physical mode needs omega, nu and mean_free_path > 0");
}

// All rows of one (alpha, q) point; a failure marks every row of the point.
std::vector<SweepRow> compute_point(const SweepConfig& c, double alpha, double q) {
  std::vector<SweepRow> rows;
  const int orders = c.max_order;
  rows.reserve(orders + 1);
  for (int n = 0; n <= orders; ++n) {
    SweepRow row;
    row.alpha = alpha;
    row.omega_over_nu = c.omega_over_nu;
    row.q = q;
    row.order = n;
    rows.push_back(row);
  }
  try {
    const PlasmaParams params(c.omega_over_nu, alpha, q);
    const SpectralGrid grid = default_grid(params, c.grid);
    const KernelMatrix kernel = build_kernel_matrix(grid, params);
    // Always carry the series to order 2 so Y1/Y2 are defined for any N.
    const ImpedanceSeries series = sum_series(kernel, std::max(2, orders));
    const Complex zeta_ref = impedance_specular(params, c.tol);
    const Complex zeta_dif = impedance_diffuse(params);

    const double w = 1.0 - q;
    const double re0 = series.terms[0].real();
    const double y1 = 1.0 + w * series.terms[1].real() / re0;
    const double y2 = y1 + w * w * series.terms[2].real() / re0;
    const double r3re = zeta_dif.real() / zeta_ref.real();
    const double r3im = zeta_dif.imag() / zeta_ref.imag();

    for (int n = 0; n <= orders; ++n) {
      SweepRow& row = rows[n];
      row.zeta_n = series.terms[n];
      row.sum = series.partial_sums[n];
      row.zeta_ref = zeta_ref;
      row.zeta_dif = zeta_dif;
      row.y1 = y1;
      row.y2 = y2;
      row.ratio3_re = r3re;
      row.ratio3_im = r3im;
      if (c.physical) {
        // Z = (4 i omega l / c^2) zeta, Gaussian units.
        const double scale = 4.0 * c.omega * c.mean_free_path / (kSpeedOfLight * kSpeedOfLight);
        row.z_physical = Complex{0.0, scale} * row.sum;
      }
      if (series.diverged) row.status = "error: series diverged";
    }
  } catch (const std::exception& err) {
    for (SweepRow& row : rows) row.status = std::string("error: ") + err.what();
  }
  return rows;
}

}  // namespace

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  nlohmann::json j;
  in >> j;

  SweepConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "alpha_min") c.alpha_min = value.get<double>();
    else if (key == "alpha_max") c.alpha_max = value.get<double>();
    else if (key == "alpha_count") c.alpha_count = value.get<int>();
    else if (key == "omega_over_nu") c.omega_over_nu = value.get<double>();
    else if (key == "q_values") c.q_values = value.get<std::vector<double>>();
    else if (key == "max_order") c.max_order = value.get<int>();
    else if (key == "panel_order") c.grid.panel_order = value.get<int>();
    else if (key == "tail_order") c.grid.tail_order = value.get<int>();
    else if (key == "growth") c.grid.growth = value.get<double>();
    else if (key == "tol") c.tol = value.get<double>();
    else if (key == "output_path") c.output_path = value.get<std::string>();
    else if (key == "physical") c.physical = value.get<bool>();
    else if (key == "omega") c.omega = value.get<double>();
    else if (key == "nu") c.nu = value.get<double>();
    else if (key == "mean_free_path") c.mean_free_path = value.get<double>();
    else throw std::invalid_argument("load_config: unknown key '" + key + "'");
  }
  return c;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  validate(config);
  const std::vector<double> alphas = log_spaced(config.alpha_min, config.alpha_max,
                                                config.alpha_count);
  struct Point {
    double alpha;
    double q;
  };
  std::vector<Point> points;
  for (double alpha : alphas)
    for (double q : config.q_values) points.push_back({alpha, q});

  // Points run concurrently (bounded by the hardware), assembly stays in
  // config order.
  const unsigned threads =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(points.size())));
  std::vector<std::vector<SweepRow>> per_point(points.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i)
      per_point[i] = compute_point(config, points[i].alpha, points[i].q);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t i = t; i < points.size(); i += threads)
          per_point[i] = compute_point(config, points[i].alpha, points[i].q);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<SweepRow> rows;
  for (const auto& point_rows : per_point)
    rows.insert(rows.end(), point_rows.begin(), point_rows.end());
  return rows;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path,
              bool physical_columns) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: no rows to write");
  std::ostringstream out;
  out << "alpha,omega_over_nu,q,order,re_zeta_n,im_zeta_n,re_sum,im_sum,"
         "re_zeta_ref,im_zeta_ref,re_zeta_dif,im_zeta_dif,Y1,Y2,ratio3_re,ratio3_im,status";
  if (physical_columns) out << ",re_Z_phys,im_Z_phys";
  out << "\n";
  for (const SweepRow& r : rows) {
    out << format_value(r.alpha) << ',' << format_value(r.omega_over_nu) << ','
        << format_value(r.q) << ',' << r.order << ',' << format_value(r.zeta_n.real()) << ','
        << format_value(r.zeta_n.imag()) << ',' << format_value(r.sum.real()) << ','
        << format_value(r.sum.imag()) << ',' << format_value(r.zeta_ref.real()) << ','
        << format_value(r.zeta_ref.imag()) << ',' << format_value(r.zeta_dif.real()) << ','
        << format_value(r.zeta_dif.imag()) << ',' << format_value(r.y1) << ','
        << format_value(r.y2) << ',' << format_value(r.ratio3_re) << ','
        << format_value(r.ratio3_im) << ',' << r.status;
    if (physical_columns)
      out << ',' << format_value(r.z_physical.real()) << ',' << format_value(r.z_physical.imag());
    out << "\n";
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("emit_csv: cannot open " + path);
  file << out.str();
  if (!file) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace skineff
