#ifndef SKINEFF_SWEEP_HPP
#define SKINEFF_SWEEP_HPP

#include <complex>
#include <string>
#include <vector>

#include "skineff/kinetic_core.hpp"
#include "skineff/quadrature.hpp"

namespace skineff {

struct SweepConfig {
  double alpha_min = 1e-2;
  double alpha_max = 1e4;
  int alpha_count = 30;           // log-spaced, inclusive endpoints
  double omega_over_nu = 1.0;
  std::vector<double> q_values{0.0};
  int max_order = 2;
  GridSpec grid;
  double tol = 1e-9;              // reference-quadrature tolerance
  std::string output_path = "skineff_sweep.csv";

  bool physical = false;          // append physical-impedance columns
  double omega = 0.0;             // rad/s (physical mode)
  double nu = 0.0;                // 1/s   (physical mode)
  double mean_free_path = 0.0;    // cm    (physical mode)
};

// Flat JSON file with the SweepConfig field names; unknown keys are rejected.
SweepConfig load_config(const std::string& path);

struct SweepRow {
  double alpha = 0.0;
  double omega_over_nu = 0.0;
  double q = 0.0;
  int order = 0;
  Complex zeta_n;     // series term of this order
  Complex sum;        // partial sum through this order, (1-q)^n weights
  Complex zeta_ref;
  Complex zeta_dif;
  double y1 = 0.0;    // 1 + (1-q)   Re zeta_1 / Re zeta_0
  double y2 = 0.0;    // y1 + (1-q)^2 Re zeta_2 / Re zeta_0
  double ratio3_re = 0.0;  // Re zeta_dif / Re zeta_ref
  double ratio3_im = 0.0;  // Im zeta_dif / Im zeta_ref
  Complex z_physical; // populated in physical mode
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

// One row per (alpha, q, order), rows in config order; (alpha, q) points run
// concurrently, assembly stays ordered.  Per-point failures land in `status`.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

// 12-significant-digit CSV; throws on empty input before touching the file.
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path,
              bool physical_columns = false);

}  // namespace skineff

#endif
