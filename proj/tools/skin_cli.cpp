// Command-line front end: sweeps alpha (and q) over the kinetic skin-effect
// solver, writes the per-order impedance table as CSV.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skineff/sweep.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Surface impedance of a Maxwellian plasma half-space with "
               "specular-diffuse boundary scattering"};

  std::string config_path;
  std::string out_path;
  skineff::SweepConfig config;
  std::vector<double> q_values;
  double alpha_min = -1.0, alpha_max = -1.0, omega_ratio = -1.0, tol = -1.0;
  int alpha_count = -1, orders = -1, grid_order = -1;
  bool physical = false;
  double omega = 0.0, nu = 0.0, mfp = 0.0;

  app.add_option("--config", config_path, "JSON config file (flags override it)");
  app.add_option("--alpha-min", alpha_min, "smallest alpha of the log-spaced sweep");
  app.add_option("--alpha-max", alpha_max, "largest alpha");
  app.add_option("--alpha-count", alpha_count, "number of alpha points (>= 2)");
  app.add_option("--omega-ratio", omega_ratio, "omega/nu");
  app.add_option("--q", q_values, "specularity value(s) in [0,1]; repeatable");
  app.add_option("--orders", orders, "highest series order emitted");
  app.add_option("--out", out_path, "output CSV path");
  app.add_option("--tol", tol, "reference quadrature tolerance");
  app.add_option("--grid-order", grid_order, "Gauss points per grid panel");
  app.add_flag("--physical", physical, "append physical-impedance columns");
  app.add_option("--omega", omega, "field frequency omega [rad/s] (physical mode)");
  app.add_option("--nu", nu, "collision frequency nu [1/s] (physical mode)");
  app.add_option("--mfp", mfp, "electron mean free path l [cm] (physical mode)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) config = skineff::load_config(config_path);
    if (alpha_min > 0.0) config.alpha_min = alpha_min;
    if (alpha_max > 0.0) config.alpha_max = alpha_max;
    if (alpha_count > 0) config.alpha_count = alpha_count;
    if (omega_ratio >= 0.0) config.omega_over_nu = omega_ratio;
    if (!q_values.empty()) config.q_values = q_values;
    if (orders >= 0) config.max_order = orders;
    if (tol > 0.0) config.tol = tol;
    if (grid_order > 0) config.grid.panel_order = grid_order;
    if (!out_path.empty()) config.output_path = out_path;
    if (physical) {
      config.physical = true;
      config.omega = omega;
      config.nu = nu;
      config.mean_free_path = mfp;
      if (nu > 0.0 && omega > 0.0) config.omega_over_nu = omega / nu;
    }

    // Relative outputs land in $SKINEFF_OUT_DIR when it is set.
    std::filesystem::path out(config.output_path);
    if (out.is_relative()) {
      if (const char* dir = std::getenv("SKINEFF_OUT_DIR")) config.output_path = (std::filesystem::path(dir) / out).string();
    }

    const std::vector<skineff::SweepRow> rows = skineff::run_sweep(config);
    skineff::emit_csv(rows, config.output_path, config.physical);

    std::size_t failed = 0;
    for (const auto& row : rows)
      if (!row.ok()) ++failed;
    std::cout << "wrote " << rows.size() << " rows to " << config.output_path;
    if (failed > 0) std::cout << " (" << failed << " failed)";
    std::cout << "\n";
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
