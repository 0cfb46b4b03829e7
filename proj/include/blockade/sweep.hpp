#pragma once

// Parameter sweeps over the full model, the reduced model or the closed forms,
// figure presets, power-law fits and CSV/JSON export.

#include <string>
#include <vector>

#include "blockade/lindblad.hpp"
#include "blockade/rme.hpp"

namespace blockade {

enum class Backend { Fme, Rme, Analytic };
enum class AxisScale { Linear, Log };

std::string to_string(Backend b);
std::string to_string(AxisScale s);

struct SweepAxis {
  // One of g, J, Omega, Delta, kappa2, gamma, Gamma1, Gamma2, or t (full
  // model only: time evolution from the vacuum, in units of 1/kappa1).
  std::string name = "g";
  AxisScale scale = AxisScale::Linear;
  double start = 0.0;
  double stop = 1.0;
  int count = 1;

  // Log grids are base 10 between the endpoints (inclusive).
  std::vector<double> grid() const;
  bool operator==(const SweepAxis&) const = default;
};

struct OptimizeSpec {
  bool enabled = false;
  BrightnessTarget target = BrightnessTarget::N2;
  SearchBox box;
  bool operator==(const OptimizeSpec& o) const {
    return enabled == o.enabled && target == o.target && box.j_min == o.box.j_min && box.j_max == o.box.j_max &&
           box.omega_min == o.box.omega_min && box.omega_max == o.box.omega_max;
  }
};

// Observable names: n1, n2, g2_1, g2_2, fidelity_K, infidelity_1mF, purity_P,
// p10. fidelity_K is F(rho, P rho P) with P the zero-energy manifold
// projector; it exists for the full model only.
const std::vector<std::string>& known_observables();

struct SweepSpec {
  std::string label = "sweep";
  Backend model = Backend::Fme;
  SystemParams fixed;
  // Replace J by the closed-form optimal hopping for each point's kappa2.
  bool j_opt = false;
  SweepAxis axis;
  std::vector<std::string> observables;
  HilbertSpec truncation;
  ReducedBasis reduced;
  double tol = 1e-8;
  // Reduced model only: maximize brightness over (J, Omega) at each point
  // before evaluating the observables.
  OptimizeSpec optimize;

  // Throws ConfigError.
  void validate() const;
  bool operator==(const SweepSpec&) const = default;
};

struct SweepRow {
  double axis_value = 0.0;
  double J = 0.0;      // hopping actually used
  double Omega = 0.0;  // drive actually used
  std::vector<double> values;  // aligned with spec.observables; NaN where failed
  double residual = 0.0;       // ||L rho||_F (0 for the closed forms)
  double wall_time = 0.0;      // seconds; not exported
  std::string error;           // empty on success
  std::string warnings;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;

  bool ok() const;
  std::size_t failed_rows() const;
};

// Evaluates every grid point; rows come back in grid order regardless of
// worker count. workers <= 0 uses the hardware concurrency. Point failures are
// recorded in the row; invalid specs throw ConfigError.
SweepResult run_sweep(const SweepSpec& spec, int workers = 1);

// Parameters of one grid point (axis value applied, J_opt substituted).
SystemParams point_params(const SweepSpec& spec, double axis_value);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int points = 0;
};

// Least-squares line through (log x, log y) for lo <= x <= hi. Needs at least
// three points; any y <= 0 inside the window is an error.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi);
PowerLawFit fit_power_law(const SweepResult& result, const std::string& observable, double lo, double hi);

// Named figure presets; each returns one or more specs.
const std::vector<std::string>& preset_names();
std::vector<SweepSpec> preset(const std::string& name);

// ---------------------------------------------------------------------------
// Serialization

enum class ExportFormat { Csv, Json };

std::string spec_to_json(const SweepSpec& spec);
SweepSpec spec_from_json(const std::string& text);

// A config file holds one spec object or {"specs": [...]}.
std::vector<SweepSpec> load_config(const std::string& path);
std::vector<SweepSpec> parse_config(const std::string& text);

std::string to_csv(const SweepResult& result);
std::string to_json(const SweepResult& result);
SweepResult parse_csv(const std::string& text);
SweepResult parse_json(const std::string& text);

void export_result(const SweepResult& result, ExportFormat format, const std::string& path);

}  // namespace blockade
