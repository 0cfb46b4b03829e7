#include "blockade/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "blockade/weakdrive.hpp"

namespace blockade {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

const std::vector<std::string>& axis_names() {
  static const std::vector<std::string> names = {"g", "J", "Omega", "Delta", "kappa2", "gamma", "Gamma1", "Gamma2", "t"};
  return names;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

double* param_slot(SystemParams& p, const std::string& name) {
  if (name == "g") return &p.g;
  if (name == "J") return &p.J;
  if (name == "Omega") return &p.Omega;
  if (name == "Delta") return &p.Delta;
  if (name == "kappa2") return &p.kappa2;
  if (name == "gamma") return &p.gamma;
  if (name == "Gamma1") return &p.Gamma1;
  if (name == "Gamma2") return &p.Gamma2;
  return nullptr;
}

void append(std::string& dst, const std::string& msg) {
  if (!dst.empty()) dst += "; ";
  dst += msg;
}

// Observables of a solved state. Failures of single observables are recorded
// and leave NaN in their slot.
void fill_from_state(const SweepSpec& spec, const DensityMatrix& rho, const Operator* manifold, SweepRow& row) {
  row.values.assign(spec.observables.size(), kNaN);
  for (std::size_t k = 0; k < spec.observables.size(); ++k) {
    const std::string& name = spec.observables[k];
    try {
      double v = kNaN;
      if (name == "n1") v = mean_photon(rho, 1);
      else if (name == "n2") v = mean_photon(rho, 2);
      else if (name == "g2_1") v = g2_zero(rho, 1);
      else if (name == "g2_2") v = g2_zero(rho, 2);
      else if (name == "purity_P") v = 1.0 - g2_zero(rho, 2);
      else if (name == "p10") v = population(rho, 1, 0, 0);
      else if (name == "fidelity_K" || name == "infidelity_1mF") {
        const double f = fidelity(rho.entries(), project(*manifold, rho));
        v = name == "fidelity_K" ? f : 1.0 - f;
      }
      row.values[k] = v;
    } catch (const Error& e) {
      append(row.error, name + ": " + e.what());
    }
  }
}

void fill_analytic(const SweepSpec& spec, const SystemParams& p, SweepRow& row) {
  row.values.assign(spec.observables.size(), kNaN);
  for (std::size_t k = 0; k < spec.observables.size(); ++k) {
    const std::string& name = spec.observables[k];
    try {
      double v = kNaN;
      if (name == "g2_1") v = analytic_g2(p, 1);
      else if (name == "g2_2") v = analytic_g2(p, 2);
      else if (name == "purity_P") v = 1.0 - analytic_g2(p, 2);
      else if (name == "n2") v = three_level_n2(p.J, p.Omega, p.kappa2);
      else if (name == "n1" || name == "p10") v = three_level_steady_state(p.J, p.Omega, p.kappa2).n1;
      row.values[k] = v;
    } catch (const Error& e) {
      append(row.error, name + ": " + e.what());
    }
  }
}

void attach_warnings(const SolverInfo& info, SweepRow& row) {
  for (const auto& w : info.warnings) append(row.warnings, w);
}

SweepRow evaluate_point(const SweepSpec& spec, double axis_value) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRow row;
  row.axis_value = axis_value;
  row.values.assign(spec.observables.size(), kNaN);
  try {
    SystemParams p = point_params(spec, axis_value);
    if (spec.optimize.enabled) {
      const BrightnessOptimum best = optimize_brightness(p, spec.optimize.box, spec.optimize.target, spec.reduced);
      p.J = best.J;
      p.Omega = best.Omega;
      if (best.on_boundary) append(row.warnings, "optimum on search-box boundary");
    }
    row.J = p.J;
    row.Omega = p.Omega;
    SteadyStateOptions opts;
    opts.tol = spec.tol;
    switch (spec.model) {
      case Backend::Analytic:
        fill_analytic(spec, p, row);
        break;
      case Backend::Rme: {
        const SteadyStateResult r = steady_state(build_rme(spec.reduced, p), opts);
        row.residual = r.residual;
        attach_warnings(r.solver_info, row);
        fill_from_state(spec, r.rho, nullptr, row);
        break;
      }
      case Backend::Fme: {
        const SteadyStateResult r = steady_state(build_fme(spec.truncation, p), opts);
        row.residual = r.residual;
        attach_warnings(r.solver_info, row);
        const Operator proj = manifold_projector(spec.truncation);
        fill_from_state(spec, r.rho, &proj, row);
        break;
      }
    }
  } catch (const std::exception& e) {
    row.values.assign(spec.observables.size(), kNaN);
    append(row.error, e.what());
  }
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

// Time axis: a single evolution from the vacuum, reported at each grid time.
std::vector<SweepRow> evaluate_time_axis(const SweepSpec& spec, const std::vector<double>& times) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SweepRow> rows(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    rows[i].axis_value = times[i];
    rows[i].values.assign(spec.observables.size(), kNaN);
  }
  try {
    SystemParams p = point_params(spec, kNaN);
    const LindbladModel model = build_fme(spec.truncation, p);
    const Liouvillian l = liouvillian(model);
    const DensityMatrix rho0 = DensityMatrix::pure(StateVector::basis(spec.truncation, 0, 0, 0));
    const std::vector<DensityMatrix> states = evolve(l, rho0, times);
    const Operator proj = manifold_projector(spec.truncation);
    for (std::size_t i = 0; i < times.size(); ++i) {
      rows[i].J = p.J;
      rows[i].Omega = p.Omega;
      rows[i].residual = apply_lindbladian(model, states[i].entries()).norm();
      fill_from_state(spec, states[i], &proj, rows[i]);
    }
  } catch (const std::exception& e) {
    for (auto& r : rows) {
      r.values.assign(spec.observables.size(), kNaN);
      append(r.error, e.what());
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : rows) r.wall_time = wall / std::max<std::size_t>(1, rows.size());
  return rows;
}

}  // namespace

std::string to_string(Backend b) {
  switch (b) {
    case Backend::Fme: return "fme";
    case Backend::Rme: return "rme";
    case Backend::Analytic: return "analytic";
  }
  return "?";
}

std::string to_string(AxisScale s) { return s == AxisScale::Log ? "log" : "linear"; }

std::vector<double> SweepAxis::grid() const {
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {start};
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double f = double(i) / (count - 1);
    if (scale == AxisScale::Log) {
      out.push_back(std::pow(10.0, std::log10(start) + f * (std::log10(stop) - std::log10(start))));
    } else {
      out.push_back(start + f * (stop - start));
    }
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

const std::vector<std::string>& known_observables() {
  static const std::vector<std::string> names = {"n1",         "n2",           "g2_1",     "g2_2",
                                                 "fidelity_K", "infidelity_1mF", "purity_P", "p10"};
  return names;
}

void SweepSpec::validate() const {
  if (label.empty()) config_error("spec: label must not be empty");
  for (char c : label) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      config_error("spec '" + label + "': label may contain only letters, digits, '_', '-', '.'");
    }
  }
  const std::string where = "spec '" + label + "': ";
  if (!contains(axis_names(), axis.name)) config_error(where + "unknown axis '" + axis.name + "'");
  if (axis.count < 0) config_error(where + "axis count must be >= 0");
  if (!std::isfinite(axis.start) || !std::isfinite(axis.stop)) config_error(where + "axis endpoints must be finite");
  if (axis.count >= 2 && axis.start == axis.stop) config_error(where + "axis grid must be strictly monotone");
  if (axis.scale == AxisScale::Log && (axis.start <= 0.0 || axis.stop <= 0.0)) {
    config_error(where + "log axis endpoints must be > 0");
  }
  if (axis.name == "t") {
    if (model != Backend::Fme) config_error(where + "time axis requires the fme model");
    if (axis.start < 0.0 || axis.stop < axis.start) config_error(where + "time axis must be ascending from >= 0");
  }
  if (axis.name == "J" && j_opt) config_error(where + "j_opt conflicts with a J axis");
  if (observables.empty()) config_error(where + "no observables requested");
  std::set<std::string> seen;
  for (const auto& o : observables) {
    if (!contains(known_observables(), o)) config_error(where + "unknown observable '" + o + "'");
    if (!seen.insert(o).second) config_error(where + "duplicate observable '" + o + "'");
    if ((o == "fidelity_K" || o == "infidelity_1mF") && model != Backend::Fme) {
      config_error(where + "observable '" + o + "' requires the fme model");
    }
  }
  if (optimize.enabled) {
    if (model != Backend::Rme) config_error(where + "optimize requires the rme model");
    if (j_opt) config_error(where + "optimize conflicts with j_opt");
    const SearchBox& b = optimize.box;
    if (!(b.j_min >= 0.0) || !(b.j_max >= b.j_min) || !(b.omega_min >= 0.0) || !(b.omega_max >= b.omega_min)) {
      config_error(where + "invalid optimize box");
    }
  }
  if (!(tol > 0.0)) config_error(where + "tol must be > 0");
  try {
    fixed.validate();
    truncation.validate();
    reduced.validate();
  } catch (const Error& e) {
    config_error(where + e.what());
  }
}

SystemParams point_params(const SweepSpec& spec, double axis_value) {
  SystemParams p = spec.fixed;
  if (double* slot = param_slot(p, spec.axis.name)) *slot = axis_value;
  if (spec.j_opt) p.J = optimal_hopping(p.kappa2 / p.kappa1) * p.kappa1;
  p.validate();
  return p;
}

bool SweepResult::ok() const { return failed_rows() == 0; }

std::size_t SweepResult::failed_rows() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); }));
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  const std::vector<double> grid = spec.axis.grid();
  SweepResult result{spec, {}};
  if (spec.axis.name == "t") {
    result.rows = evaluate_time_axis(spec, grid);
    return result;
  }
  result.rows.resize(grid.size());
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(std::max<std::size_t>(1, grid.size())));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) result.rows[i] = evaluate_point(spec, grid[i]);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return result;
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "fit_power_law: x and y differ in length");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo && x[i] <= hi)) continue;
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "fit_power_law: nonpositive data in the fit window");
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const auto n = lx.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "fit_power_law: fewer than 3 points in the fit window");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "fit_power_law: all x values coincide");
  PowerLawFit f;
  f.exponent = sxy / sxx;
  f.prefactor = std::exp(my - f.exponent * mx);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (my + f.exponent * (lx[i] - mx));
    ss_res += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  f.window_lo = lo;
  f.window_hi = hi;
  f.points = static_cast<int>(n);
  return f;
}

PowerLawFit fit_power_law(const SweepResult& result, const std::string& observable, double lo, double hi) {
  const auto& obs = result.spec.observables;
  const auto it = std::find(obs.begin(), obs.end(), observable);
  if (it == obs.end()) throw Error(ErrorCode::InvalidArgument, "fit_power_law: observable not in sweep");
  const auto k = static_cast<std::size_t>(it - obs.begin());
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : result.rows) {
    x.push_back(r.axis_value);
    y.push_back(r.values[k]);
  }
  return fit_power_law(x, y, lo, hi);
}

}  // namespace blockade
