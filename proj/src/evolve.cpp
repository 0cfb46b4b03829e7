#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "blockade/lindblad.hpp"

namespace blockade {

namespace {

using State = std::vector<Complex>;
namespace odeint = boost::numeric::odeint;

DenseMatrix hermitized(const State& x, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  const Eigen::Map<const DenseMatrix> m(x.data(), n, n);
  return 0.5 * (m + m.adjoint());
}

}  // namespace

std::vector<DensityMatrix> evolve(const Liouvillian& l, const DensityMatrix& rho0, const std::vector<double>& t_grid,
                                  const EvolveOptions& opts) {
  require_same_space(l.space(), rho0.space(), "evolve");
  if (t_grid.empty()) return {};
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i]) || t_grid[i] < 0.0 || (i > 0 && t_grid[i] < t_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "evolve: t_grid must be finite, >= 0 and ascending");
    }
  }
  const std::size_t d = l.dim();
  const SparseMatrix& sup = l.superoperator();

  // integrate_times starts at the first listed time, so the initial state is
  // pinned to t = 0 and reported only if the caller asked for it.
  std::vector<double> times;
  const bool prepend = t_grid.front() > 0.0;
  if (prepend) times.push_back(0.0);
  times.insert(times.end(), t_grid.begin(), t_grid.end());

  State x(rho0.entries().data(), rho0.entries().data() + d * d);
  auto rhs = [&sup](const State& in, State& out, double) {
    const auto n = static_cast<Eigen::Index>(in.size());
    Eigen::Map<const DenseVector> vin(in.data(), n);
    Eigen::Map<DenseVector> vout(out.data(), n);
    vout.noalias() = sup * vin;
  };

  std::vector<DensityMatrix> out;
  out.reserve(t_grid.size());
  std::size_t seen = 0;
  auto observer = [&](const State& s, double t) {
    if (prepend && seen++ == 0) return;
    DenseMatrix rho = hermitized(s, d);
    const double drift = std::abs(rho.trace() - Complex(1.0));
    if (drift > opts.trace_drift_per_time * std::max(1.0, t)) {
      std::ostringstream os;
      os << "evolve: trace drift " << drift << " at t = " << t << " exceeds " << opts.trace_drift_per_time
         << " per unit time";
      throw Error(ErrorCode::IntegrationFailed, os.str());
    }
    // The DensityMatrix invariants need unit trace; the drift is checked above.
    rho /= rho.trace().real();
    out.emplace_back(l.space(), std::move(rho));
  };

  auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), opts.initial_step, observer,
                            odeint::max_step_checker(opts.max_steps_per_interval));
  } catch (const odeint::no_progress_error& e) {
    throw Error(ErrorCode::IntegrationFailed, std::string("evolve: ") + e.what());
  } catch (const odeint::step_adjustment_error& e) {
    throw Error(ErrorCode::IntegrationFailed, std::string("evolve: ") + e.what());
  }
  return out;
}

}  // namespace blockade
