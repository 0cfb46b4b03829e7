#include "blockade/rme.hpp"

#include <cmath>

namespace blockade {

Operator reduced_annihilation(const ReducedBasis& basis, int mode) {
  basis.validate();
  const auto d = static_cast<Eigen::Index>(basis.dim());
  std::vector<Eigen::Triplet<Complex>> t;
  if (mode == 1) {
    for (int n = 1; n <= basis.n_max_ph; ++n) {
      t.emplace_back(basis.index(n - 1, 0), basis.index(n, 0), std::sqrt(double(n)));
    }
  } else if (mode == 2) {
    t.emplace_back(basis.index(0, 0), basis.index(0, 1), 1.0);
  } else {
    throw Error(ErrorCode::InvalidArgument, "reduced_annihilation: mode must be 1 or 2");
  }
  SparseMatrix m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return Operator(basis, std::move(m));
}

LindbladModel build_rme(const ReducedBasis& basis, const SystemParams& p) {
  p.validate();
  const Operator a1 = reduced_annihilation(basis, 1);
  const Operator a2 = reduced_annihilation(basis, 2);
  const auto d = static_cast<Eigen::Index>(basis.dim());
  SparseMatrix hop(d, d);
  hop.insert(basis.index(1, 0), basis.index(0, 1)) = 1.0;
  hop.insert(basis.index(0, 1), basis.index(1, 0)) = 1.0;
  const Operator h = compose({{Operator(basis, hop), p.J}, {a1 + a1.adjoint(), p.Omega}});
  LindbladModel m{h, {}};
  m.jumps.push_back({a1, p.kappa1, "a1"});
  m.jumps.push_back({a2, p.kappa2, "a2"});
  if (p.Gamma1 > 0.0) m.jumps.push_back({a1 * a1, p.Gamma1, "a1^2"});
  if (p.Gamma2 > 0.0) m.jumps.push_back({a2 * a2, p.Gamma2, "a2^2"});
  return m;
}

namespace {

struct Closed {
  double n1;
  double n2;
};

Closed closed_form(double J, double Omega, double k2) {
  const double k1 = 1.0;
  const double o2 = Omega * Omega;
  const double q0 = k1 + k2;
  const double q1 = k1 * (2.0 * o2 + k1 * k2 + k2 * k2);
  const double q2 = k2 * (k1 * k1 + 8.0 * o2) * (4.0 * o2 + k1 * k2 + k2 * k2);
  const double den = 16.0 * q0 * std::pow(J, 4) + 8.0 * q1 * J * J + q2;
  if (den == 0.0) throw Error(ErrorCode::SingularSystem, "three_level_steady_state: vanishing denominator");
  return {4.0 * q2 * o2 / (k1 * k1 + 8.0 * o2) / den, 16.0 * q0 * J * J * o2 / den};
}

}  // namespace

double three_level_n2(double J, double Omega, double kappa2) { return closed_form(J, Omega, kappa2).n2; }

ThreeLevelSteadyState three_level_steady_state(double J, double Omega, double kappa2) {
  if (!(kappa2 >= 0.0) || !(J >= 0.0) || !(Omega >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "three_level_steady_state: parameters must be >= 0");
  }
  const Closed c = closed_form(J, Omega, kappa2);
  ThreeLevelSteadyState out;
  out.n1 = c.n1;
  out.n2 = c.n2;

  const ReducedBasis basis{1};
  SystemParams p;
  p.J = J;
  p.Omega = Omega;
  p.kappa2 = kappa2;
  SteadyStateOptions opts;
  opts.method = SteadyStateMethod::Direct;
  const DensityMatrix rho = steady_state(build_rme(basis, p), opts).rho;
  const std::size_t idx[3] = {basis.index(0, 0), basis.index(1, 0), basis.index(0, 1)};
  out.rho.resize(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out.rho(i, j) = rho(idx[i], idx[j]);
  }
  out.rho(0, 0) = 1.0 - c.n1 - c.n2;
  out.rho(1, 1) = c.n1;
  out.rho(2, 2) = c.n2;
  return out;
}

double optimal_hopping(double kappa2) {
  if (!(kappa2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "optimal_hopping: kappa2 must be > 0");
  const double e = kappa2;
  return std::pow((3.0 * e / 16.0) * ((1.0 + e) - e / (1.0 + e)), 0.25);
}

double optimal_infidelity(double kappa2) {
  if (!(kappa2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "optimal_infidelity: kappa2 must be > 0");
  const double e = kappa2;
  const double r = std::sqrt(12.0 * e * (1.0 + e) * (1.0 + e + e * e));
  return (e * (1.0 + 2.0 * e) + r) / (1.0 + 2.0 * e * (1.0 + e) + r);
}

std::pair<double, double> asymptotic_scalings(double kappa2) {
  if (!(kappa2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "asymptotic_scalings: kappa2 must be > 0");
  return {std::pow(3.0 * kappa2 / 16.0, 0.25), std::sqrt(12.0 * kappa2)};
}

namespace {

class BrightnessObjective {
 public:
  BrightnessObjective(SystemParams p, BrightnessTarget target, ReducedBasis basis)
      : p_(p), target_(target), basis_(basis) {
    opts_.method = SteadyStateMethod::Direct;
    opts_.direct_max_unknowns = basis.dim() * basis.dim();
  }

  double operator()(double J, double Omega) {
    ++evaluations;
    SystemParams p = p_;
    p.J = J;
    p.Omega = Omega;
    const DensityMatrix rho = steady_state(build_rme(basis_, p), opts_).rho;
    return target_ == BrightnessTarget::N2 ? rho.population(basis_.index(0, 1)) : rho.population(basis_.index(1, 0));
  }

  int evaluations = 0;

 private:
  SystemParams p_;
  BrightnessTarget target_;
  ReducedBasis basis_;
  SteadyStateOptions opts_;
};

// Golden-section maximization of f on [a, b].
template <typename F>
double golden_max(F&& f, double a, double b, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

BrightnessOptimum optimize_brightness(const SystemParams& params_template, const SearchBox& box,
                                      BrightnessTarget target, const ReducedBasis& basis) {
  basis.validate();
  if (!(box.j_min >= 0.0) || !(box.j_max >= box.j_min) || !(box.omega_min >= 0.0) ||
      !(box.omega_max >= box.omega_min)) {
    throw Error(ErrorCode::InvalidArgument, "optimize_brightness: invalid search box");
  }
  constexpr int kGrid = 64;
  constexpr int kRounds = 3;
  BrightnessObjective f(params_template, target, basis);
  const bool free_j = box.j_max > box.j_min;
  const bool free_o = box.omega_max > box.omega_min;
  const int nj = free_j ? kGrid : 1;
  const int no = free_o ? kGrid : 1;
  const double hj = free_j ? (box.j_max - box.j_min) / (kGrid - 1) : 0.0;
  const double ho = free_o ? (box.omega_max - box.omega_min) / (kGrid - 1) : 0.0;

  BrightnessOptimum best;
  best.value = -1.0;
  for (int i = 0; i < nj; ++i) {
    for (int k = 0; k < no; ++k) {
      const double J = box.j_min + i * hj;
      const double O = box.omega_min + k * ho;
      const double v = f(J, O);
      if (v > best.value) best = {J, O, v, false, 0};
    }
  }

  // Refine within one grid cell of the incumbent along each free coordinate.
  double J = best.J;
  double O = best.Omega;
  for (int round = 0; round < kRounds; ++round) {
    if (free_j) {
      const double a = std::max(box.j_min, J - hj);
      const double b = std::min(box.j_max, J + hj);
      const double cand = golden_max([&](double x) { return f(x, O); }, a, b, 1e-9 * (box.j_max - box.j_min));
      if (f(cand, O) >= f(J, O)) J = cand;
    }
    if (free_o) {
      const double a = std::max(box.omega_min, O - ho);
      const double b = std::min(box.omega_max, O + ho);
      const double cand =
          golden_max([&](double x) { return f(J, x); }, a, b, 1e-9 * (box.omega_max - box.omega_min));
      if (f(J, cand) >= f(J, O)) O = cand;
    }
  }
  best.J = J;
  best.Omega = O;
  best.value = f(J, O);
  const double ej = 1e-6 * (box.j_max - box.j_min);
  const double eo = 1e-6 * (box.omega_max - box.omega_min);
  best.on_boundary = (free_j && (J - box.j_min <= ej || box.j_max - J <= ej)) ||
                     (free_o && (O - box.omega_min <= eo || box.omega_max - O <= eo));
  best.evaluations = f.evaluations;
  return best;
}

}  // namespace blockade
