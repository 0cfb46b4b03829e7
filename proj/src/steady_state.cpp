// Steady states of Lindblad models.
//
// Small spaces: sparse LU of the Liouvillian with the vacuum-diagonal row
// replaced by the trace functional.
//
// Large spaces: the Liouvillian splits as L = S + J with
//   S(X) = -i (H_eff X - X H_eff^dag),   H_eff = H - i/2 sum_j r_j o_j^dag o_j,
//   J(X) = sum_j r_j o_j X o_j^dag.
// S is a Sylvester operator and is inverted exactly with a complex Schur
// factorization of H_eff (Bartels-Stewart). GMRES then solves the
// left-preconditioned, trace-augmented system
//   P^{-1} (L + u w^T) x = P^{-1} u,   P = S - mu,
// where u = |vac><vac| and w^T x = Tr x. Because J only lowers excitations,
// P^{-1} L is a small perturbation of the identity and GMRES converges in a
// few tens of iterations even for strong drive.
//
// Under weak drive the steady-state entries span many orders of magnitude
// (rho_ij ~ Omega^(N_i + N_j)). The Krylov solve therefore works on
// X = D^{-1} rho D^{-1} with D = diag(s^{N_i}), which keeps every entry O(1)
// and the small multiphoton entries accurate to relative precision.

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include "blockade/lindblad.hpp"

namespace blockade {
namespace detail {

// Schur-based inverse of P(X) = -i (A X - X A^dag) - mu X.
class SylvesterInverse {
 public:
  SylvesterInverse(const DenseMatrix& a, double mu) {
    const auto d = a.rows();
    DenseMatrix shifted = a - Complex(0.0, 0.5 * mu) * DenseMatrix::Identity(d, d);
    Eigen::ComplexSchur<DenseMatrix> schur(shifted);
    if (schur.info() != Eigen::Success) {
      throw Error(ErrorCode::NotConverged, "steady_state: Schur factorization failed");
    }
    t_ = schur.matrixT();
    u_ = schur.matrixU();
  }

  const DenseMatrix& schur_t() const { return t_; }

  // Solves -i (A_mu X - X A_mu^dag) = C.
  DenseMatrix solve(const DenseMatrix& c) const {
    const auto d = t_.rows();
    DenseMatrix rhs_all = Complex(0.0, 1.0) * (u_.adjoint() * c * u_);
    DenseMatrix y(d, d);
    DenseVector rhs(d);
    // T Y - Y T^dag = C'; column j couples to columns k > j through conj(T_jk).
    for (Eigen::Index j = d - 1; j >= 0; --j) {
      rhs = rhs_all.col(j);
      const Eigen::Index tail = d - 1 - j;
      if (tail > 0) rhs.noalias() += y.rightCols(tail) * t_.row(j).tail(tail).adjoint();
      const Complex shift = std::conj(t_(j, j));
      for (Eigen::Index i = d - 1; i >= 0; --i) {
        const Complex yi = rhs(i) / (t_(i, i) - shift);
        rhs(i) = yi;
        if (i > 0) rhs.head(i) -= t_.col(i).head(i) * yi;
      }
      y.col(j) = rhs;
    }
    return u_ * y * u_.adjoint();
  }

 private:
  DenseMatrix t_;
  DenseMatrix u_;
};

struct ScaledJump {
  SparseMatrix op;
  SparseMatrix op_adj;
  double rate;
};

class AugmentedOperator;

}  // namespace detail
}  // namespace blockade

namespace Eigen::internal {
template <>
struct traits<blockade::detail::AugmentedOperator>
    : public Eigen::internal::traits<Eigen::SparseMatrix<std::complex<double>>> {};
}  // namespace Eigen::internal

namespace blockade::detail {

// x -> x + P^{-1}(mu X + J(X) + u Tr_w X), the preconditioned augmented
// Liouvillian in matrix-free form for Eigen's GMRES.
class AugmentedOperator : public Eigen::EigenBase<AugmentedOperator> {
 public:
  using Scalar = Complex;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

  AugmentedOperator(const SylvesterInverse& pinv, const DenseMatrix& a, const std::vector<ScaledJump>& jumps,
                    Eigen::VectorXd weights, double mu)
      : pinv_(&pinv), a_(&a), jumps_(&jumps), weights_(std::move(weights)), mu_(mu) {}

  Eigen::Index rows() const { return weights_.size() * weights_.size(); }
  Eigen::Index cols() const { return rows(); }

  template <typename Rhs>
  Eigen::Product<AugmentedOperator, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<AugmentedOperator, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  DenseVector apply(const DenseVector& x) const {
    const auto d = weights_.size();
    const Eigen::Map<const DenseMatrix> xm(x.data(), d, d);
    DenseMatrix y = mu_ * xm;
    for (const auto& j : *jumps_) {
      const DenseMatrix ox = j.op * xm;
      y.noalias() += j.rate * (ox * j.op_adj);
    }
    y(0, 0) += (weights_.cast<Complex>().array() * xm.diagonal().array()).sum();
    const DenseMatrix z = pinv_->solve(y);
    return x + Eigen::Map<const DenseVector>(z.data(), z.size());
  }

  // (L + u w^T) x without the preconditioner, from plain matrix products.
  DenseMatrix forward(const DenseVector& x) const {
    const auto d = weights_.size();
    const Eigen::Map<const DenseMatrix> xm(x.data(), d, d);
    DenseMatrix y = Complex(0.0, -1.0) * (*a_ * xm - xm * a_->adjoint());
    for (const auto& j : *jumps_) {
      const DenseMatrix ox = j.op * xm;
      y.noalias() += j.rate * (ox * j.op_adj);
    }
    y(0, 0) += (weights_.cast<Complex>().array() * xm.diagonal().array()).sum();
    return y;
  }

  const SylvesterInverse& preconditioner() const { return *pinv_; }

 private:
  const SylvesterInverse* pinv_;
  const DenseMatrix* a_;
  const std::vector<ScaledJump>* jumps_;
  Eigen::VectorXd weights_;
  double mu_;
};

}  // namespace blockade::detail

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<blockade::detail::AugmentedOperator, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<blockade::detail::AugmentedOperator, Rhs,
                                generic_product_impl<blockade::detail::AugmentedOperator, Rhs>> {
  using Scalar = typename Product<blockade::detail::AugmentedOperator, Rhs>::Scalar;
  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const blockade::detail::AugmentedOperator& lhs, const Rhs& rhs,
                            const Scalar& alpha) {
    dst.noalias() += alpha * lhs.apply(rhs);
  }
};
}  // namespace Eigen::internal

namespace blockade {

namespace {

DenseMatrix effective_hamiltonian(const LindbladModel& model) {
  DenseMatrix h = model.hamiltonian.dense();
  for (const auto& j : model.jumps) {
    if (j.rate == 0.0) continue;
    const SparseMatrix& o = j.op.matrix();
    h -= Complex(0.0, 0.5 * j.rate) * DenseMatrix(SparseMatrix(o.adjoint()) * o);
  }
  return h;
}

double max_rate(const LindbladModel& model) {
  double r = 0.0;
  for (const auto& j : model.jumps) r = std::max(r, j.rate);
  return r;
}

int count_dark(const Eigen::VectorXcd& eigenvalues, double scale) {
  const double tol = 1e-12 * std::max(1.0, scale);
  int k = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (std::abs(eigenvalues(i).imag()) <= tol) ++k;
  }
  return k;
}

[[noreturn]] void throw_non_unique(int k) {
  std::ostringstream os;
  os << "steady_state: steady state is not unique (null-space dimension estimate >= " << k
     << " from stationary dark states of H_eff)";
  throw Error(ErrorCode::SingularSystem, os.str());
}

double auto_scale(const LindbladModel& model) {
  const Space& space = model.space();
  const SparseMatrix& h = model.hamiltonian.matrix();
  double h01 = 0.0;
  for (Eigen::Index k = 0; k < h.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) {
      if (excitation_of(space, it.row()) == 1 && excitation_of(space, it.col()) == 0) {
        h01 = std::max(h01, std::abs(it.value()));
      }
    }
  }
  const double r = max_rate(model);
  if (h01 == 0.0 || r == 0.0) return 1.0;
  return std::min(1.0, 2.0 * h01 / r);
}

DenseMatrix finalize(const DenseMatrix& raw) {
  DenseMatrix rho = 0.5 * (raw + raw.adjoint());
  const Complex tr = rho.trace();
  if (std::abs(tr) == 0.0) throw Error(ErrorCode::SingularSystem, "steady_state: solution has zero trace");
  rho /= tr.real();
  return rho;
}

SteadyStateResult package(const LindbladModel& model, const DenseMatrix& rho, SolverInfo info,
                          const SteadyStateOptions& opts) {
  const double residual = apply_lindbladian(model, rho).norm();
  if (!(residual <= opts.tol)) {
    std::ostringstream os;
    os << "steady_state: residual " << residual << " above tolerance " << opts.tol << " (" << info.method << ", "
       << info.iterations << " iterations)";
    throw Error(ErrorCode::NotConverged, os.str());
  }
  const double lmin = min_eigenvalue(rho);
  if (lmin < -DensityMatrix::kNegativeEigTol) {
    throw Error(ErrorCode::NotPositive, "steady_state: solution has eigenvalue " + std::to_string(lmin));
  }
  for (std::size_t i = 0; i < model.dim(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (on_truncation_edge(model.space(), i) && rho(ii, ii).real() > opts.truncation_warning) {
      std::ostringstream os;
      os << "truncation: population " << rho(ii, ii).real() << " on edge state " << i << " exceeds "
         << opts.truncation_warning;
      info.warnings.push_back(os.str());
      break;
    }
  }
  return SteadyStateResult{DensityMatrix(model.space(), rho), residual, std::move(info)};
}

SteadyStateResult solve_direct(const LindbladModel& model, const SteadyStateOptions& opts) {
  const Liouvillian l = liouvillian(model);
  const SparseMatrix& sup = l.superoperator();
  const auto d = static_cast<Eigen::Index>(model.dim());
  const Eigen::Index n = d * d;
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(static_cast<std::size_t>(sup.nonZeros() + d));
  for (Eigen::Index k = 0; k < sup.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(sup, k); it; ++it) {
      if (it.row() != 0) t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (Eigen::Index i = 0; i < d; ++i) t.emplace_back(0, i * d + i, 1.0);
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();

  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularSystem, "steady_state: LU factorization failed: " + lu.lastErrorMessage());
  }
  DenseVector rhs = DenseVector::Zero(n);
  rhs(0) = 1.0;
  const DenseVector x = lu.solve(rhs);
  if (!x.allFinite()) throw Error(ErrorCode::SingularSystem, "steady_state: LU solve produced non-finite values");

  SolverInfo info;
  info.method = "direct-sparse-lu";
  info.factor_nonzeros = lu.nnzL() + lu.nnzU();
  return package(model, finalize(unvectorize(x, model.dim())), std::move(info), opts);
}

SteadyStateResult solve_krylov(const LindbladModel& model, const SteadyStateOptions& opts, int dark) {
  const Space& space = model.space();
  const std::size_t d = model.dim();
  const auto n = static_cast<Eigen::Index>(d);
  const double s = opts.excitation_scale > 0.0 ? opts.excitation_scale : auto_scale(model);

  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) scale(i) = std::pow(s, excitation_of(space, static_cast<std::size_t>(i)));

  // A = D^{-1} H_eff D, o' = D^{-1} o D.
  DenseMatrix a = effective_hamiltonian(model);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) *= scale(j) / scale(i);
  }
  std::vector<detail::ScaledJump> jumps;
  for (const auto& j : model.jumps) {
    if (j.rate == 0.0) continue;
    SparseMatrix o = j.op.matrix();
    for (Eigen::Index k = 0; k < o.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(o, k); it; ++it) it.valueRef() *= scale(it.col()) / scale(it.row());
    }
    jumps.push_back({o, SparseMatrix(o.adjoint()), j.rate});
  }

  const double mu = dark == 1 ? std::max(max_rate(model), 1e-3) : 0.0;
  const detail::SylvesterInverse pinv(a, mu);

  const Eigen::VectorXd weights = scale.array().square();
  const detail::AugmentedOperator op(pinv, a, jumps, weights, mu);

  DenseMatrix u = DenseMatrix::Zero(n, n);
  u(0, 0) = 1.0;
  const DenseMatrix bm = pinv.solve(u);
  const DenseVector b = Eigen::Map<const DenseVector>(bm.data(), bm.size());

  Eigen::GMRES<detail::AugmentedOperator, Eigen::IdentityPreconditioner> gmres;
  gmres.set_restart(opts.krylov_restart);
  gmres.setMaxIterations(opts.krylov_max_iterations);
  gmres.setTolerance(opts.krylov_tol);
  gmres.compute(op);
  DenseVector x = gmres.solveWithGuess(b, b);
  long iterations = gmres.iterations();
  // Iterative refinement. The residual is formed from the unpreconditioned
  // operator: refining on P^{-1} r alone converges to the solution of the
  // rounded Schur solve, which misses multiphoton entries by several percent
  // under weak drive.
  for (int pass = 0; pass < opts.krylov_refinements; ++pass) {
    const DenseMatrix r = pinv.solve(u - op.forward(x));
    const DenseVector c = Eigen::Map<const DenseVector>(r.data(), r.size());
    if (c.norm() <= opts.krylov_tol * x.norm()) break;
    x += gmres.solve(c);
    iterations += gmres.iterations();
  }

  DenseMatrix raw = unvectorize(x, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) raw(i, j) *= scale(i) * scale(j);
  }
  SolverInfo info;
  info.method = "krylov-schur-gmres";
  info.iterations = static_cast<int>(iterations);
  info.excitation_scale = s;
  info.preconditioner_shift = mu;
  if (!raw.allFinite()) throw Error(ErrorCode::NotConverged, "steady_state: GMRES produced non-finite values");
  return package(model, finalize(raw), std::move(info), opts);
}

}  // namespace

int dark_state_count(const LindbladModel& model) {
  const DenseMatrix heff = effective_hamiltonian(model);
  Eigen::ComplexEigenSolver<DenseMatrix> es(heff, false);
  return count_dark(es.eigenvalues(), heff.cwiseAbs().maxCoeff());
}

SteadyStateResult steady_state(const LindbladModel& model, const SteadyStateOptions& opts) {
  model.validate();
  const int dark = dark_state_count(model);
  if (dark >= 2) throw_non_unique(dark);
  const std::size_t unknowns = model.dim() * model.dim();
  SteadyStateMethod method = opts.method;
  if (method == SteadyStateMethod::Auto) {
    method = unknowns <= opts.direct_max_unknowns ? SteadyStateMethod::Direct : SteadyStateMethod::Krylov;
  }
  if (method == SteadyStateMethod::Direct) return solve_direct(model, opts);
  return solve_krylov(model, opts, dark);
}

SteadyStateResult steady_state(const Liouvillian& l, const SteadyStateOptions& opts) {
  return steady_state(l.model(), opts);
}

}  // namespace blockade
