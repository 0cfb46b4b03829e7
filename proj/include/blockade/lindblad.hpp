#pragma once

// Lindblad master equations: model assembly, the vectorized Liouvillian,
// steady states, time evolution and density-matrix diagnostics.
//
// Vectorization is column stacking: vec(X)[i + j*d] = X(i, j), so that
// vec(A X B) = (B^T (x) A) vec(X). For a 2x2 example,
//   X = [[x00, x01], [x10, x11]]  ->  vec(X) = (x00, x10, x01, x11).
// With this convention
//   L = -i (I (x) H - H^T (x) I)
//       + sum_j r_j [ conj(o_j) (x) o_j - 1/2 (I (x) o_j^dag o_j + (o_j^dag o_j)^T (x) I) ].

#include <memory>
#include <string>
#include <vector>

#include "blockade/hilbert.hpp"
#include "blockade/model.hpp"

namespace blockade {

struct JumpChannel {
  Operator op;
  double rate = 0.0;
  std::string label;
};

struct LindbladModel {
  Operator hamiltonian;
  std::vector<JumpChannel> jumps;

  const Space& space() const { return hamiltonian.space(); }
  std::size_t dim() const { return hamiltonian.dim(); }
  // Shared space, rates >= 0, Hermitian Hamiltonian (1e-12).
  void validate() const;
};

// Full master equation: H_tot plus channels a1 (kappa1), a2 (kappa2),
// sigma (gamma, kept even at rate 0), a1^2 (Gamma1 > 0), a2^2 (Gamma2 > 0).
LindbladModel build_fme(const HilbertSpec& spec, const SystemParams& p);

// A model with no Hamiltonian and no channels; its Liouvillian is zero.
LindbladModel empty_model(const Space& space);

struct LiouvillianOptions {
  // Upper bound on the number of superoperator unknowns d^2.
  std::size_t max_unknowns = 1'000'000;
};

class Liouvillian {
 public:
  Liouvillian(std::shared_ptr<const LindbladModel> model, SparseMatrix superop);

  const Space& space() const { return model_->space(); }
  std::size_t dim() const { return model_->dim(); }
  const SparseMatrix& superoperator() const { return superop_; }
  const LindbladModel& model() const { return *model_; }

  // L(rho) through the superoperator.
  DenseMatrix apply(const DenseMatrix& rho) const;

 private:
  std::shared_ptr<const LindbladModel> model_;
  SparseMatrix superop_;
};

Liouvillian liouvillian(const LindbladModel& model, const LiouvillianOptions& opts = {});

// L(rho) evaluated directly from the model's operators, without building the
// superoperator.
DenseMatrix apply_lindbladian(const LindbladModel& model, const DenseMatrix& rho);

DenseVector vectorize(const DenseMatrix& m);
DenseMatrix unvectorize(const DenseVector& v, std::size_t d);

// ---------------------------------------------------------------------------
// Steady state

enum class SteadyStateMethod { Auto, Direct, Krylov };

struct SteadyStateOptions {
  // Bound on ||L rho||_F of the returned state.
  double tol = 1e-8;
  SteadyStateMethod method = SteadyStateMethod::Auto;
  // Auto picks Direct when d^2 <= this bound.
  std::size_t direct_max_unknowns = 4096;
  // Excitation rescaling for the Krylov solver; <= 0 selects it from the
  // model (ratio of the vacuum-to-one-excitation drive element to the
  // largest rate, capped at 1).
  double excitation_scale = 0.0;
  double krylov_tol = 1e-13;
  int krylov_restart = 80;
  int krylov_max_iterations = 2000;
  // Extra GMRES solves on the true residual of the preconditioned system.
  int krylov_refinements = 8;
  // Population of the top Fock level above which a warning is attached.
  double truncation_warning = 1e-6;
};

struct SolverInfo {
  std::string method;
  int iterations = 0;
  long long factor_nonzeros = 0;
  double excitation_scale = 1.0;
  double preconditioner_shift = 0.0;
  std::vector<std::string> warnings;
};

struct SteadyStateResult {
  DensityMatrix rho;
  double residual = 0.0;  // ||L rho||_F
  SolverInfo solver_info;
};

// Unique steady state with Tr rho = 1. Throws SingularSystem (with an
// estimate of the null-space dimension) when the steady state is not unique,
// NotConverged when the residual exceeds opts.tol, NotPositive when the
// solution has an eigenvalue below -1e-8.
SteadyStateResult steady_state(const LindbladModel& model, const SteadyStateOptions& opts = {});
SteadyStateResult steady_state(const Liouvillian& l, const SteadyStateOptions& opts = {});

// Number of eigenvalues of H_eff = H - i/2 sum r o^dag o with vanishing
// imaginary part. Each corresponds to a stationary pure state, so a count of
// two or more means the steady state is not unique.
int dark_state_count(const LindbladModel& model);

// ---------------------------------------------------------------------------
// Time evolution

struct EvolveOptions {
  double abs_tol = 1e-11;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  // Allowed |Tr rho(t) - 1| per unit of kappa1 t.
  double trace_drift_per_time = 1e-8;
  std::size_t max_steps_per_interval = 5'000'000;
};

// Integrates d rho/dt = L rho with adaptive Dormand-Prince 5(4) and returns
// Hermitized states at every grid time (the first grid time may equal 0).
std::vector<DensityMatrix> evolve(const Liouvillian& l, const DensityMatrix& rho0, const std::vector<double>& t_grid,
                                  const EvolveOptions& opts = {});

// ---------------------------------------------------------------------------
// Observables and diagnostics

double mean_photon(const DensityMatrix& rho, int mode);
// <n(n-1)> / <n>^2; throws UndefinedObservable when <n> <= kPhotonFloor.
double g2_zero(const DensityMatrix& rho, int mode);
inline constexpr double kPhotonFloor = 1e-14;

// Population of a single basis state.
double population(const DensityMatrix& rho, int n1, int n2, int s = 0);

// Reduced density matrix of one cavity mode (Fock basis 0..n_max).
DenseMatrix mode_state(const DensityMatrix& rho, int mode);
// Coherent-state density matrix in a Fock space truncated at n_max.
DenseMatrix coherent_state(Complex alpha, int n_max);

// [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2. sigma may be sub-normalized (e.g. a
// projected state); both must be PSD within 1e-8.
double fidelity(const DenseMatrix& rho, const DenseMatrix& sigma);
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Sum of singular values of rho - sigma.
double trace_norm_distance(const DenseMatrix& rho, const DenseMatrix& sigma);

// P rho P as a plain matrix (sub-normalized in general).
DenseMatrix project(const Operator& p, const DensityMatrix& rho);

}  // namespace blockade
