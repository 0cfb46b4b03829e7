#include <cmath>

#include <Eigen/Eigenvalues>

#include "blockade/lindblad.hpp"

namespace blockade {

namespace {

BasisLabel label_in(const Space& space, std::size_t i) {
  if (const auto* h = std::get_if<HilbertSpec>(&space)) return label_of(*h, i);
  return std::get<ReducedBasis>(space).label(i);
}

int mode_cutoff(const Space& space, int mode) {
  if (const auto* h = std::get_if<HilbertSpec>(&space)) return mode == 1 ? h->n_max_1 : h->n_max_2;
  return mode == 1 ? std::get<ReducedBasis>(space).n_max_ph : 1;
}

void require_mode(int mode, const char* where) {
  if (mode != 1 && mode != 2) throw Error(ErrorCode::InvalidArgument, std::string(where) + ": mode must be 1 or 2");
}

DenseMatrix psd_sqrt(const DenseMatrix& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd& w = es.eigenvalues();
  if (w.size() > 0 && w.minCoeff() < -DensityMatrix::kNegativeEigTol) {
    throw Error(ErrorCode::NotPositive, std::string("fidelity: ") + what + " has eigenvalue " +
                                            std::to_string(w.minCoeff()));
  }
  const Eigen::VectorXd r = w.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * r.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double mean_photon(const DensityMatrix& rho, int mode) {
  require_mode(mode, "mean_photon");
  double n = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) n += photons_of(rho.space(), i, mode) * rho.population(i);
  return n;
}

double g2_zero(const DensityMatrix& rho, int mode) {
  require_mode(mode, "g2_zero");
  double n = 0.0;
  double nn = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    const int k = photons_of(rho.space(), i, mode);
    n += k * rho.population(i);
    nn += double(k) * (k - 1) * rho.population(i);
  }
  if (!(n > kPhotonFloor)) {
    throw Error(ErrorCode::UndefinedObservable,
                "g2_zero: mean photon number " + std::to_string(n) + " of mode " + std::to_string(mode) +
                    " is below the floor");
  }
  return nn / (n * n);
}

double population(const DensityMatrix& rho, int n1, int n2, int s) {
  if (const auto* h = std::get_if<HilbertSpec>(&rho.space())) {
    if (!h->contains(n1, n2, s)) throw Error(ErrorCode::InvalidArgument, "population: label outside the space");
    return rho.population(h->index(n1, n2, s));
  }
  const auto& b = std::get<ReducedBasis>(rho.space());
  if (s != 0 || !b.contains(n1, n2)) throw Error(ErrorCode::InvalidArgument, "population: label outside the space");
  return rho.population(b.index(n1, n2));
}

DenseMatrix mode_state(const DensityMatrix& rho, int mode) {
  require_mode(mode, "mode_state");
  const Space& space = rho.space();
  const int cutoff = mode_cutoff(space, mode);
  DenseMatrix out = DenseMatrix::Zero(cutoff + 1, cutoff + 1);
  const std::size_t d = rho.dim();
  std::vector<BasisLabel> labels(d);
  for (std::size_t i = 0; i < d; ++i) labels[i] = label_in(space, i);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const BasisLabel& a = labels[i];
      const BasisLabel& b = labels[j];
      if (a.s != b.s) continue;
      if (mode == 1 && a.n2 == b.n2) out(a.n1, b.n1) += rho(i, j);
      if (mode == 2 && a.n1 == b.n1) out(a.n2, b.n2) += rho(i, j);
    }
  }
  return out;
}

DenseMatrix coherent_state(Complex alpha, int n_max) {
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "coherent_state: n_max must be >= 0");
  DenseVector psi(n_max + 1);
  Complex c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n <= n_max; ++n) {
    psi(n) = c;
    c *= alpha / std::sqrt(double(n + 1));
  }
  psi.normalize();
  return psi * psi.adjoint();
}

double fidelity(const DenseMatrix& rho, const DenseMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw Error(ErrorCode::SpaceMismatch, "fidelity: matrices differ in size");
  }
  const DenseMatrix sr = psd_sqrt(rho, "rho");
  psd_sqrt(sigma, "sigma");
  const DenseMatrix m = sr * sigma * sr;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  const double t = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, t * t);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_space(rho.space(), sigma.space(), "fidelity");
  return fidelity(rho.entries(), sigma.entries());
}

double trace_norm_distance(const DenseMatrix& rho, const DenseMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw Error(ErrorCode::SpaceMismatch, "trace_norm_distance: matrices differ in size");
  }
  const DenseMatrix diff = rho - sigma;
  if ((diff - diff.adjoint()).cwiseAbs().maxCoeff() <= DensityMatrix::kHermiticityTol) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<DenseMatrix> svd(diff);
  return svd.singularValues().sum();
}

DenseMatrix project(const Operator& p, const DensityMatrix& rho) {
  require_same_space(p.space(), rho.space(), "project");
  const SparseMatrix& m = p.matrix();
  return DenseMatrix(m * rho.entries()) * SparseMatrix(m.adjoint());
}

}  // namespace blockade
