#include "blockade/lindblad.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace blockade {

void LindbladModel::validate() const {
  for (const auto& j : jumps) {
    require_same_space(hamiltonian.space(), j.op.space(), "LindbladModel");
    if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) {
      throw Error(ErrorCode::InvalidArgument, "LindbladModel: channel '" + j.label + "' has a negative rate");
    }
  }
  const SparseMatrix& h = hamiltonian.matrix();
  const SparseMatrix diff = h - SparseMatrix(h.adjoint());
  double dev = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) dev = std::max(dev, std::abs(it.value()));
  }
  if (dev > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "LindbladModel: Hamiltonian is not Hermitian");
  }
}

LindbladModel build_fme(const HilbertSpec& spec, const SystemParams& p) {
  p.validate();
  const Operator a1 = annihilation(spec, 1);
  const Operator a2 = annihilation(spec, 2);
  LindbladModel m{total_hamiltonian(spec, p), {}};
  m.jumps.push_back({a1, p.kappa1, "a1"});
  m.jumps.push_back({a2, p.kappa2, "a2"});
  m.jumps.push_back({qubit_lowering(spec), p.gamma, "sigma"});
  if (p.Gamma1 > 0.0) m.jumps.push_back({a1 * a1, p.Gamma1, "a1^2"});
  if (p.Gamma2 > 0.0) m.jumps.push_back({a2 * a2, p.Gamma2, "a2^2"});
  return m;
}

LindbladModel empty_model(const Space& space) { return LindbladModel{Operator::zero(space), {}}; }

Liouvillian::Liouvillian(std::shared_ptr<const LindbladModel> model, SparseMatrix superop)
    : model_(std::move(model)), superop_(std::move(superop)) {}

DenseMatrix Liouvillian::apply(const DenseMatrix& rho) const {
  return unvectorize(superop_ * vectorize(rho), dim());
}

Liouvillian liouvillian(const LindbladModel& model, const LiouvillianOptions& opts) {
  model.validate();
  const std::size_t d = model.dim();
  if (d * d > opts.max_unknowns) {
    throw Error(ErrorCode::DimensionOverflow, "liouvillian: " + std::to_string(d * d) +
                                                  " unknowns exceed the cap of " + std::to_string(opts.max_unknowns));
  }
  const auto n = static_cast<Eigen::Index>(d);
  SparseMatrix id(n, n);
  id.setIdentity();
  const SparseMatrix& h = model.hamiltonian.matrix();
  const SparseMatrix ht = h.transpose();
  SparseMatrix l = Complex(0.0, -1.0) * (SparseMatrix(Eigen::kroneckerProduct(id, h)) -
                                         SparseMatrix(Eigen::kroneckerProduct(ht, id)));
  for (const auto& j : model.jumps) {
    if (j.rate == 0.0) continue;
    const SparseMatrix& o = j.op.matrix();
    const SparseMatrix ono = SparseMatrix(o.adjoint()) * o;
    const SparseMatrix onot = ono.transpose();
    const SparseMatrix oc = o.conjugate();
    l += j.rate * (SparseMatrix(Eigen::kroneckerProduct(oc, o)) -
                   0.5 * SparseMatrix(Eigen::kroneckerProduct(id, ono)) -
                   0.5 * SparseMatrix(Eigen::kroneckerProduct(onot, id)));
  }
  l.prune(Complex(0.0), 0.0);
  l.makeCompressed();
  return Liouvillian(std::make_shared<const LindbladModel>(model), std::move(l));
}

DenseMatrix apply_lindbladian(const LindbladModel& model, const DenseMatrix& rho) {
  const SparseMatrix& h = model.hamiltonian.matrix();
  DenseMatrix out = Complex(0.0, -1.0) * (DenseMatrix(h * rho) - DenseMatrix(rho * h));
  for (const auto& j : model.jumps) {
    if (j.rate == 0.0) continue;
    const SparseMatrix& o = j.op.matrix();
    const SparseMatrix od = o.adjoint();
    const SparseMatrix ono = od * o;
    const DenseMatrix orho = o * rho;
    out += j.rate * (DenseMatrix(orho * od) - 0.5 * DenseMatrix(ono * rho) - 0.5 * DenseMatrix(rho * ono));
  }
  return out;
}

DenseVector vectorize(const DenseMatrix& m) { return Eigen::Map<const DenseVector>(m.data(), m.size()); }

DenseMatrix unvectorize(const DenseVector& v, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  if (v.size() != n * n) throw Error(ErrorCode::SpaceMismatch, "unvectorize: length is not d^2");
  return Eigen::Map<const DenseMatrix>(v.data(), n, n);
}

}  // namespace blockade
