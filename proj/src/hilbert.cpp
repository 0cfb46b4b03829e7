#include "blockade/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace blockade {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::SpaceMismatch: return "space mismatch";
    case ErrorCode::TruncationTooSmall: return "truncation too small";
    case ErrorCode::DimensionOverflow: return "dimension overflow";
    case ErrorCode::SingularSystem: return "singular system";
    case ErrorCode::NotConverged: return "not converged";
    case ErrorCode::NotPositive: return "not positive semidefinite";
    case ErrorCode::UndefinedObservable: return "undefined observable";
    case ErrorCode::IntegrationFailed: return "integration failed";
    case ErrorCode::ConfigError: return "configuration error";
    case ErrorCode::IoError: return "I/O error";
  }
  return "unknown error";
}

void HilbertSpec::validate() const {
  if (n_max_1 < 0 || n_max_2 < 0) {
    throw Error(ErrorCode::InvalidArgument, "HilbertSpec: photon truncations must be nonnegative");
  }
}

BasisLabel label_of(const HilbertSpec& spec, std::size_t index) {
  BasisLabel l;
  l.s = static_cast<int>(index % 2);
  const std::size_t modes = index / 2;
  l.n2 = static_cast<int>(modes % (spec.n_max_2 + 1));
  l.n1 = static_cast<int>(modes / (spec.n_max_2 + 1));
  return l;
}

std::size_t ReducedBasis::index(int n1, int n2) const {
  if (!contains(n1, n2)) {
    std::ostringstream os;
    os << "ReducedBasis: |" << n1 << "," << n2 << "> is not a basis state";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  if (n1 == 0) return static_cast<std::size_t>(n2);
  return static_cast<std::size_t>(n1) + 1;
}

BasisLabel ReducedBasis::label(std::size_t index) const {
  if (index == 0) return {0, 0, 0};
  if (index == 1) return {0, 1, 0};
  return {static_cast<int>(index) - 1, 0, 0};
}

void ReducedBasis::validate() const {
  if (n_max_ph < 1) {
    throw Error(ErrorCode::InvalidArgument, "ReducedBasis: n_max_ph must be at least 1");
  }
}

std::size_t dimension(const Space& space) {
  return std::visit([](const auto& s) { return s.dim(); }, space);
}

std::string describe(const Space& space) {
  std::ostringstream os;
  if (const auto* h = std::get_if<HilbertSpec>(&space)) {
    os << "fock(" << h->n_max_1 << "," << h->n_max_2 << ")xqubit";
  } else {
    os << "reduced(" << std::get<ReducedBasis>(space).n_max_ph << ")";
  }
  return os.str();
}

namespace {
BasisLabel any_label(const Space& space, std::size_t index) {
  if (const auto* h = std::get_if<HilbertSpec>(&space)) return label_of(*h, index);
  return std::get<ReducedBasis>(space).label(index);
}
}  // namespace

int excitation_of(const Space& space, std::size_t index) {
  const BasisLabel l = any_label(space, index);
  return 2 * l.s + l.n1 + l.n2;
}

int photons_of(const Space& space, std::size_t index, int mode) {
  const BasisLabel l = any_label(space, index);
  return mode == 1 ? l.n1 : l.n2;
}

bool on_truncation_edge(const Space& space, std::size_t index) {
  const BasisLabel l = any_label(space, index);
  if (const auto* h = std::get_if<HilbertSpec>(&space)) {
    return l.n1 == h->n_max_1 || l.n2 == h->n_max_2;
  }
  return l.n1 == std::get<ReducedBasis>(space).n_max_ph;
}

void require_same_space(const Space& a, const Space& b, const char* where) {
  if (!(a == b)) {
    throw Error(ErrorCode::SpaceMismatch,
                std::string(where) + ": operands live on " + describe(a) + " and " + describe(b));
  }
}

Operator::Operator(Space space, SparseMatrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(dimension(space_));
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw Error(ErrorCode::SpaceMismatch, "Operator: matrix shape does not match " + describe(space_));
  }
  matrix_.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return v != Complex(0.0); });
  matrix_.makeCompressed();
}

Operator Operator::zero(const Space& space) {
  const auto d = static_cast<Eigen::Index>(dimension(space));
  return Operator(space, SparseMatrix(d, d));
}

Operator Operator::identity(const Space& space) {
  const auto d = static_cast<Eigen::Index>(dimension(space));
  SparseMatrix m(d, d);
  m.setIdentity();
  return Operator(space, std::move(m));
}

Operator Operator::adjoint() const { return Operator(space_, SparseMatrix(matrix_.adjoint())); }

Operator Operator::operator+(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "operator+");
  return Operator(space_, SparseMatrix(matrix_ + rhs.matrix_));
}

Operator Operator::operator-(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "operator-");
  return Operator(space_, SparseMatrix(matrix_ - rhs.matrix_));
}

Operator Operator::operator*(const Operator& rhs) const {
  require_same_space(space_, rhs.space_, "operator*");
  return Operator(space_, SparseMatrix(matrix_ * rhs.matrix_));
}

Operator Operator::operator*(Complex c) const { return Operator(space_, SparseMatrix(matrix_ * c)); }

bool Operator::operator==(const Operator& rhs) const {
  if (!(space_ == rhs.space_)) return false;
  const SparseMatrix diff = matrix_ - rhs.matrix_;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      if (it.value() != Complex(0.0)) return false;
    }
  }
  return true;
}

StateVector::StateVector(Space space, DenseVector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != dimension(space_)) {
    throw Error(ErrorCode::SpaceMismatch, "StateVector: length does not match " + describe(space_));
  }
}

StateVector StateVector::basis(const HilbertSpec& spec, int n1, int n2, int s) {
  if (!spec.contains(n1, n2, s)) {
    throw Error(ErrorCode::InvalidArgument, "StateVector::basis: label outside the truncation");
  }
  DenseVector v = DenseVector::Zero(static_cast<Eigen::Index>(spec.dim()));
  v(static_cast<Eigen::Index>(spec.index(n1, n2, s))) = 1.0;
  return StateVector(spec, std::move(v));
}

StateVector StateVector::basis(const ReducedBasis& basis, int n1, int n2) {
  DenseVector v = DenseVector::Zero(static_cast<Eigen::Index>(basis.dim()));
  v(static_cast<Eigen::Index>(basis.index(n1, n2))) = 1.0;
  return StateVector(basis, std::move(v));
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "StateVector: cannot normalize the zero vector");
  return StateVector(space_, amplitudes_ / n);
}

StateVector apply(const Operator& op, const StateVector& psi) {
  require_same_space(op.space(), psi.space(), "apply");
  return StateVector(op.space(), op.matrix() * psi.amplitudes());
}

double min_eigenvalue(const DenseMatrix& m) {
  const DenseMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(Space space, DenseMatrix entries) : space_(std::move(space)), entries_(std::move(entries)) {
  const auto d = static_cast<Eigen::Index>(dimension(space_));
  if (entries_.rows() != d || entries_.cols() != d) {
    throw Error(ErrorCode::SpaceMismatch, "DensityMatrix: shape does not match " + describe(space_));
  }
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermiticityTol) {
    throw Error(ErrorCode::InvalidArgument, "DensityMatrix: not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw Error(ErrorCode::InvalidArgument, "DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
  }
  const double lmin = min_eigenvalue(entries_);
  if (lmin < -kNegativeEigTol) {
    throw Error(ErrorCode::NotPositive, "DensityMatrix: negative eigenvalue " + std::to_string(lmin));
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const StateVector n = psi.normalized();
  return DensityMatrix(n.space(), n.amplitudes() * n.amplitudes().adjoint());
}

namespace {
void check_mode(int mode) {
  if (mode != 1 && mode != 2) {
    throw Error(ErrorCode::InvalidArgument, "mode index must be 1 or 2, got " + std::to_string(mode));
  }
}

using Triplet = Eigen::Triplet<Complex>;

Operator from_triplets(const HilbertSpec& spec, const std::vector<Triplet>& t) {
  const auto d = static_cast<Eigen::Index>(spec.dim());
  SparseMatrix m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return Operator(spec, std::move(m));
}
}  // namespace

Operator annihilation(const HilbertSpec& spec, int mode) {
  spec.validate();
  check_mode(mode);
  std::vector<Triplet> t;
  for (int n1 = 0; n1 <= spec.n_max_1; ++n1) {
    for (int n2 = 0; n2 <= spec.n_max_2; ++n2) {
      for (int s = 0; s < 2; ++s) {
        const int n = mode == 1 ? n1 : n2;
        if (n == 0) continue;
        const std::size_t to = mode == 1 ? spec.index(n1 - 1, n2, s) : spec.index(n1, n2 - 1, s);
        t.emplace_back(static_cast<int>(to), static_cast<int>(spec.index(n1, n2, s)), std::sqrt(double(n)));
      }
    }
  }
  return from_triplets(spec, t);
}

Operator creation(const HilbertSpec& spec, int mode) { return annihilation(spec, mode).adjoint(); }

Operator number(const HilbertSpec& spec, int mode) {
  check_mode(mode);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    const BasisLabel l = label_of(spec, i);
    const int n = mode == 1 ? l.n1 : l.n2;
    if (n != 0) t.emplace_back(static_cast<int>(i), static_cast<int>(i), double(n));
  }
  return from_triplets(spec, t);
}

Operator qubit_lowering(const HilbertSpec& spec) {
  spec.validate();
  std::vector<Triplet> t;
  for (int n1 = 0; n1 <= spec.n_max_1; ++n1) {
    for (int n2 = 0; n2 <= spec.n_max_2; ++n2) {
      t.emplace_back(static_cast<int>(spec.index(n1, n2, 0)), static_cast<int>(spec.index(n1, n2, 1)), 1.0);
    }
  }
  return from_triplets(spec, t);
}

Operator compose(const std::vector<std::pair<Operator, Complex>>& terms) {
  if (terms.empty()) throw Error(ErrorCode::InvalidArgument, "compose: empty term list");
  const Space& space = terms.front().first.space();
  const auto d = static_cast<Eigen::Index>(dimension(space));
  SparseMatrix sum(d, d);
  for (const auto& [op, c] : terms) {
    require_same_space(space, op.space(), "compose");
    sum += op.matrix() * c;
  }
  return Operator(space, std::move(sum));
}

Operator adjoint(const Operator& op) { return op.adjoint(); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Complex expectation(const Operator& op, const DensityMatrix& rho) {
  require_same_space(op.space(), rho.space(), "expectation");
  // Tr[O rho] = sum_{ij} O_ij rho_ji
  Complex acc = 0.0;
  const SparseMatrix& m = op.matrix();
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      acc += it.value() * rho.entries()(it.col(), it.row());
    }
  }
  return acc;
}

Complex expectation(const Operator& op, const StateVector& psi) {
  require_same_space(op.space(), psi.space(), "expectation");
  return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

double max_abs(const Operator& op) {
  double m = 0.0;
  const SparseMatrix& s = op.matrix();
  for (Eigen::Index k = 0; k < s.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(s, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

}  // namespace blockade
