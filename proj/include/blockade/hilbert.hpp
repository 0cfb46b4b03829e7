#pragma once

// Truncated state spaces and the sparse operator algebra built on them.
//
// Two spaces are supported:
//   HilbertSpec   - Fock(mode 1) x Fock(mode 2) x qubit, the full model space.
//                   Basis index of |n1,n2>|s> is ((n1*(n_max_2+1)) + n2)*2 + s,
//                   s = 0 for |g>, 1 for |e>. Mode 1 is slowest, qubit fastest.
//   ReducedBasis  - the projected manifold {|0,0>, |0,1>, |1,0>, ..., |N,0>}
//                   (qubit in |g>), used by the reduced master equation.
// Index 0 is the vacuum in both spaces.

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "blockade/error.hpp"

namespace blockade {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

struct HilbertSpec {
  int n_max_1 = 10;
  int n_max_2 = 10;

  std::size_t dim() const {
    return 2 * static_cast<std::size_t>(n_max_1 + 1) * static_cast<std::size_t>(n_max_2 + 1);
  }
  std::size_t index(int n1, int n2, int s) const {
    return ((static_cast<std::size_t>(n1) * (n_max_2 + 1)) + n2) * 2 + s;
  }
  bool contains(int n1, int n2, int s) const {
    return n1 >= 0 && n1 <= n_max_1 && n2 >= 0 && n2 <= n_max_2 && (s == 0 || s == 1);
  }
  void validate() const;
  bool operator==(const HilbertSpec&) const = default;
};

struct BasisLabel {
  int n1 = 0;
  int n2 = 0;
  int s = 0;  // 0 = g, 1 = e
  bool operator==(const BasisLabel&) const = default;
};

BasisLabel label_of(const HilbertSpec& spec, std::size_t index);

struct ReducedBasis {
  int n_max_ph = 30;

  std::size_t dim() const { return static_cast<std::size_t>(n_max_ph) + 2; }
  // Valid labels: (0,0), (0,1), (n,0) with 1 <= n <= n_max_ph.
  std::size_t index(int n1, int n2) const;
  bool contains(int n1, int n2) const {
    return (n1 == 0 && (n2 == 0 || n2 == 1)) || (n2 == 0 && n1 >= 1 && n1 <= n_max_ph);
  }
  BasisLabel label(std::size_t index) const;
  void validate() const;
  bool operator==(const ReducedBasis&) const = default;
};

using Space = std::variant<HilbertSpec, ReducedBasis>;

std::size_t dimension(const Space& space);
std::string describe(const Space& space);
// Weighted excitation 2*s + n1 + n2 of a basis state.
int excitation_of(const Space& space, std::size_t index);
// Photon number of mode 1 or 2 in a basis state.
int photons_of(const Space& space, std::size_t index, int mode);
// True for basis states on the truncation edge of either mode.
bool on_truncation_edge(const Space& space, std::size_t index);

void require_same_space(const Space& a, const Space& b, const char* where);

class Operator {
 public:
  Operator(Space space, SparseMatrix matrix);

  static Operator zero(const Space& space);
  static Operator identity(const Space& space);

  const Space& space() const { return space_; }
  const SparseMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return dimension(space_); }

  Operator adjoint() const;
  DenseMatrix dense() const { return DenseMatrix(matrix_); }
  Complex element(std::size_t row, std::size_t col) const { return matrix_.coeff(row, col); }

  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(const Operator& rhs) const;
  Operator operator*(Complex c) const;
  friend Operator operator*(Complex c, const Operator& op) { return op * c; }

  bool operator==(const Operator& rhs) const;

 private:
  Space space_;
  SparseMatrix matrix_;
};

class StateVector {
 public:
  StateVector(Space space, DenseVector amplitudes);

  static StateVector basis(const HilbertSpec& spec, int n1, int n2, int s);
  static StateVector basis(const ReducedBasis& basis, int n1, int n2);

  const Space& space() const { return space_; }
  const DenseVector& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }
  StateVector normalized() const;

 private:
  Space space_;
  DenseVector amplitudes_;
};

StateVector apply(const Operator& op, const StateVector& psi);

// Hermitian, unit-trace, positive semidefinite matrix. The constructor checks
// the invariants (Hermitian to 1e-10, trace to 1e-8, eigenvalues >= -1e-8).
class DensityMatrix {
 public:
  static constexpr double kHermiticityTol = 1e-10;
  static constexpr double kTraceTol = 1e-8;
  static constexpr double kNegativeEigTol = 1e-8;

  DensityMatrix(Space space, DenseMatrix entries);

  static DensityMatrix pure(const StateVector& psi);

  const Space& space() const { return space_; }
  const DenseMatrix& entries() const { return entries_; }
  std::size_t dim() const { return dimension(space_); }
  Complex operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  double population(std::size_t i) const { return entries_(i, i).real(); }

 private:
  Space space_;
  DenseMatrix entries_;
};

// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const DenseMatrix& m);

Operator annihilation(const HilbertSpec& spec, int mode);
Operator creation(const HilbertSpec& spec, int mode);
Operator number(const HilbertSpec& spec, int mode);
Operator qubit_lowering(const HilbertSpec& spec);

// Sum of coefficient * operator over the list.
Operator compose(const std::vector<std::pair<Operator, Complex>>& terms);
Operator adjoint(const Operator& op);
Operator commutator(const Operator& a, const Operator& b);
Complex expectation(const Operator& op, const DensityMatrix& rho);
Complex expectation(const Operator& op, const StateVector& psi);

// Largest absolute matrix element; used as the operator "size" in tests.
double max_abs(const Operator& op);

}  // namespace blockade
