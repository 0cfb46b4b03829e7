#include <doctest.h>

#include <cmath>
#include <random>

#include "blockade/hilbert.hpp"
#include "oracles.hpp"

using namespace blockade;

namespace {

Operator random_operator(const HilbertSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto d = static_cast<Eigen::Index>(spec.dim());
  DenseMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = (u(rng) > 0.6) ? Complex(u(rng), u(rng)) : Complex(0.0);
  }
  return Operator(spec, m.sparseView());
}

}  // namespace

TEST_CASE("basis indexing is mode 1 slowest, qubit fastest") {
  const HilbertSpec spec{3, 4};
  CHECK(spec.dim() == 2 * 4 * 5);
  std::size_t expected = 0;
  for (int n1 = 0; n1 <= 3; ++n1) {
    for (int n2 = 0; n2 <= 4; ++n2) {
      for (int s = 0; s < 2; ++s) {
        CHECK(spec.index(n1, n2, s) == expected);
        CHECK(label_of(spec, expected) == BasisLabel{n1, n2, s});
        ++expected;
      }
    }
  }
  CHECK(HilbertSpec{}.dim() == 242);
}

TEST_CASE("ladder operators agree with dense Kronecker products") {
  const HilbertSpec spec{2, 3};
  const oracle::FullOps o = oracle::full_ops(2, 3);
  CHECK((annihilation(spec, 1).dense() - o.a1).norm() == 0.0);
  CHECK((annihilation(spec, 2).dense() - o.a2).norm() == 0.0);
  CHECK((qubit_lowering(spec).dense() - o.sm).norm() == 0.0);
  CHECK((creation(spec, 1).dense() - o.a1.adjoint()).norm() == 0.0);
}

TEST_CASE("annihilation matrix elements and edge behaviour") {
  const HilbertSpec spec{2, 2};
  const Operator a1 = annihilation(spec, 1);
  CHECK(a1.element(spec.index(1, 0, 0), spec.index(2, 0, 0)).real() == doctest::Approx(1.41421356).epsilon(1e-9));
  for (int n2 = 0; n2 <= 2; ++n2) {
    for (int s = 0; s < 2; ++s) CHECK(apply(a1, StateVector::basis(spec, 0, n2, s)).norm() == 0.0);
  }
  const StateVector two = StateVector::basis(spec, 2, 0, 0);
  const StateVector nt = apply(number(spec, 1), two);
  CHECK((nt.amplitudes() - 2.0 * two.amplitudes()).norm() == 0.0);
  // a^dag maps the top Fock level to zero.
  CHECK(apply(creation(spec, 1), two).norm() == 0.0);
  CHECK(apply(creation(spec, 2), StateVector::basis(spec, 0, 2, 1)).norm() == 0.0);
  CHECK_THROWS_AS(annihilation(spec, 3), Error);
}

TEST_CASE("number operator spectrum is exactly 0..n_max") {
  const HilbertSpec spec{4, 2};
  for (int mode : {1, 2}) {
    const DenseMatrix n = number(spec, mode).dense();
    CHECK(n.isDiagonal());
    const int top = mode == 1 ? spec.n_max_1 : spec.n_max_2;
    std::vector<int> seen(top + 1, 0);
    for (Eigen::Index i = 0; i < n.rows(); ++i) {
      const double v = n(i, i).real();
      CHECK(v == std::round(v));
      CHECK(v >= 0.0);
      CHECK(v <= top);
      seen[static_cast<int>(v)] = 1;
    }
    for (int k = 0; k <= top; ++k) CHECK(seen[k] == 1);
  }
}

TEST_CASE("qubit lowering") {
  const HilbertSpec spec{1, 1};
  const Operator sm = qubit_lowering(spec);
  const StateVector out = apply(sm, StateVector::basis(spec, 0, 0, 1));
  CHECK((out.amplitudes() - StateVector::basis(spec, 0, 0, 0).amplitudes()).norm() == 0.0);
  CHECK(apply(sm, StateVector::basis(spec, 1, 0, 0)).norm() == 0.0);
  CHECK((sm * sm).matrix().nonZeros() == 0);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es((sm.adjoint() * sm).dense());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    CHECK((std::abs(v) < 1e-14 || std::abs(v - 1.0) < 1e-14));
  }
}

TEST_CASE("commutator, adjoint and expectation") {
  const HilbertSpec spec{5, 2};
  const Operator a1 = annihilation(spec, 1);
  const DenseMatrix c = commutator(a1, a1.adjoint()).dense();
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    const BasisLabel l = label_of(spec, i);
    if (l.n1 < spec.n_max_1) CHECK(std::abs(c(i, i) - 1.0) < 1e-14);
  }
  std::mt19937_64 rng(7);
  const Operator r = random_operator(spec, rng);
  CHECK(adjoint(adjoint(r)) == r);
  const DensityMatrix rho = DensityMatrix::pure(StateVector::basis(spec, 1, 0, 0));
  CHECK(expectation(number(spec, 1), rho) == Complex(1.0));
  CHECK(expectation(number(spec, 2), rho) == Complex(0.0));
}

TEST_CASE("compose is linear in its coefficients") {
  const HilbertSpec spec{2, 2};
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Operator a = random_operator(spec, rng);
    const Operator b = random_operator(spec, rng);
    const Complex x(0.3 * trial, -1.1);
    const Complex y(2.0, 0.5);
    const DenseMatrix lhs = compose({{a, x}, {b, y}}).dense();
    const DenseMatrix rhs = x * a.dense() + y * b.dense();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("operators store no explicit zeros") {
  const HilbertSpec spec{3, 3};
  const Operator a1 = annihilation(spec, 1);
  const Operator z = a1 - a1;
  CHECK(z.matrix().nonZeros() == 0);
  const Operator sq = qubit_lowering(spec) * qubit_lowering(spec);
  CHECK(sq.matrix().nonZeros() == 0);
}

TEST_CASE("space mismatch is an error") {
  const Operator a = annihilation(HilbertSpec{2, 2}, 1);
  const Operator b = annihilation(HilbertSpec{2, 3}, 1);
  CHECK_THROWS_AS(a + b, Error);
  try {
    (void)(a * b);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpaceMismatch);
  }
}

TEST_CASE("density matrix invariants are enforced") {
  const HilbertSpec spec{1, 1};
  const auto d = static_cast<Eigen::Index>(spec.dim());
  DenseMatrix m = DenseMatrix::Zero(d, d);
  m(0, 0) = 0.5;
  CHECK_THROWS_AS(DensityMatrix(spec, m), Error);  // trace
  m(1, 1) = 0.5;
  m(0, 1) = Complex(0.0, 0.1);
  CHECK_THROWS_AS(DensityMatrix(spec, m), Error);  // not Hermitian
  m(1, 0) = Complex(0.0, -0.1);
  CHECK_NOTHROW(DensityMatrix(spec, m));
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  try {
    DensityMatrix bad(spec, m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositive);
  }
}

TEST_CASE("reduced basis labels") {
  const ReducedBasis b{4};
  CHECK(b.dim() == 6);
  CHECK(b.index(0, 0) == 0);
  CHECK(b.index(0, 1) == 1);
  for (int n = 1; n <= 4; ++n) CHECK(b.index(n, 0) == static_cast<std::size_t>(n + 1));
  CHECK(b.label(3) == BasisLabel{2, 0, 0});
  CHECK_FALSE(b.contains(0, 2));
  CHECK_FALSE(b.contains(1, 1));
  CHECK(excitation_of(b, b.index(3, 0)) == 3);
  CHECK(on_truncation_edge(b, b.index(4, 0)));
}
