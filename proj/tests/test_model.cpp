#include <doctest.h>

#include <algorithm>
#include <random>

#include "blockade/model.hpp"
#include "oracles.hpp"

using namespace blockade;

namespace {

double max_abs_dense(const Operator& op) { return op.matrix().nonZeros() ? max_abs(op) : 0.0; }

bool chiral(const Eigen::VectorXd& ev, double tol) {
  std::vector<double> a(ev.data(), ev.data() + ev.size());
  std::vector<double> b;
  for (double v : a) b.push_back(-v);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("weighted excitation number") {
  const HilbertSpec spec{3, 3};
  const Operator n = weighted_excitation_number(spec);
  CHECK(n.element(spec.index(1, 1, 0), spec.index(1, 1, 0)) == Complex(2.0));
  CHECK(n.element(spec.index(0, 0, 1), spec.index(0, 0, 1)) == Complex(2.0));
  CHECK(n.dense().isDiagonal());
}

TEST_CASE("interaction Hamiltonian action") {
  const HilbertSpec spec{3, 3};
  SystemParams hop;
  hop.J = 1.0;
  const StateVector out = apply(interaction_hamiltonian(spec, hop), StateVector::basis(spec, 1, 0, 0));
  CHECK((out.amplitudes() - StateVector::basis(spec, 0, 1, 0).amplitudes()).norm() < 1e-15);

  SystemParams three;
  three.g = 1.0;
  const StateVector out2 = apply(interaction_hamiltonian(spec, three), StateVector::basis(spec, 1, 1, 0));
  CHECK((out2.amplitudes() - StateVector::basis(spec, 0, 0, 1).amplitudes()).norm() < 1e-15);

  SystemParams p;
  p.g = 1.0;
  p.J = 0.1;
  const DenseVector zero_mode = StateVector::basis(spec, 2, 0, 0).amplitudes() -
                                std::sqrt(2.0) * (p.J / p.g) * StateVector::basis(spec, 0, 0, 1).amplitudes();
  const StateVector z(spec, zero_mode);
  CHECK(apply(interaction_hamiltonian(spec, p), z).norm() < 1e-12);
}

TEST_CASE("Hamiltonians match dense references") {
  const oracle::FullOps o = oracle::full_ops(3, 2);
  oracle::Params op;
  op.g = 1.7;
  op.J = 0.3;
  op.Omega = 0.4;
  op.Delta = -0.25;
  SystemParams p;
  p.g = op.g;
  p.J = op.J;
  p.Omega = op.Omega;
  p.Delta = op.Delta;
  const DenseMatrix h = total_hamiltonian(HilbertSpec{3, 2}, p).dense();
  CHECK((h - oracle::full_hamiltonian(o, op)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((h - h.adjoint()).norm() == 0.0);
}

TEST_CASE("total Hamiltonian special cases") {
  const HilbertSpec spec{4, 4};
  SystemParams p;
  p.g = 2.0;
  p.J = 0.5;
  CHECK(total_hamiltonian(spec, p) == interaction_hamiltonian(spec, p));
  p.Omega = 0.3;
  const Operator h = total_hamiltonian(spec, p);
  CHECK(h.element(spec.index(1, 0, 0), spec.index(0, 0, 0)) == Complex(0.3));
  CHECK(h.element(0, 0) == Complex(0.0));
}

TEST_CASE("excitation number is conserved by the interaction, broken by the drive") {
  const HilbertSpec spec{5, 5};
  const Operator n = weighted_excitation_number(spec);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 10; ++i) {
    SystemParams p;
    p.g = u(rng);
    p.J = u(rng);
    CHECK(max_abs_dense(commutator(interaction_hamiltonian(spec, p), n)) < 1e-12);
  }
  SystemParams d;
  d.Omega = 0.7;
  const Operator a1 = annihilation(spec, 1);
  const Operator c = commutator(drive_hamiltonian(spec, d), n);
  const Operator expect = (a1 - a1.adjoint()) * Complex(d.Omega);
  CHECK(max_abs(c) > 0.0);
  CHECK((c.dense() - expect.dense()).norm() < 1e-12);
}

TEST_CASE("subspace spectra") {
  SystemParams p;
  p.g = 1.0;
  p.J = 1.0;
  const SubspaceSpectrum s1 = subspace_spectrum(p, 1);
  REQUIRE(s1.eigenvalues.size() == 2);
  CHECK(s1.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(s1.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(splitting(p, 0) == doctest::Approx(p.J).epsilon(4e-16));

  p.J = 0.1;
  const SubspaceSpectrum s2 = subspace_spectrum(p, 2);
  CHECK(s2.basis.size() == 4);
  int zeros = 0;
  for (Eigen::Index i = 0; i < s2.eigenvalues.size(); ++i) zeros += std::abs(s2.eigenvalues(i)) < 1e-10;
  CHECK(zeros == 2);

  p.g = 10.0;
  const double ratio = splitting(p, 1) / (1.5 * p.J * std::pow(p.J / p.g, 2));
  CHECK(ratio == doctest::Approx(1.0).epsilon(0.05));

  SystemParams q;
  q.g = 100.0;
  q.J = 1.0;
  CHECK(splitting(q, 1) / splitting_asymptote(q, 1) == doctest::Approx(1.0).epsilon(0.01));
  q.J = 0.0;
  CHECK(splitting(q, 1) == doctest::Approx(0.0));

  CHECK_THROWS_AS(subspace_spectrum(p, 5, HilbertSpec{4, 4}), Error);
}

TEST_CASE("subspace dimension and eigenvector convention") {
  SystemParams p;
  p.g = 1.3;
  p.J = 0.4;
  for (int n = 0; n <= 5; ++n) {
    const HilbertSpec spec{n, n};
    const SubspaceSpectrum s = subspace_spectrum(p, n);
    std::size_t count = 0;
    for (std::size_t i = 0; i < spec.dim(); ++i) count += weighted_excitation_number(spec).element(i, i).real() == n;
    CHECK(s.basis.size() == count);
    CHECK(std::is_sorted(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size()));
    for (const auto& v : s.eigenvectors) {
      Eigen::Index imax = 0;
      v.amplitudes().cwiseAbs().maxCoeff(&imax);
      CHECK(v.amplitudes()(imax).imag() == 0.0);
      CHECK(v.amplitudes()(imax).real() > 0.0);
      CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("chiral symmetry and even-subspace zero modes for random couplings") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    SystemParams p;
    p.g = u(rng);
    p.J = u(rng);
    for (int n = 0; n <= 6; ++n) CHECK(chiral(subspace_spectrum(p, n).eigenvalues, 1e-10));
    for (int s : {1, 2}) {
      const Eigen::VectorXd ev = subspace_spectrum(p, 2 * s).eigenvalues;
      CHECK((ev.array().abs() < 1e-10).count() >= 2);
    }
  }
}

TEST_CASE("zero-mode overlap approaches 2 (J/g)^2") {
  for (double x : {1e-1, 3e-2, 1e-2}) {
    SystemParams p;
    p.g = 1.0;
    p.J = x;
    const HilbertSpec spec{2, 2};
    const SubspaceSpectrum s = subspace_spectrum(p, 2, spec);
    // The analytic zero modes must lie in the numeric null space.
    DenseMatrix v(spec.dim(), 0);
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
      if (std::abs(s.eigenvalues(i)) < 1e-10) {
        v.conservativeResize(Eigen::NoChange, v.cols() + 1);
        v.col(v.cols() - 1) = s.eigenvectors[i].amplitudes();
      }
    }
    REQUIRE(v.cols() == 2);
    const DenseMatrix proj = v * v.adjoint();
    const DenseVector e = StateVector::basis(spec, 0, 0, 1).amplitudes();
    DenseVector z1 = StateVector::basis(spec, 2, 0, 0).amplitudes() - std::sqrt(2.0) * x * e;
    DenseVector z2 = StateVector::basis(spec, 0, 2, 0).amplitudes() - std::sqrt(2.0) * x * e;
    z1.normalize();
    z2.normalize();
    CHECK((z1 - proj * z1).norm() < 1e-10);
    CHECK((z2 - proj * z2).norm() < 1e-10);
    const double overlap = std::abs(z1.dot(z2));
    CHECK(overlap == doctest::Approx(2 * x * x).epsilon(10 * x * x));
  }
}

TEST_CASE("manifold projector") {
  const int n = 4;
  const HilbertSpec spec{n, n};
  const Operator p = manifold_projector(spec);
  const DenseMatrix m = p.dense();
  CHECK(m.trace().real() == 2 * n + 1);
  CHECK(p * p == p);
  CHECK(adjoint(p) == p);
  CHECK(apply(p, StateVector::basis(spec, 1, 1, 0)).norm() == 0.0);
  CHECK(apply(p, StateVector::basis(spec, 0, 3, 0)).norm() == 1.0);
  CHECK(apply(p, StateVector::basis(spec, 0, 0, 1)).norm() == 0.0);
}

TEST_CASE("parameter validation") {
  SystemParams p;
  p.kappa1 = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.kappa1 = 1.0;
  p.g = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.g = 1.0;
  p.Delta = -3.0;
  CHECK_NOTHROW(p.validate());
}
