#include "blockade/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blockade {

namespace {
void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, std::string("SystemParams: ") + name + " must be finite and >= 0");
  }
}
}  // namespace

void SystemParams::validate() const {
  require_nonnegative(g, "g");
  require_nonnegative(J, "J");
  require_nonnegative(Omega, "Omega");
  require_nonnegative(kappa2, "kappa2");
  require_nonnegative(gamma, "gamma");
  require_nonnegative(Gamma1, "Gamma1");
  require_nonnegative(Gamma2, "Gamma2");
  if (!(kappa1 > 0.0) || !std::isfinite(kappa1)) {
    throw Error(ErrorCode::InvalidArgument, "SystemParams: kappa1 must be > 0");
  }
  if (!std::isfinite(Delta)) throw Error(ErrorCode::InvalidArgument, "SystemParams: Delta must be finite");
}

Operator weighted_excitation_number(const HilbertSpec& spec) {
  const Operator sm = qubit_lowering(spec);
  return compose({{sm.adjoint() * sm, 2.0}, {number(spec, 1), 1.0}, {number(spec, 2), 1.0}});
}

Operator interaction_hamiltonian(const HilbertSpec& spec, const SystemParams& p) {
  const Operator a1 = annihilation(spec, 1);
  const Operator a2 = annihilation(spec, 2);
  const Operator sm = qubit_lowering(spec);
  const Operator hop = a1.adjoint() * a2 + a2.adjoint() * a1;
  const Operator three = a1 * a2 * sm.adjoint() + sm * a1.adjoint() * a2.adjoint();
  return compose({{hop, p.J}, {three, p.g}});
}

Operator drive_hamiltonian(const HilbertSpec& spec, const SystemParams& p) {
  const Operator a1 = annihilation(spec, 1);
  return (a1 + a1.adjoint()) * Complex(p.Omega);
}

Operator total_hamiltonian(const HilbertSpec& spec, const SystemParams& p) {
  p.validate();
  return compose({{weighted_excitation_number(spec), -p.Delta},
                  {interaction_hamiltonian(spec, p), 1.0},
                  {drive_hamiltonian(spec, p), 1.0}});
}

Operator nonhermitian_part(const HilbertSpec& spec, const SystemParams& p) {
  const Operator sm = qubit_lowering(spec);
  const Complex half_i(0.0, -0.5);
  return compose({{number(spec, 1), half_i * p.kappa1},
                  {number(spec, 2), half_i * p.kappa2},
                  {sm.adjoint() * sm, half_i * p.gamma}});
}

Operator manifold_projector(const HilbertSpec& spec) {
  std::vector<Eigen::Triplet<Complex>> t;
  for (int n = 0; n <= std::max(spec.n_max_1, spec.n_max_2); ++n) {
    if (n <= spec.n_max_1) {
      const auto i = static_cast<int>(spec.index(n, 0, 0));
      t.emplace_back(i, i, 1.0);
    }
    if (n >= 1 && n <= spec.n_max_2) {
      const auto i = static_cast<int>(spec.index(0, n, 0));
      t.emplace_back(i, i, 1.0);
    }
  }
  const auto d = static_cast<Eigen::Index>(spec.dim());
  SparseMatrix m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return Operator(spec, std::move(m));
}

SubspaceSpectrum subspace_spectrum(const SystemParams& p, int n, const HilbertSpec& truncation) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "subspace_spectrum: n must be >= 0");
  if (n > truncation.n_max_1 || n > truncation.n_max_2) {
    throw Error(ErrorCode::TruncationTooSmall,
                "subspace_spectrum: truncation " + describe(truncation) + " cannot hold the " +
                    std::to_string(n) + "-excitation subspace");
  }
  SubspaceSpectrum out;
  out.n = n;
  out.spec = truncation;
  std::vector<std::size_t> indices;
  for (int n1 = 0; n1 <= n; ++n1) {
    for (int n2 = 0; n1 + n2 <= n; ++n2) {
      for (int s = 0; s < 2; ++s) {
        if (2 * s + n1 + n2 == n) {
          out.basis.push_back({n1, n2, s});
          indices.push_back(truncation.index(n1, n2, s));
        }
      }
    }
  }
  const DenseMatrix h = interaction_hamiltonian(truncation, p).dense();
  const auto k = static_cast<Eigen::Index>(indices.size());
  DenseMatrix block(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) block(r, c) = h(indices[r], indices[c]);
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(block);
  out.eigenvalues = es.eigenvalues();
  for (Eigen::Index j = 0; j < k; ++j) {
    DenseVector v = es.eigenvectors().col(j);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v(imax)) / std::abs(v(imax));
    DenseVector full = DenseVector::Zero(static_cast<Eigen::Index>(truncation.dim()));
    for (Eigen::Index r = 0; r < k; ++r) full(indices[r]) = v(r);
    out.eigenvectors.emplace_back(truncation, std::move(full));
  }
  return out;
}

SubspaceSpectrum subspace_spectrum(const SystemParams& p, int n) {
  return subspace_spectrum(p, n, HilbertSpec{std::max(n, 0), std::max(n, 0)});
}

double splitting(const SystemParams& p, int s) {
  if (s < 0) throw Error(ErrorCode::InvalidArgument, "splitting: s must be >= 0");
  const SubspaceSpectrum sp = subspace_spectrum(p, 2 * s + 1);
  return sp.eigenvalues.cwiseAbs().minCoeff();
}

double splitting_asymptote(const SystemParams& p, int s) {
  if (s < 0) throw Error(ErrorCode::InvalidArgument, "splitting_asymptote: s must be >= 0");
  if (s == 0) return p.J;
  if (p.g == 0.0) throw Error(ErrorCode::InvalidArgument, "splitting_asymptote: g must be > 0");
  // (2s+1)!!/(2s)!! = prod_{k=1..s} (2k+1)/(2k)
  double t = 1.0;
  for (int k = 1; k <= s; ++k) t *= double(2 * k + 1) / double(2 * k);
  return t * p.J * std::pow(p.J / p.g, 2 * s);
}

}  // namespace blockade
