#pragma once

// Hamiltonians of the driven two-photon Jaynes-Cummings model with photon
// hopping, in the rotating frame of the pump, plus the structural objects
// derived from them (excitation number, zero-energy manifold projector,
// per-subspace spectra).
//
// All rates and energies are in units of kappa1.

#include <vector>

#include "blockade/hilbert.hpp"

namespace blockade {

struct SystemParams {
  double g = 0.0;       // three-body (two-photon) coupling
  double J = 0.0;       // two-body hopping
  double Omega = 0.0;   // drive amplitude on mode 1
  double Delta = 0.0;   // pump-cavity detuning
  double kappa1 = 1.0;  // unit of rates
  double kappa2 = 1.0;
  double gamma = 0.0;
  double Gamma1 = 0.0;  // two-photon loss, mode 1
  double Gamma2 = 0.0;  // two-photon loss, mode 2

  void validate() const;
  bool operator==(const SystemParams&) const = default;
};

// N = 2 sigma^dag sigma + n1 + n2.
Operator weighted_excitation_number(const HilbertSpec& spec);

// J (a1^dag a2 + a2^dag a1) + g (a1 a2 sigma^dag + sigma a1^dag a2^dag)
Operator interaction_hamiltonian(const HilbertSpec& spec, const SystemParams& p);

// Omega (a1 + a1^dag)
Operator drive_hamiltonian(const HilbertSpec& spec, const SystemParams& p);

// -Delta N + H_int + H_drive
Operator total_hamiltonian(const HilbertSpec& spec, const SystemParams& p);

// -(i/2)(kappa1 n1 + kappa2 n2 + gamma sigma^dag sigma). Provided for analysis;
// no non-Hermitian propagator is built on it.
Operator nonhermitian_part(const HilbertSpec& spec, const SystemParams& p);

// Orthogonal projector onto span{|0,0,g>, |n,0,g>, |0,n,g> : n >= 1}.
Operator manifold_projector(const HilbertSpec& spec);

struct SubspaceSpectrum {
  int n = 0;
  HilbertSpec spec;
  std::vector<BasisLabel> basis;       // lexicographic in (n1, n2, s)
  Eigen::VectorXd eigenvalues;         // ascending
  std::vector<StateVector> eigenvectors;  // embedded in spec; largest component real positive
};

// Diagonalizes H_int restricted to the states with weighted excitation n.
// The truncation must hold every such state (n <= n_max_1 and n <= n_max_2).
SubspaceSpectrum subspace_spectrum(const SystemParams& p, int n, const HilbertSpec& truncation);
SubspaceSpectrum subspace_spectrum(const SystemParams& p, int n);

// Smallest eigenvalue magnitude of the (2s+1)-excitation block, computed
// numerically.
double splitting(const SystemParams& p, int s);

// Leading-order value T_{2s} J (J/g)^{2s}, T_{2s} = (2s+1)!!/(2s)!!.
double splitting_asymptote(const SystemParams& p, int s);

}  // namespace blockade
