#pragma once

// Reduced master equation on the zero-energy manifold
// {|0,0>, |0,1>, |1,0>, ..., |N,0>}: model assembly, the closed-form
// three-level steady state, the optimal hopping and infidelity formulas, and a
// numeric brightness optimizer.
//
// Rates are in units of kappa1 (kappa1 = 1 in the closed forms).

#include <utility>

#include "blockade/lindblad.hpp"

namespace blockade {

// Mode-1 ladder restricted to the {|n,0>} chain (mode 1), or the map
// |0,1> -> |0,0> (mode 2).
Operator reduced_annihilation(const ReducedBasis& basis, int mode);

// H = J (|1,0><0,1| + h.c.) + Omega (a1 + a1^dag) on the reduced basis, with
// channels a1 (kappa1), a2 (kappa2), and a1^2 (Gamma1), a2^2 (Gamma2) when
// positive. a2^2 vanishes identically on this basis.
LindbladModel build_rme(const ReducedBasis& basis, const SystemParams& p);

struct ThreeLevelSteadyState {
  // Over {|0>, |L> = |1,0>, |R> = |0,1>}.
  DenseMatrix rho;
  double n1 = 0.0;  // rho_LL
  double n2 = 0.0;  // rho_RR
};

// Populations from the closed form
//   <n1> = 4 Q2 Omega^2 / (1 + 8 Omega^2) / den,  <n2> = 16 Q0 J^2 Omega^2 / den,
//   den = 16 Q0 J^4 + 8 Q1 J^2 + Q2,
//   Q0 = 1 + k2, Q1 = 2 Omega^2 + k2 + k2^2,
//   Q2 = k2 (1 + 8 Omega^2)(4 Omega^2 + k2 + k2^2),
// coherences from the numeric null space of the N = 1 reduced Liouvillian.
ThreeLevelSteadyState three_level_steady_state(double J, double Omega, double kappa2);

// Closed-form <n2> only.
double three_level_n2(double J, double Omega, double kappa2);

// J_opt = [(3 e / 16)((1 + e) - e / (1 + e))]^(1/4), e = kappa2 / kappa1.
double optimal_hopping(double kappa2);

// I_opt = [e(1 + 2e) + r] / [1 + 2e(1 + e) + r], r = sqrt(12 e (1 + e)(1 + e + e^2)).
double optimal_infidelity(double kappa2);

// Leading small-e forms: ((3e/16)^(1/4), sqrt(12 e)).
std::pair<double, double> asymptotic_scalings(double kappa2);

enum class BrightnessTarget { N2, P10 };

struct SearchBox {
  double j_min = 0.0;
  double j_max = 1.0;
  double omega_min = 0.0;
  double omega_max = 2.0;
};

struct BrightnessOptimum {
  double J = 0.0;
  double Omega = 0.0;
  double value = 0.0;
  bool on_boundary = false;
  int evaluations = 0;
};

// Maximizes <n2> (or <1,0|rho|1,0>) of the reduced model over (J, Omega) in the
// box: a 64 x 64 grid, then three rounds of golden-section refinement along
// each coordinate. An axis with min == max is held fixed. on_boundary is set
// when the maximizer sits on a free edge of the box.
BrightnessOptimum optimize_brightness(const SystemParams& params_template, const SearchBox& box,
                                      BrightnessTarget target = BrightnessTarget::N2,
                                      const ReducedBasis& basis = ReducedBasis{});

}  // namespace blockade
