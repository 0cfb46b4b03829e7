#pragma once

// Closed-form weak-drive (Omega -> 0) correlations of the two cavity modes.

#include <complex>

#include "blockade/model.hpp"

namespace blockade {

struct CooperativityPair {
  std::complex<double> c2;  // two-body: 4 J^2 / [(k1 - 2i D)(k2 - 2i D)]
  std::complex<double> c3;  // three-body: 4 g^2 / [(k1 + k2 - 4i D)(gamma - 4i D)]
};

CooperativityPair cooperativities(const SystemParams& p);

// g_k(0) = |1 + (delta_k1 C2 - delta_k2) C3 / (1 + C2 + C3)|^2, mode k in {1, 2}.
double analytic_g2(const SystemParams& p, int mode);

// [(1 + C2) / C3]^2 at Delta = 0; falls as g^-4.
double g2_biquadratic_approx(const SystemParams& p);

struct AntibunchingWindow {
  double width = 0.0;  // Delta_plus - Delta_minus
  double lower = 0.0;  // Delta_minus <= 0
  double upper = 0.0;  // Delta_plus >= 0
  bool antibunched_at_center = false;
};

// Contiguous detuning interval around Delta = 0 where g_2(0) < 1/zeta.
// Edges are bracketed by a scan of |Delta| <= 5g and refined by bisection to
// 1e-8 g. When g_2(0) >= 1/zeta at the center the width is 0 and the flag is
// false.
AntibunchingWindow antibunching_window(const SystemParams& p, double zeta);

}  // namespace blockade
