#include "blockade/weakdrive.hpp"

#include <cmath>

namespace blockade {

namespace {

using C = std::complex<double>;

C nonzero(C v, const char* what) {
  if (v == C(0.0)) throw Error(ErrorCode::InvalidArgument, std::string("cooperativities: zero denominator in ") + what);
  return v;
}

// Walks from Delta = 0 toward sign * 5g and returns the first detuning where
// g_2(0) reaches the threshold.
double window_edge(SystemParams p, double threshold, double sign) {
  const double reach = 5.0 * p.g;
  const double tol = 1e-8 * p.g;
  constexpr int kScan = 20000;
  double inside = 0.0;
  for (int i = 1; i <= kScan; ++i) {
    const double d = sign * reach * i / kScan;
    p.Delta = d;
    if (analytic_g2(p, 2) >= threshold) {
      double a = inside;
      double b = d;
      int iter = 0;
      while (std::abs(b - a) > tol) {
        if (++iter > 200) throw Error(ErrorCode::NotConverged, "antibunching_window: bisection did not converge");
        const double m = 0.5 * (a + b);
        p.Delta = m;
        (analytic_g2(p, 2) < threshold ? a : b) = m;
      }
      return 0.5 * (a + b);
    }
    inside = d;
  }
  throw Error(ErrorCode::NotConverged, "antibunching_window: window extends beyond |Delta| = 5g");
}

}  // namespace

CooperativityPair cooperativities(const SystemParams& p) {
  p.validate();
  const C i(0.0, 1.0);
  const double D = p.Delta;
  const C c2 = 4.0 * p.J * p.J / nonzero((p.kappa1 - 2.0 * i * D) * (p.kappa2 - 2.0 * i * D), "C2");
  const C c3 = 4.0 * p.g * p.g / nonzero((p.kappa1 + p.kappa2 - 4.0 * i * D) * (p.gamma - 4.0 * i * D), "C3");
  return {c2, c3};
}

double analytic_g2(const SystemParams& p, int mode) {
  if (mode != 1 && mode != 2) throw Error(ErrorCode::InvalidArgument, "analytic_g2: mode must be 1 or 2");
  const auto [c2, c3] = cooperativities(p);
  const C den = 1.0 + c2 + c3;
  if (den == C(0.0)) throw Error(ErrorCode::InvalidArgument, "analytic_g2: 1 + C2 + C3 vanishes");
  const C k = mode == 1 ? c2 : C(-1.0);
  return std::norm(1.0 + k * c3 / den);
}

double g2_biquadratic_approx(const SystemParams& p) {
  if (p.Delta != 0.0) throw Error(ErrorCode::InvalidArgument, "g2_biquadratic_approx: requires Delta = 0");
  if (p.g == 0.0) throw Error(ErrorCode::InvalidArgument, "g2_biquadratic_approx: requires g > 0");
  const auto [c2, c3] = cooperativities(p);
  return std::norm((1.0 + c2) / c3);
}

AntibunchingWindow antibunching_window(const SystemParams& p, double zeta) {
  if (!(zeta > 1.0) || !std::isfinite(zeta)) {
    throw Error(ErrorCode::InvalidArgument, "antibunching_window: zeta must be > 1");
  }
  if (!(p.g > 0.0)) throw Error(ErrorCode::InvalidArgument, "antibunching_window: g must be > 0");
  const double threshold = 1.0 / zeta;
  SystemParams centered = p;
  centered.Delta = 0.0;
  AntibunchingWindow w;
  if (analytic_g2(centered, 2) >= threshold) return w;
  w.antibunched_at_center = true;
  w.upper = window_edge(centered, threshold, 1.0);
  w.lower = window_edge(centered, threshold, -1.0);
  w.width = w.upper - w.lower;
  return w;
}

}  // namespace blockade
