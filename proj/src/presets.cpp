#include <cstdio>

#include "blockade/sweep.hpp"

namespace blockade {

namespace {

std::string tag(const char* prefix, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%s%g", prefix, key, v);
  return buf;
}

SweepAxis log_axis(const char* name, double start, double stop, int count) {
  return SweepAxis{name, AxisScale::Log, start, stop, count};
}

SweepAxis lin_axis(const char* name, double start, double stop, int count) {
  return SweepAxis{name, AxisScale::Linear, start, stop, count};
}

// Weak drive, kappa2 = kappa1, gamma = 0.01.
SystemParams weak_drive() {
  SystemParams p;
  p.Omega = 1e-4;
  p.kappa2 = 1.0;
  p.gamma = 0.01;
  return p;
}

// Strong drive used for the brightness figures.
SystemParams strong_drive() {
  SystemParams p;
  p.Omega = 0.5;
  p.J = 0.1;
  p.gamma = 0.01;
  return p;
}

std::vector<SweepSpec> fig2ab(const char* prefix, const char* observable) {
  std::vector<SweepSpec> out;
  for (double J : {0.1, 1.0, 2.5}) {
    for (Backend b : {Backend::Fme, Backend::Analytic}) {
      SweepSpec s;
      s.label = tag(prefix, b == Backend::Fme ? "fme_J" : "analytic_J", J);
      s.model = b;
      s.fixed = weak_drive();
      s.fixed.J = J;
      s.axis = log_axis("g", 0.1, 50.0, 12);
      s.observables = {observable};
      out.push_back(s);
    }
  }
  return out;
}

std::vector<SweepSpec> fig2c() {
  std::vector<SweepSpec> out;
  for (double g : {0.1, 1.0, 10.0}) {
    SweepSpec s;
    s.label = tag("fig2c", "g", g);
    s.model = Backend::Analytic;
    s.fixed = weak_drive();
    s.fixed.J = 0.1;
    s.fixed.g = g;
    s.axis = lin_axis("Delta", -10.0, 10.0, 401);
    s.observables = {"g2_2"};
    out.push_back(s);
  }
  return out;
}

std::vector<SweepSpec> fig3a() {
  std::vector<SweepSpec> out;
  for (double k2 : {1.0, 0.1, 0.01, 0.001}) {
    SweepSpec s;
    s.label = tag("fig3a", "kappa2_", k2);
    s.fixed = strong_drive();
    s.fixed.kappa2 = k2;
    s.axis = log_axis("g", 1.0, 50.0, 12);
    s.observables = {"g2_2", "n2", "purity_P"};
    out.push_back(s);
  }
  return out;
}

std::vector<SweepSpec> fig3d() {
  std::vector<SweepSpec> out;
  for (Backend b : {Backend::Fme, Backend::Rme}) {
    SweepSpec s;
    s.label = b == Backend::Fme ? "fig3d_fme" : "fig3d_rme";
    s.model = b;
    s.fixed = strong_drive();
    s.fixed.g = 20.0;
    s.axis = log_axis("kappa2", 1e-3, 1.0, 8);
    s.observables = {"n2"};
    out.push_back(s);
  }
  return out;
}

std::vector<SweepSpec> fig4bcd() {
  SweepSpec rme;
  rme.label = "fig4bcd_rme_optimum";
  rme.model = Backend::Rme;
  rme.fixed.gamma = 0.01;
  rme.axis = log_axis("kappa2", 1e-4, 1.0, 9);
  rme.observables = {"n2"};
  rme.optimize.enabled = true;
  rme.optimize.box = SearchBox{0.0, 1.0, 0.0, 1.5};

  SweepSpec fme;
  fme.label = "fig4b_fme_crosses";
  fme.fixed.g = 20.0;
  fme.fixed.gamma = 0.01;
  fme.fixed.Omega = 0.5;
  fme.j_opt = true;
  fme.axis = log_axis("kappa2", 1e-3, 1e-1, 3);
  fme.observables = {"n2", "purity_P", "g2_2"};
  return {rme, fme};
}

std::vector<SweepSpec> fig5ab() {
  SystemParams base;
  base.Omega = 0.5;
  base.kappa2 = 0.01;
  base.gamma = 0.01;
  const double j = optimal_hopping(base.kappa2);
  std::vector<SweepSpec> out;
  for (double g : {5.0, 10.0, 20.0}) {
    SweepSpec s;
    s.label = tag("fig5a", "g", g);
    s.fixed = base;
    s.fixed.g = g;
    s.j_opt = true;
    s.axis = lin_axis("t", 0.0, 40.0, 81);
    s.observables = {"infidelity_1mF", "n2"};
    out.push_back(s);
  }
  SweepSpec b;
  b.label = "fig5b";
  b.fixed = base;
  b.j_opt = true;
  // J/g from 1e-1 down to 1e-3.
  b.axis = log_axis("g", j / 1e-1, j / 1e-3, 7);
  b.observables = {"infidelity_1mF", "fidelity_K"};
  out.push_back(b);
  return out;
}

std::vector<SweepSpec> fig6ab() {
  std::vector<SweepSpec> out;
  for (double k2 : {0.1, 0.01, 0.001}) {
    SweepSpec a;
    a.label = tag("fig6a", "kappa2_", k2);
    a.model = Backend::Rme;
    a.fixed.kappa2 = k2;
    a.axis = log_axis("Gamma1", 1e-2, 1e2, 9);
    a.observables = {"p10"};
    a.optimize.enabled = true;
    a.optimize.target = BrightnessTarget::P10;
    a.optimize.box = SearchBox{0.0, 0.0, 0.0, 5.0};
    out.push_back(a);

    SweepSpec b = a;
    b.label = tag("fig6b", "kappa2_", k2);
    b.observables = {"n2"};
    b.optimize.target = BrightnessTarget::N2;
    b.optimize.box = SearchBox{0.0, 1.0, 0.0, 5.0};
    out.push_back(b);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig2a", "fig2b",   "fig2c",  "fig3a",
                                                 "fig3d", "fig4bcd", "fig5ab", "fig6ab"};
  return names;
}

std::vector<SweepSpec> preset(const std::string& name) {
  if (name == "fig2a") return fig2ab("fig2a", "g2_1");
  if (name == "fig2b") return fig2ab("fig2b", "g2_2");
  if (name == "fig2c") return fig2c();
  if (name == "fig3a") return fig3a();
  if (name == "fig3d") return fig3d();
  if (name == "fig4bcd") return fig4bcd();
  if (name == "fig5ab") return fig5ab();
  if (name == "fig6ab") return fig6ab();
  throw Error(ErrorCode::ConfigError, "preset: unknown preset '" + name + "'");
}

}  // namespace blockade
