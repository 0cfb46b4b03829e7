#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "blockade/sweep.hpp"
#include "blockade/weakdrive.hpp"

using namespace blockade;

namespace {

std::string data_path(const std::string& name) { return std::string(BLOCKADE_TEST_DATA) + "/" + name; }

SweepSpec small_fme() {
  SweepSpec s;
  s.label = "small";
  s.model = Backend::Fme;
  s.fixed.g = 2.0;
  s.fixed.J = 0.3;
  s.fixed.Omega = 0.2;
  s.fixed.kappa2 = 0.5;
  s.fixed.gamma = 0.1;
  s.axis = SweepAxis{"g", AxisScale::Linear, 1.0, 3.0, 4};
  s.observables = {"n1", "n2", "g2_1", "g2_2", "fidelity_K", "purity_P"};
  s.truncation = HilbertSpec{4, 4};
  return s;
}

SweepSpec analytic_spec() {
  SweepSpec s;
  s.label = "analytic";
  s.model = Backend::Analytic;
  s.fixed.J = 0.1;
  s.fixed.Omega = 1e-4;
  s.fixed.kappa2 = 1.0;
  s.fixed.gamma = 0.01;
  s.axis = SweepAxis{"g", AxisScale::Log, 0.1, 50.0, 12};
  s.observables = {"g2_1", "g2_2"};
  return s;
}

std::optional<ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("axis grids") {
  const auto lin = SweepAxis{"g", AxisScale::Linear, 0.0, 1.0, 5}.grid();
  REQUIRE(lin.size() == 5);
  CHECK(lin[2] == 0.5);
  const auto lg = SweepAxis{"g", AxisScale::Log, 1e-3, 1.0, 4}.grid();
  REQUIRE(lg.size() == 4);
  CHECK(lg.front() == 1e-3);
  CHECK(lg.back() == 1.0);
  CHECK(lg[1] == doctest::Approx(1e-2).epsilon(1e-13));
  CHECK(SweepAxis{"g", AxisScale::Log, 2.0, 5.0, 1}.grid() == std::vector<double>{2.0});
  CHECK(SweepAxis{"g", AxisScale::Log, 2.0, 5.0, 0}.grid().empty());
}

TEST_CASE("spec validation") {
  auto bad = [](auto mutate) {
    SweepSpec s = analytic_spec();
    mutate(s);
    return code_of([&] { s.validate(); });
  };
  CHECK_FALSE(bad([](SweepSpec&) {}).has_value());
  CHECK(bad([](SweepSpec& s) { s.axis.name = "omega"; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.axis.start = 0.0; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.axis.stop = s.axis.start; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.observables = {"g2_3"}; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.observables = {"g2_2", "g2_2"}; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.observables.clear(); }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.observables = {"fidelity_K"}; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.optimize.enabled = true; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.axis.name = "t"; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.label = "a/b"; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.fixed.kappa2 = -1.0; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) { s.tol = 0.0; }) == ErrorCode::ConfigError);
  CHECK(bad([](SweepSpec& s) {
          s.j_opt = true;
          s.axis.name = "J";
        }) == ErrorCode::ConfigError);
  CHECK(code_of([] { run_sweep(SweepSpec{}); }) == ErrorCode::ConfigError);
}

TEST_CASE("analytic backend reproduces the closed forms point by point") {
  const SweepSpec s = analytic_spec();
  const SweepResult r = run_sweep(s);
  REQUIRE(r.rows.size() == 12);
  CHECK(r.ok());
  const auto grid = s.axis.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SystemParams p = point_params(s, grid[i]);
    CHECK(r.rows[i].axis_value == grid[i]);
    CHECK(r.rows[i].values[0] == analytic_g2(p, 1));
    CHECK(r.rows[i].values[1] == analytic_g2(p, 2));
    CHECK(r.rows[i].residual == 0.0);
  }
}

TEST_CASE("j_opt substitutes the optimal hopping per point") {
  SweepSpec s = analytic_spec();
  s.j_opt = true;
  s.observables = {"n2"};
  s.axis = SweepAxis{"kappa2", AxisScale::Log, 1e-3, 1e-1, 3};
  const SweepResult r = run_sweep(s);
  for (const auto& row : r.rows) {
    CHECK(row.J == optimal_hopping(row.axis_value));
    CHECK(row.values[0] == three_level_n2(row.J, s.fixed.Omega, row.axis_value));
  }
}

TEST_CASE("worker count does not change results") {
  const SweepSpec s = small_fme();
  const SweepResult a = run_sweep(s, 1);
  const SweepResult b = run_sweep(s, 4);
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(a.ok());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].axis_value == b.rows[i].axis_value);
    CHECK(a.rows[i].values == b.rows[i].values);
    CHECK(a.rows[i].residual == b.rows[i].residual);
  }
  CHECK(to_csv(a) == to_csv(b));
}

TEST_CASE("point failures are recorded without aborting the sweep") {
  SweepSpec s = small_fme();
  s.tol = 1e-300;
  const SweepResult r = run_sweep(s);
  CHECK(r.failed_rows() == r.rows.size());
  for (const auto& row : r.rows) {
    CHECK_FALSE(row.error.empty());
    for (double v : row.values) CHECK(std::isnan(v));
  }
}

TEST_CASE("time axis evolves from the vacuum") {
  SweepSpec s = small_fme();
  s.axis = SweepAxis{"t", AxisScale::Linear, 0.0, 2.0, 5};
  s.observables = {"n1", "n2"};
  const SweepResult r = run_sweep(s);
  REQUIRE(r.rows.size() == 5);
  CHECK(r.ok());
  CHECK(r.rows[0].values[0] == doctest::Approx(0.0));
  CHECK(r.rows[4].values[0] > 0.0);
}

TEST_CASE("CSV export round trip") {
  SweepSpec s = small_fme();
  s.label = "round_trip";
  SweepResult r = run_sweep(s);
  r.rows[1].error = "synthetic, \"quoted\" failure";
  r.rows[1].values[2] = std::nan("");
  const std::string text = to_csv(r);
  const SweepResult back = parse_csv(text);
  CHECK(back.spec == r.spec);
  CHECK(to_csv(back) == text);
  CHECK(std::isnan(back.rows[1].values[2]));
  CHECK(back.rows[1].error == r.rows[1].error);
  CHECK(text.find("# label: round_trip\n") != std::string::npos);
  CHECK(text.find("# model: fme\n") != std::string::npos);
  CHECK(text.find("# truncation: n_max_1=4 n_max_2=4\n") != std::string::npos);
  CHECK(text.find("# version: ") != std::string::npos);
  CHECK(text.find("\ng,J,Omega,n1,n2,g2_1,g2_2,fidelity_K,purity_P,residual,error,warnings\n") != std::string::npos);
}

TEST_CASE("JSON export round trip") {
  SweepResult r = run_sweep(small_fme());
  r.rows[0].values[0] = std::nan("");
  r.rows[2].warnings = "truncation: population 1e-5 on the edge";
  const std::string text = to_json(r);
  const SweepResult back = parse_json(text);
  CHECK(back.spec == r.spec);
  CHECK(to_json(back) == text);
  CHECK(std::isnan(back.rows[0].values[0]));
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(back.rows[i].values == r.rows[i].values);
  CHECK(text.find("\"schema_version\": 1") != std::string::npos);
  CHECK(text.find("\"tolerance\"") != std::string::npos);
  CHECK_THROWS_AS(parse_json("{\"rows\": []}"), Error);
  CHECK_THROWS_AS(parse_json("not json"), Error);
}

TEST_CASE("empty sweep exports a header-only table") {
  SweepSpec s = analytic_spec();
  s.axis.count = 0;
  const SweepResult r = run_sweep(s);
  CHECK(r.rows.empty());
  const std::string text = to_csv(r);
  std::istringstream in(text);
  std::string line;
  int data_lines = 0;
  while (std::getline(in, line)) data_lines += line.rfind("#", 0) != 0;
  CHECK(data_lines == 1);
  CHECK(parse_csv(text).rows.empty());
  CHECK(parse_json(to_json(r)).rows.empty());
}

TEST_CASE("export to file") {
  const SweepResult r = run_sweep(analytic_spec());
  const auto dir = std::filesystem::temp_directory_path() / "blockade_test_sweep";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.csv").string();
  export_result(r, ExportFormat::Csv, path);
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  CHECK(os.str() == to_csv(r));
  CHECK(code_of([&] { export_result(r, ExportFormat::Json, (dir / "missing" / "x.json").string()); }) ==
        ErrorCode::IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("power-law fit") {
  std::vector<double> x;
  std::vector<double> y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(std::pow(10.0, 0.3 * i));
    y.push_back(2.5 * std::pow(x.back(), 4.0));
  }
  const PowerLawFit f = fit_power_law(x, y, 1.0, 1e3);
  CHECK(f.exponent == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.points == 11 - 1);  // x = 10^0 .. 10^2.7
  CHECK_THROWS_AS(fit_power_law(x, y, 1e5, 1e6), Error);
  y[2] = -1.0;
  CHECK_THROWS_AS(fit_power_law(x, y, 1.0, 1e3), Error);

  const SweepResult r = run_sweep(analytic_spec());
  const PowerLawFit g = fit_power_law(r, "g2_2", 5.0, 50.0);
  CHECK(g.points >= 3);
  CHECK(g.exponent < -3.5);
  CHECK_THROWS_AS(fit_power_law(r, "n2", 5.0, 50.0), Error);
}

TEST_CASE("presets match the golden table") {
  std::ifstream in(data_path("preset_golden.csv"));
  REQUIRE(in);
  std::string line;
  std::getline(in, line);
  std::map<std::string, std::vector<std::vector<std::string>>> golden;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    REQUIRE(f.size() == 15);
    golden[f[0]].push_back(f);
  }
  CHECK(golden.size() == preset_names().size());
  const double jopt = optimal_hopping(0.01);
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto specs = preset(name);
    const auto& rows = golden[name];
    REQUIRE(specs.size() == rows.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const SweepSpec& s = specs[i];
      const auto& f = rows[i];
      CAPTURE(s.label);
      CHECK_NOTHROW(s.validate());
      CHECK(s.label == f[1]);
      CHECK(to_string(s.model) == f[2]);
      CHECK(s.axis.name == f[3]);
      CHECK(to_string(s.axis.scale) == f[4]);
      auto value = [&](const std::string& text) {
        if (text.rfind("jopt/", 0) == 0) return jopt / std::stod(text.substr(5));
        return std::stod(text);
      };
      CHECK(s.axis.start == doctest::Approx(value(f[5])).epsilon(1e-14));
      CHECK(s.axis.stop == doctest::Approx(value(f[6])).epsilon(1e-14));
      CHECK(s.axis.count == std::stoi(f[7]));
      CHECK(s.j_opt == (f[8] == "1"));
      CHECK(s.observables == split(f[9], ' '));
      // Fixed parameters; '-' marks a swept, optimized or unused value.
      const double* fixed[] = {&s.fixed.g, &s.fixed.J, &s.fixed.Omega, &s.fixed.kappa2, &s.fixed.gamma};
      for (int k = 0; k < 5; ++k) {
        if (f[10 + k] != "-") CHECK(*fixed[k] == std::stod(f[10 + k]));
      }
      CHECK(s.fixed.kappa1 == 1.0);
    }
  }
  CHECK(code_of([] { preset("fig9"); }) == ErrorCode::ConfigError);
}

TEST_CASE("config files") {
  const auto one = load_config(data_path("valid.json"));
  REQUIRE(one.size() == 1);
  CHECK(one[0].label == "smoke_analytic");
  CHECK(one[0].model == Backend::Analytic);
  CHECK(one[0].axis.count == 5);
  CHECK(one[0].fixed.kappa1 == 1.0);

  const auto many = load_config(data_path("multi.json"));
  REQUIRE(many.size() == 2);
  CHECK(many[0].truncation == HilbertSpec{4, 4});
  CHECK(many[1].reduced.n_max_ph == 6);

  CHECK(code_of([] { load_config(data_path("bad_key.json")); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { load_config(data_path("does_not_exist.json")); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_config("{\"specs\": []}"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_config("{\"model\": \"qme\"}"); }) == ErrorCode::ConfigError);

  for (const auto& name : preset_names()) {
    for (const auto& s : preset(name)) CHECK(spec_from_json(spec_to_json(s)) == s);
  }
}
