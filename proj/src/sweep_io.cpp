#include <cmath>
#include <cstdio>
#include <fstream>
#include <exception>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "blockade/sweep.hpp"

namespace blockade {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') config_error("parse: bad number '" + s + "'");
  return v;
}

Json number(double v) {
  if (!std::isfinite(v)) return Json(nullptr);
  return Json(v);
}

double number_from(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) config_error("parse: expected a number");
  return j.get<double>();
}

// Strict object reader: every key must be consumed.
class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) config_error(where_ + ": expected an object");
  }
  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) config_error(where_ + ": unknown key '" + k + "'");
    }
  }
  const Json* get(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  void read(const std::string& key, double& out) {
    if (const Json* v = get(key)) {
      if (!v->is_number()) config_error(where_ + ": '" + key + "' must be a number");
      out = v->get<double>();
    }
  }
  void read(const std::string& key, int& out) {
    if (const Json* v = get(key)) {
      if (!v->is_number_integer()) config_error(where_ + ": '" + key + "' must be an integer");
      out = v->get<int>();
    }
  }
  void read(const std::string& key, bool& out) {
    if (const Json* v = get(key)) {
      if (!v->is_boolean()) config_error(where_ + ": '" + key + "' must be true or false");
      out = v->get<bool>();
    }
  }
  void read(const std::string& key, std::string& out) {
    if (const Json* v = get(key)) {
      if (!v->is_string()) config_error(where_ + ": '" + key + "' must be a string");
      out = v->get<std::string>();
    }
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> used_;
};

Json params_json(const SystemParams& p) {
  return Json{{"g", p.g},           {"J", p.J},           {"Omega", p.Omega},
              {"Delta", p.Delta},   {"kappa1", p.kappa1}, {"kappa2", p.kappa2},
              {"gamma", p.gamma},   {"Gamma1", p.Gamma1}, {"Gamma2", p.Gamma2}};
}

Json spec_json(const SweepSpec& s) {
  Json j;
  j["label"] = s.label;
  j["model"] = to_string(s.model);
  j["fixed"] = params_json(s.fixed);
  j["j_opt"] = s.j_opt;
  j["axis"] = Json{{"name", s.axis.name},
                   {"scale", to_string(s.axis.scale)},
                   {"start", s.axis.start},
                   {"stop", s.axis.stop},
                   {"count", s.axis.count}};
  j["observables"] = s.observables;
  j["truncation"] =
      Json{{"n_max_1", s.truncation.n_max_1}, {"n_max_2", s.truncation.n_max_2}, {"n_max_ph", s.reduced.n_max_ph}};
  j["tol"] = s.tol;
  j["optimize"] = Json{{"enabled", s.optimize.enabled},
                       {"target", s.optimize.target == BrightnessTarget::N2 ? "n2" : "p10"},
                       {"j_min", s.optimize.box.j_min},
                       {"j_max", s.optimize.box.j_max},
                       {"omega_min", s.optimize.box.omega_min},
                       {"omega_max", s.optimize.box.omega_max}};
  return j;
}

SweepSpec spec_from(const Json& j) {
  SweepSpec s;
  Reader r(j, "spec");
  r.read("label", s.label);
  std::string model = to_string(s.model);
  r.read("model", model);
  if (model == "fme") s.model = Backend::Fme;
  else if (model == "rme") s.model = Backend::Rme;
  else if (model == "analytic") s.model = Backend::Analytic;
  else config_error("spec: unknown model '" + model + "'");
  if (const Json* f = r.get("fixed")) {
    Reader fr(*f, "spec.fixed");
    fr.read("g", s.fixed.g);
    fr.read("J", s.fixed.J);
    fr.read("Omega", s.fixed.Omega);
    fr.read("Delta", s.fixed.Delta);
    fr.read("kappa1", s.fixed.kappa1);
    fr.read("kappa2", s.fixed.kappa2);
    fr.read("gamma", s.fixed.gamma);
    fr.read("Gamma1", s.fixed.Gamma1);
    fr.read("Gamma2", s.fixed.Gamma2);
  }
  r.read("j_opt", s.j_opt);
  if (const Json* a = r.get("axis")) {
    Reader ar(*a, "spec.axis");
    ar.read("name", s.axis.name);
    std::string scale = to_string(s.axis.scale);
    ar.read("scale", scale);
    if (scale == "linear") s.axis.scale = AxisScale::Linear;
    else if (scale == "log") s.axis.scale = AxisScale::Log;
    else config_error("spec.axis: unknown scale '" + scale + "'");
    ar.read("start", s.axis.start);
    ar.read("stop", s.axis.stop);
    ar.read("count", s.axis.count);
  }
  if (const Json* o = r.get("observables")) {
    if (!o->is_array()) config_error("spec: 'observables' must be an array of strings");
    for (const auto& e : *o) {
      if (!e.is_string()) config_error("spec: 'observables' must be an array of strings");
      s.observables.push_back(e.get<std::string>());
    }
  }
  if (const Json* t = r.get("truncation")) {
    Reader tr(*t, "spec.truncation");
    tr.read("n_max_1", s.truncation.n_max_1);
    tr.read("n_max_2", s.truncation.n_max_2);
    tr.read("n_max_ph", s.reduced.n_max_ph);
  }
  r.read("tol", s.tol);
  if (const Json* o = r.get("optimize")) {
    Reader orr(*o, "spec.optimize");
    orr.read("enabled", s.optimize.enabled);
    std::string target = "n2";
    orr.read("target", target);
    if (target == "n2") s.optimize.target = BrightnessTarget::N2;
    else if (target == "p10") s.optimize.target = BrightnessTarget::P10;
    else config_error("spec.optimize: unknown target '" + target + "'");
    orr.read("j_min", s.optimize.box.j_min);
    orr.read("j_max", s.optimize.box.j_max);
    orr.read("omega_min", s.optimize.box.omega_min);
    orr.read("omega_max", s.optimize.box.omega_max);
  }
  return s;
}

Json parse_text(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    config_error(std::string(what) + ": " + e.what());
  }
}

std::string truncation_text(const SweepSpec& s) {
  std::ostringstream os;
  if (s.model == Backend::Fme) os << "n_max_1=" << s.truncation.n_max_1 << " n_max_2=" << s.truncation.n_max_2;
  else if (s.model == Backend::Rme) os << "n_max_ph=" << s.reduced.n_max_ph;
  else os << "none";
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string spec_to_json(const SweepSpec& spec) { return spec_json(spec).dump(); }

SweepSpec spec_from_json(const std::string& text) { return spec_from(parse_text(text, "spec")); }

std::vector<SweepSpec> parse_config(const std::string& text) {
  const Json j = parse_text(text, "config");
  std::vector<SweepSpec> specs;
  if (j.is_object() && j.contains("specs")) {
    if (j.size() != 1) config_error("config: a 'specs' list must be the only top-level key");
    const Json& list = j["specs"];
    if (!list.is_array() || list.empty()) config_error("config: 'specs' must be a non-empty array");
    for (const auto& e : list) specs.push_back(spec_from(e));
  } else {
    specs.push_back(spec_from(j));
  }
  for (const auto& s : specs) s.validate();
  return specs;
}

std::vector<SweepSpec> load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("config: cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string to_csv(const SweepResult& result) {
  const SweepSpec& s = result.spec;
  std::ostringstream os;
  os << "# blockade sweep\n";
  os << "# version: " << BLOCKADE_VERSION << "\n";
  os << "# label: " << s.label << "\n";
  os << "# model: " << to_string(s.model) << "\n";
  os << "# truncation: " << truncation_text(s) << "\n";
  os << "# tolerance: " << fmt17(s.tol) << "\n";
  os << "# spec: " << spec_to_json(s) << "\n";
  os << csv_field(s.axis.name) << ",J,Omega";
  for (const auto& o : s.observables) os << "," << o;
  os << ",residual,error,warnings\n";
  for (const auto& r : result.rows) {
    os << fmt17(r.axis_value) << "," << fmt17(r.J) << "," << fmt17(r.Omega);
    for (double v : r.values) os << "," << fmt17(v);
    os << "," << fmt17(r.residual) << "," << csv_field(r.error) << "," << csv_field(r.warnings) << "\n";
  }
  return os.str();
}

SweepResult parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  SweepResult result;
  bool have_spec = false;
  bool have_header = false;
  const std::string spec_prefix = "# spec: ";
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#", 0) == 0) {
      if (line.rfind(spec_prefix, 0) == 0) {
        result.spec = spec_from_json(line.substr(spec_prefix.size()));
        have_spec = true;
      }
      continue;
    }
    if (!have_spec) config_error("parse_csv: missing '# spec:' provenance line");
    const auto fields = split_csv_line(line);
    const std::size_t n_obs = result.spec.observables.size();
    if (fields.size() != n_obs + 6) config_error("parse_csv: wrong number of columns");
    if (!have_header) {
      have_header = true;
      continue;
    }
    SweepRow r;
    r.axis_value = parse_double(fields[0]);
    r.J = parse_double(fields[1]);
    r.Omega = parse_double(fields[2]);
    for (std::size_t k = 0; k < n_obs; ++k) r.values.push_back(parse_double(fields[3 + k]));
    r.residual = parse_double(fields[3 + n_obs]);
    r.error = fields[4 + n_obs];
    r.warnings = fields[5 + n_obs];
    result.rows.push_back(std::move(r));
  }
  if (!have_header) config_error("parse_csv: missing header row");
  return result;
}

std::string to_json(const SweepResult& result) {
  const SweepSpec& s = result.spec;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["provenance"] = Json{{"library", "blockade"},
                         {"version", BLOCKADE_VERSION},
                         {"model", to_string(s.model)},
                         {"truncation", truncation_text(s)},
                         {"tolerance", s.tol}};
  j["spec"] = spec_json(s);
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    Json values = Json::object();
    for (std::size_t k = 0; k < s.observables.size(); ++k) values[s.observables[k]] = number(r.values[k]);
    rows.push_back(Json{{"axis", number(r.axis_value)},
                        {"J", number(r.J)},
                        {"Omega", number(r.Omega)},
                        {"values", values},
                        {"residual", number(r.residual)},
                        {"error", r.error},
                        {"warnings", r.warnings}});
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

SweepResult parse_json(const std::string& text) {
  const Json j = parse_text(text, "parse_json");
  if (!j.is_object() || !j.contains("schema_version") || j["schema_version"] != kSchemaVersion) {
    config_error("parse_json: unsupported or missing schema_version");
  }
  SweepResult result;
  try {
    result.spec = spec_from(j.at("spec"));
    for (const auto& row : j.at("rows")) {
      SweepRow r;
      r.axis_value = number_from(row.at("axis"));
      r.J = number_from(row.at("J"));
      r.Omega = number_from(row.at("Omega"));
      for (const auto& o : result.spec.observables) r.values.push_back(number_from(row.at("values").at(o)));
      r.residual = number_from(row.at("residual"));
      r.error = row.at("error").get<std::string>();
      r.warnings = row.at("warnings").get<std::string>();
      result.rows.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    config_error(std::string("parse_json: ") + e.what());
  }
  return result;
}

void export_result(const SweepResult& result, ExportFormat format, const std::string& path) {
  const std::string text = format == ExportFormat::Csv ? to_csv(result) : to_json(result);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "export: cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "export: write to '" + path + "' failed");
}

}  // namespace blockade
