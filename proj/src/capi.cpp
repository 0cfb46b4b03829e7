#include "blockade/blockade.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <new>
#include <string>

#include "blockade/sweep.hpp"
#include "blockade/weakdrive.hpp"

struct blockade_sweep {
  std::vector<blockade::SweepSpec> specs;
};

struct blockade_result {
  std::vector<blockade::SweepResult> results;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <typename F>
int guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return BLOCKADE_OK;
  } catch (const blockade::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BLOCKADE_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BLOCKADE_E_INTERNAL, e.what());
  } catch (...) {
    return fail(BLOCKADE_E_INTERNAL, "unknown error");
  }
}

void require(bool cond, const char* msg) {
  if (!cond) throw blockade::Error(blockade::ErrorCode::InvalidArgument, msg);
}

blockade::SystemParams to_params(const blockade_params* p) {
  require(p != nullptr, "params is null");
  blockade::SystemParams s;
  s.g = p->g;
  s.J = p->J;
  s.Omega = p->Omega;
  s.Delta = p->Delta;
  s.kappa1 = p->kappa1;
  s.kappa2 = p->kappa2;
  s.gamma = p->gamma;
  s.Gamma1 = p->Gamma1;
  s.Gamma2 = p->Gamma2;
  return s;
}

const blockade::SweepResult& result_at(const blockade_result* r, size_t index) {
  require(r != nullptr, "result is null");
  require(index < r->results.size(), "result index out of range");
  return r->results[index];
}

const blockade::SweepRow& row_at(const blockade_result* r, size_t index, size_t row) {
  const auto& res = result_at(r, index);
  require(row < res.rows.size(), "row index out of range");
  return res.rows[row];
}

}  // namespace

extern "C" {

const char* blockade_version(void) { return BLOCKADE_VERSION; }

const char* blockade_last_error(void) { return g_last_error.c_str(); }

const char* blockade_status_name(int status) {
  switch (status) {
    case BLOCKADE_OK: return "ok";
    case BLOCKADE_E_INTERNAL: return "internal error";
    default:
      if (status >= 1 && status <= BLOCKADE_E_IO) {
        static thread_local std::string name;
        name = blockade::to_string(static_cast<blockade::ErrorCode>(status));
        return name.c_str();
      }
      return "unknown status";
  }
}

int blockade_preset_count(size_t* count) {
  return guarded([&] {
    require(count != nullptr, "count is null");
    *count = blockade::preset_names().size();
  });
}

int blockade_preset_name(size_t index, const char** name) {
  return guarded([&] {
    require(name != nullptr, "name is null");
    require(index < blockade::preset_names().size(), "preset index out of range");
    *name = blockade::preset_names()[index].c_str();
  });
}

int blockade_sweep_from_preset(const char* name, blockade_sweep** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    *out = new blockade_sweep{blockade::preset(name)};
  });
}

int blockade_sweep_from_config(const char* path, blockade_sweep** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new blockade_sweep{blockade::load_config(path)};
  });
}

int blockade_sweep_from_json(const char* text, blockade_sweep** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new blockade_sweep{blockade::parse_config(text)};
  });
}

void blockade_sweep_free(blockade_sweep* sweep) { delete sweep; }

int blockade_sweep_count(const blockade_sweep* sweep, size_t* count) {
  return guarded([&] {
    require(sweep != nullptr && count != nullptr, "null argument");
    *count = sweep->specs.size();
  });
}

int blockade_sweep_label(const blockade_sweep* sweep, size_t index, const char** label) {
  return guarded([&] {
    require(sweep != nullptr && label != nullptr, "null argument");
    require(index < sweep->specs.size(), "spec index out of range");
    *label = sweep->specs[index].label.c_str();
  });
}

int blockade_sweep_set_truncation(blockade_sweep* sweep, int n_max_1, int n_max_2) {
  return guarded([&] {
    require(sweep != nullptr, "sweep is null");
    for (auto& s : sweep->specs) {
      if (n_max_1 >= 0) s.truncation.n_max_1 = n_max_1;
      if (n_max_2 >= 0) s.truncation.n_max_2 = n_max_2;
      s.validate();
    }
  });
}

int blockade_sweep_set_tolerance(blockade_sweep* sweep, double tol) {
  return guarded([&] {
    require(sweep != nullptr, "sweep is null");
    for (auto& s : sweep->specs) {
      s.tol = tol;
      s.validate();
    }
  });
}

int blockade_run(const blockade_sweep* sweep, int workers, blockade_result** out) {
  return guarded([&] {
    require(sweep != nullptr && out != nullptr, "null argument");
    auto res = new blockade_result;
    try {
      for (const auto& s : sweep->specs) res->results.push_back(blockade::run_sweep(s, workers));
    } catch (...) {
      delete res;
      throw;
    }
    *out = res;
  });
}

void blockade_result_free(blockade_result* result) { delete result; }

int blockade_result_count(const blockade_result* result, size_t* count) {
  return guarded([&] {
    require(result != nullptr && count != nullptr, "null argument");
    *count = result->results.size();
  });
}

int blockade_result_label(const blockade_result* result, size_t index, const char** label) {
  return guarded([&] {
    require(label != nullptr, "label is null");
    *label = result_at(result, index).spec.label.c_str();
  });
}

int blockade_result_rows(const blockade_result* result, size_t index, size_t* rows) {
  return guarded([&] {
    require(rows != nullptr, "rows is null");
    *rows = result_at(result, index).rows.size();
  });
}

int blockade_result_failed_rows(const blockade_result* result, size_t index, size_t* failed) {
  return guarded([&] {
    require(failed != nullptr, "failed is null");
    *failed = result_at(result, index).failed_rows();
  });
}

int blockade_result_axis(const blockade_result* result, size_t index, size_t row, double* value) {
  return guarded([&] {
    require(value != nullptr, "value is null");
    *value = row_at(result, index, row).axis_value;
  });
}

int blockade_result_value(const blockade_result* result, size_t index, size_t row, const char* observable,
                          double* value) {
  return guarded([&] {
    require(observable != nullptr && value != nullptr, "null argument");
    const auto& obs = result_at(result, index).spec.observables;
    const auto it = std::find(obs.begin(), obs.end(), observable);
    require(it != obs.end(), "observable not in this sweep");
    *value = row_at(result, index, row).values[static_cast<size_t>(it - obs.begin())];
  });
}

int blockade_result_wall_time(const blockade_result* result, size_t index, size_t row, double* seconds) {
  return guarded([&] {
    require(seconds != nullptr, "seconds is null");
    *seconds = row_at(result, index, row).wall_time;
  });
}

int blockade_result_row_error(const blockade_result* result, size_t index, size_t row, const char** message) {
  return guarded([&] {
    require(message != nullptr, "message is null");
    *message = row_at(result, index, row).error.c_str();
  });
}

int blockade_result_export(const blockade_result* result, size_t index, const char* format, const char* path) {
  return guarded([&] {
    require(format != nullptr && path != nullptr, "null argument");
    const std::string f = format;
    if (f != "csv" && f != "json") {
      throw blockade::Error(blockade::ErrorCode::ConfigError, "export: format must be csv or json");
    }
    blockade::export_result(result_at(result, index),
                            f == "csv" ? blockade::ExportFormat::Csv : blockade::ExportFormat::Json, path);
  });
}

void blockade_params_default(blockade_params* params) {
  if (params == nullptr) return;
  const blockade::SystemParams d;
  *params = blockade_params{d.g, d.J, d.Omega, d.Delta, d.kappa1, d.kappa2, d.gamma, d.Gamma1, d.Gamma2};
}

int blockade_analytic_g2(const blockade_params* params, int mode, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = blockade::analytic_g2(to_params(params), mode);
  });
}

int blockade_optimal_hopping(double kappa2, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = blockade::optimal_hopping(kappa2);
  });
}

int blockade_optimal_infidelity(double kappa2, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = blockade::optimal_infidelity(kappa2);
  });
}

int blockade_fme_steady_state(const blockade_params* params, int n_max_1, int n_max_2, double tol,
                              blockade_observables* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    const blockade::HilbertSpec spec{n_max_1, n_max_2};
    spec.validate();
    blockade::SteadyStateOptions opts;
    if (tol > 0.0) opts.tol = tol;
    const auto r = blockade::steady_state(blockade::build_fme(spec, to_params(params)), opts);
    auto g2_or_nan = [&](int mode) {
      try {
        return blockade::g2_zero(r.rho, mode);
      } catch (const blockade::Error&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    out->n1 = blockade::mean_photon(r.rho, 1);
    out->n2 = blockade::mean_photon(r.rho, 2);
    out->g2_1 = g2_or_nan(1);
    out->g2_2 = g2_or_nan(2);
    out->fidelity_K = blockade::fidelity(r.rho.entries(), blockade::project(blockade::manifold_projector(spec), r.rho));
    out->residual = r.residual;
  });
}

}  // extern "C"
