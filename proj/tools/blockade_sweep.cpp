// Command-line driver for parameter sweeps. Links only the C interface.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 some grid point
// failed (results are still written, with per-row error strings).

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "blockade/blockade.h"

namespace {

int report(int status, const char* what) {
  std::fprintf(stderr, "blockade-sweep: %s: %s (%s)\n", what, blockade_last_error(), blockade_status_name(status));
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state and closed-form parameter sweeps of the driven two-photon cavity model"};
  std::string preset;
  std::string config;
  std::string out_dir = ".";
  std::string format = "csv";
  int workers = 1;
  int nmax1 = -1;
  int nmax2 = -1;
  double tol = -1.0;
  bool list = false;

  auto* p = app.add_option("--preset", preset, "Named figure preset");
  auto* c = app.add_option("--config", config, "JSON sweep config file")->check(CLI::ExistingFile);
  p->excludes(c);
  app.add_option("--out", out_dir, "Output directory (one file per sweep, named by label)");
  app.add_option("--format", format, "Export format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", workers, "Worker threads (<= 0: all hardware threads)");
  app.add_option("--nmax1", nmax1, "Fock truncation of mode 1 (full model)")->check(CLI::NonNegativeNumber);
  app.add_option("--nmax2", nmax2, "Fock truncation of mode 2 (full model)")->check(CLI::NonNegativeNumber);
  app.add_option("--tol", tol, "Steady-state residual tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--list-presets", list, "Print the preset names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (list) {
    size_t n = 0;
    blockade_preset_count(&n);
    for (size_t i = 0; i < n; ++i) {
      const char* name = nullptr;
      blockade_preset_name(i, &name);
      std::printf("%s\n", name);
    }
    return 0;
  }
  if (preset.empty() == config.empty()) {
    std::fprintf(stderr, "blockade-sweep: exactly one of --preset or --config is required\n");
    return 1;
  }

  blockade_sweep* sweep = nullptr;
  int st = preset.empty() ? blockade_sweep_from_config(config.c_str(), &sweep)
                          : blockade_sweep_from_preset(preset.c_str(), &sweep);
  if (st != BLOCKADE_OK) return report(st, "loading sweep");
  if (nmax1 >= 0 || nmax2 >= 0) {
    if ((st = blockade_sweep_set_truncation(sweep, nmax1, nmax2)) != BLOCKADE_OK) {
      blockade_sweep_free(sweep);
      return report(st, "--nmax1/--nmax2");
    }
  }
  if (tol > 0.0 && (st = blockade_sweep_set_tolerance(sweep, tol)) != BLOCKADE_OK) {
    blockade_sweep_free(sweep);
    return report(st, "--tol");
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    blockade_sweep_free(sweep);
    std::fprintf(stderr, "blockade-sweep: cannot create '%s': %s\n", out_dir.c_str(), ec.message().c_str());
    return 1;
  }

  blockade_result* result = nullptr;
  st = blockade_run(sweep, workers, &result);
  blockade_sweep_free(sweep);
  if (st != BLOCKADE_OK) return report(st, "running sweep");

  size_t count = 0;
  blockade_result_count(result, &count);
  int exit_code = 0;
  for (size_t i = 0; i < count; ++i) {
    const char* label = nullptr;
    size_t rows = 0;
    size_t failed = 0;
    blockade_result_label(result, i, &label);
    blockade_result_rows(result, i, &rows);
    blockade_result_failed_rows(result, i, &failed);
    const std::string path = (std::filesystem::path(out_dir) / (std::string(label) + "." + format)).string();
    if ((st = blockade_result_export(result, i, format.c_str(), path.c_str())) != BLOCKADE_OK) {
      report(st, "export");
      blockade_result_free(result);
      return 1;
    }
    std::printf("%s: %zu rows, %zu failed -> %s\n", label, rows, failed, path.c_str());
    if (failed > 0) exit_code = 2;
  }
  blockade_result_free(result);
  return exit_code;
}
