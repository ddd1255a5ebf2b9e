#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ipg/solver.hpp"

namespace ipg {

enum class ExperimentKind { kInpaint, kHeron };
enum class SolverKind { kIpg, kPgm, kFista };
enum class StopMode { kFixedIterations, kTolerance };

// Full experiment description. Parameter lists with more than one entry
// become grid axes (at most two may vary). An unset stop mode defaults to
// fixed iterations for inpainting (the ISNR protocol) and to tolerance for
// the Heron runs.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kInpaint;
  SolverKind solver = SolverKind::kIpg;

  std::string image_path;
  double missing = 0.6;
  std::size_t levels = 0;  // 0 = maximal decomposition depth
  std::vector<double> lambda1 = {1.0};
  std::vector<double> lambda2 = {1e-4};
  std::vector<double> a = {1.1};
  std::vector<double> b = {1.8};
  std::vector<double> gamma;  // empty = default 1.9/L_h for PGM

  std::optional<StopMode> stop;
  std::size_t iters = 20;
  double eps = 1e-6;
  std::size_t max_iters = 1000000;

  std::uint64_t seed = 1;
  std::size_t samples = 10;

  std::size_t m = 5;
  std::size_t n = 2;
  bool inconsistent = false;

  std::string out_dir = ".";
  bool save_images = false;
  bool curves = false;
  bool tol_sweep = false;
  // Zeroes every wall-clock column so repeated invocations give byte-equal
  // CSV files.
  bool no_timing = false;
};

// Applies one key=value setting (the config file and the CLI flags share this
// vocabulary). Unknown keys or unparseable values throw.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Plain-text config: one key=value per line, '#' comments, blank lines ignored.
ExperimentConfig load_config(const std::string& path);

// Every setting serialized as key=value lines; enough to regenerate the run.
std::string config_manifest(const ExperimentConfig& cfg);

// Rectangular CSV payload with preformatted cells; "" renders as a blank cell
// (used for grid entries rejected by the hypothesis gate).
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const ResultTable& table, std::ostream& out);

struct RunSummary {
  ResultTable table;
  std::size_t solver_runs = 0;       // cells actually executed
  std::size_t incomplete_runs = 0;   // tolerance runs that hit the cap
};

// ISNR over a parameter grid on one masked image: builds the instance per
// cell, runs the configured solver (exactly iters steps in fixed mode),
// writes isnr_grid.csv, optional per-cell curve CSVs and reconstructed PGMs,
// and a manifest. Grid cells failing the hypothesis gate stay blank and are
// never run.
RunSummary run_isnr_grid(const ExperimentConfig& cfg);

// Heron behavior sweep: averages runtime and iteration count over `samples`
// seeded instances per cell. With a multi-valued a or b list the table is the
// (a,b) mean-runtime grid; otherwise one row summarizing the configured
// (m,n). Writes heron_sweep.csv and a manifest.
RunSummary run_heron_sweep(const ExperimentConfig& cfg);

// One tolerance per row, eps in {1e-1,...,1e-6}: iterations to reach it plus
// the end-state quality (ISNR for inpainting, penalty gap for Heron). Writes
// tolerance_sweep.csv.
RunSummary run_tolerance_sweep(const ExperimentConfig& cfg);

// Dispatches on tol_sweep and experiment.
RunSummary run_experiment(const ExperimentConfig& cfg);

// Per-iteration curve rows "k,isnr_db,g,obj_F". isnr_series pairs with
// report.trace (it may be empty; then the column stays blank). Throws on an
// empty trace.
void emit_curves(const SolveReport& report, const std::vector<double>& isnr_series,
                 std::ostream& out);

}  // namespace ipg
