#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ipg/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Benchmark driver: image inpainting and Heron-type location problems"};

  std::string config_path;
  app.add_option("--config", config_path, "key=value config file; flags override it");

  std::map<std::string, std::string> overrides;
  const auto add = [&app, &overrides](const std::string& flag, const std::string& key,
                                      const std::string& desc) {
    app.add_option_function<std::string>(
        flag, [&overrides, key](const std::string& value) { overrides[key] = value; }, desc);
  };
  const auto add_flag = [&app, &overrides](const std::string& flag, const std::string& key,
                                           const std::string& desc) {
    app.add_flag_callback(
        flag, [&overrides, key]() { overrides[key] = "true"; }, desc);
  };

  add("--experiment", "experiment", "inpaint or heron");
  add("--solver", "solver", "ipg, pgm, or fista");
  add("--image", "image", "input PGM image (inpainting)");
  add("--missing", "missing", "fraction of pixels to hide, in (0,1)");
  add("--levels", "levels", "wavelet decomposition levels (0 = maximum)");
  add("--lambda1", "lambda1", "sparsity weight(s), comma separated");
  add("--lambda2", "lambda2", "quadratic weight(s), comma separated");
  add("--a", "a", "step numerator value(s): alpha_k = a/k");
  add("--b", "b", "penalty slope value(s): beta_k = b*k");
  add("--gamma", "gamma", "baseline step size(s), or 'auto'");
  add("--stop", "stop", "stopping mode: fixed or tol");
  add("--iters", "iters", "iteration count in fixed mode");
  add("--eps", "eps", "tolerance in tol mode");
  add("--max-iters", "max_iters", "iteration cap in tol mode");
  add("--seed", "seed", "base seed for masks and instances");
  add("--samples", "samples", "random instances per Heron cell");
  add("--m", "m", "number of Heron constraint sets");
  add("--n", "n", "Heron space dimension");
  add("--out", "out", "output directory");
  add_flag("--inconsistent", "inconsistent", "use an infeasible Heron right-hand side");
  add_flag("--save-images", "save_images", "write reconstructed images per grid cell");
  add_flag("--curves", "curves", "write per-iteration curve CSVs per grid cell");
  add_flag("--tol-sweep", "tol_sweep", "sweep eps over 1e-1..1e-6 instead of a grid");
  add_flag("--no-timing", "no_timing", "report zero runtimes for reproducible output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ipg::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = ipg::load_config(config_path);
    for (const auto& [key, value] : overrides) ipg::apply_config_entry(cfg, key, value);

    const ipg::RunSummary summary = ipg::run_experiment(cfg);
    ipg::write_csv(summary.table, std::cout);
    std::cout << "# runs=" << summary.solver_runs << " incomplete=" << summary.incomplete_runs
              << " out=" << cfg.out_dir << "\n";
    return summary.incomplete_runs == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
