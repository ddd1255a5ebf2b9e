#include "ipg/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ipg/errors.hpp"
#include "ipg/baselines.hpp"
#include "ipg/image.hpp"
#include "ipg/problems.hpp"

namespace fs = std::filesystem;

namespace ipg {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt_g(double v) { return fmt("%.6g", v); }
std::string fmt_exact(double v) { return fmt("%.17g", v); }
std::string fmt4(double v) { return fmt("%.4f", v); }
std::string fmt10(double v) { return fmt("%.10g", v); }

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r\n");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r\n");
  return s.substr(from, to - from + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + value + "'");
  }
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad count for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw std::invalid_argument("config: bad flag for " + key + ": '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const std::string& part : split(value, ',')) {
    const std::string token = trim(part);
    if (token.empty()) throw std::invalid_argument("config: empty entry in list " + key);
    out.push_back(parse_double(key, token));
  }
  return out;
}

std::string join_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += fmt_exact(values[i]);
  }
  return out;
}

struct Axis {
  std::string name;
  std::vector<double> values;
};

// Grid axes in a fixed order; the first two multi-valued lists become the
// table rows/columns, more than two is an error.
std::pair<Axis, Axis> pick_axes(const ExperimentConfig& cfg) {
  std::vector<Axis> all;
  if (cfg.experiment == ExperimentKind::kInpaint) {
    all.push_back({"lambda1", cfg.lambda1});
    all.push_back({"lambda2", cfg.lambda2});
    if (cfg.solver == SolverKind::kIpg) {
      all.push_back({"a", cfg.a});
      all.push_back({"b", cfg.b});
    } else if (cfg.solver == SolverKind::kPgm && !cfg.gamma.empty()) {
      all.push_back({"gamma", cfg.gamma});
    }
  } else {
    all.push_back({"a", cfg.a});
    all.push_back({"b", cfg.b});
  }
  std::size_t multi = 0;
  for (const Axis& axis : all) {
    if (axis.values.empty()) throw std::invalid_argument("config: empty grid list " + axis.name);
    if (axis.values.size() > 1) ++multi;
  }
  if (multi > 2) throw std::invalid_argument("config: at most two parameters may vary");

  const auto take = [&all](const std::string& skip) {
    for (const Axis& axis : all) {
      if (axis.values.size() > 1 && axis.name != skip) return axis;
    }
    for (const Axis& axis : all) {
      if (axis.name != skip) return axis;
    }
    throw std::invalid_argument("config: no grid axes");
  };
  Axis row = take("");
  Axis col = take(row.name);
  return {std::move(row), std::move(col)};
}

struct CellParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double gamma = 0.0;  // 0 = default step
};

double pick(const std::string& name, double row_v, double col_v,
            const std::pair<Axis, Axis>& axes, const std::vector<double>& base) {
  if (axes.first.name == name) return row_v;
  if (axes.second.name == name) return col_v;
  return base.empty() ? 0.0 : base[0];
}

CellParams resolve_cell(const ExperimentConfig& cfg, const std::pair<Axis, Axis>& axes,
                        double row_v, double col_v) {
  CellParams p;
  p.lambda1 = pick("lambda1", row_v, col_v, axes, cfg.lambda1);
  p.lambda2 = pick("lambda2", row_v, col_v, axes, cfg.lambda2);
  p.a = pick("a", row_v, col_v, axes, cfg.a);
  p.b = pick("b", row_v, col_v, axes, cfg.b);
  p.gamma = pick("gamma", row_v, col_v, axes, cfg.gamma);
  return p;
}

bool stop_is_fixed(const ExperimentConfig& cfg) {
  if (cfg.stop) return *cfg.stop == StopMode::kFixedIterations;
  return cfg.experiment == ExperimentKind::kInpaint;
}

StoppingRule make_rule(const ExperimentConfig& cfg, bool fixed) {
  StoppingRule rule;
  rule.eps = cfg.eps;
  rule.fixed_iterations = fixed;
  rule.max_iters = fixed ? cfg.iters : cfg.max_iters;
  return rule;
}

const char* solver_name(SolverKind solver) {
  switch (solver) {
    case SolverKind::kIpg: return "ipg";
    case SolverKind::kPgm: return "pgm";
    case SolverKind::kFista: return "fista";
  }
  return "?";
}

void write_manifest(const ExperimentConfig& cfg) {
  std::ofstream out(fs::path(cfg.out_dir) / "manifest.txt");
  if (!out) throw std::runtime_error("cannot write manifest in " + cfg.out_dir);
  out << config_manifest(cfg);
}

void write_table_file(const ResultTable& table, const std::string& dir, const std::string& name) {
  std::ofstream out(fs::path(dir) / name);
  if (!out) throw std::runtime_error("cannot write " + name + " in " + dir);
  write_csv(table, out);
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    if (value == "inpaint") cfg.experiment = ExperimentKind::kInpaint;
    else if (value == "heron") cfg.experiment = ExperimentKind::kHeron;
    else throw std::invalid_argument("config: unknown experiment '" + value + "'");
  } else if (key == "solver") {
    if (value == "ipg") cfg.solver = SolverKind::kIpg;
    else if (value == "pgm") cfg.solver = SolverKind::kPgm;
    else if (value == "fista") cfg.solver = SolverKind::kFista;
    else throw std::invalid_argument("config: unknown solver '" + value + "'");
  } else if (key == "image") {
    cfg.image_path = value;
  } else if (key == "missing") {
    cfg.missing = parse_double(key, value);
  } else if (key == "levels") {
    cfg.levels = static_cast<std::size_t>(parse_count(key, value));
  } else if (key == "lambda1") {
    cfg.lambda1 = parse_list(key, value);
  } else if (key == "lambda2") {
    cfg.lambda2 = parse_list(key, value);
  } else if (key == "a") {
    cfg.a = parse_list(key, value);
  } else if (key == "b") {
    cfg.b = parse_list(key, value);
  } else if (key == "gamma") {
    if (value == "auto") cfg.gamma.clear();
    else cfg.gamma = parse_list(key, value);
  } else if (key == "stop") {
    if (value == "fixed") cfg.stop = StopMode::kFixedIterations;
    else if (value == "tol") cfg.stop = StopMode::kTolerance;
    else throw std::invalid_argument("config: stop must be 'fixed' or 'tol'");
  } else if (key == "iters") {
    cfg.iters = static_cast<std::size_t>(parse_count(key, value));
  } else if (key == "eps") {
    cfg.eps = parse_double(key, value);
  } else if (key == "max_iters") {
    cfg.max_iters = static_cast<std::size_t>(parse_count(key, value));
  } else if (key == "seed") {
    cfg.seed = parse_count(key, value);
  } else if (key == "samples") {
    cfg.samples = static_cast<std::size_t>(parse_count(key, value));
  } else if (key == "m") {
    cfg.m = static_cast<std::size_t>(parse_count(key, value));
  } else if (key == "n") {
    cfg.n = static_cast<std::size_t>(parse_count(key, value));
  } else if (key == "inconsistent") {
    cfg.inconsistent = parse_bool(key, value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "save_images") {
    cfg.save_images = parse_bool(key, value);
  } else if (key == "curves") {
    cfg.curves = parse_bool(key, value);
  } else if (key == "tol_sweep") {
    cfg.tol_sweep = parse_bool(key, value);
  } else if (key == "no_timing") {
    cfg.no_timing = parse_bool(key, value);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config " + path + ": cannot open");
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config " + path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
    }
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::string config_manifest(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "experiment=" << (cfg.experiment == ExperimentKind::kInpaint ? "inpaint" : "heron") << "\n";
  out << "solver=" << solver_name(cfg.solver) << "\n";
  out << "image=" << cfg.image_path << "\n";
  out << "missing=" << fmt_exact(cfg.missing) << "\n";
  out << "levels=" << cfg.levels << "\n";
  out << "lambda1=" << join_list(cfg.lambda1) << "\n";
  out << "lambda2=" << join_list(cfg.lambda2) << "\n";
  out << "a=" << join_list(cfg.a) << "\n";
  out << "b=" << join_list(cfg.b) << "\n";
  out << "gamma=" << (cfg.gamma.empty() ? "auto" : join_list(cfg.gamma)) << "\n";
  if (cfg.stop) {
    out << "stop=" << (*cfg.stop == StopMode::kFixedIterations ? "fixed" : "tol") << "\n";
  }
  out << "iters=" << cfg.iters << "\n";
  out << "eps=" << fmt_exact(cfg.eps) << "\n";
  out << "max_iters=" << cfg.max_iters << "\n";
  out << "seed=" << cfg.seed << "\n";
  out << "samples=" << cfg.samples << "\n";
  out << "m=" << cfg.m << "\n";
  out << "n=" << cfg.n << "\n";
  out << "inconsistent=" << (cfg.inconsistent ? "true" : "false") << "\n";
  out << "out=" << cfg.out_dir << "\n";
  out << "save_images=" << (cfg.save_images ? "true" : "false") << "\n";
  out << "curves=" << (cfg.curves ? "true" : "false") << "\n";
  out << "tol_sweep=" << (cfg.tol_sweep ? "true" : "false") << "\n";
  out << "no_timing=" << (cfg.no_timing ? "true" : "false") << "\n";
  return out.str();
}

void write_csv(const ResultTable& table, std::ostream& out) {
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out << ',';
    out << table.columns[j];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << row[j];
    }
    out << '\n';
  }
}

void emit_curves(const SolveReport& report, const std::vector<double>& isnr_series,
                 std::ostream& out) {
  if (report.trace.empty()) throw std::invalid_argument("emit_curves: empty trace");
  if (!isnr_series.empty() && isnr_series.size() != report.trace.size()) {
    throw std::invalid_argument("emit_curves: ISNR series does not match the trace");
  }
  out << "k,isnr_db,g,obj_F\n";
  for (std::size_t i = 0; i < report.trace.size(); ++i) {
    const IterationRecord& rec = report.trace[i];
    out << rec.k << ',';
    if (!isnr_series.empty()) out << fmt4(isnr_series[i]);
    out << ',' << fmt10(rec.penalty_value) << ',';
    if (rec.objective) out << fmt10(*rec.objective);
    out << '\n';
  }
}

RunSummary run_isnr_grid(const ExperimentConfig& cfg) {
  if (cfg.experiment != ExperimentKind::kInpaint) {
    throw std::invalid_argument("run_isnr_grid: experiment must be inpaint");
  }
  if (cfg.image_path.empty()) throw std::invalid_argument("run_isnr_grid: no input image given");
  const Image clean = read_pgm(cfg.image_path);

  const bool fixed = stop_is_fixed(cfg);
  const StoppingRule rule = make_rule(cfg, fixed);
  const auto axes = pick_axes(cfg);
  fs::create_directories(cfg.out_dir);

  RunSummary summary;
  summary.table.columns.push_back(axes.first.name + "\\" + axes.second.name);
  for (double cv : axes.second.values) summary.table.columns.push_back(fmt_g(cv));

  for (double rv : axes.first.values) {
    std::vector<std::string> row;
    row.push_back(fmt_g(rv));
    for (double cv : axes.second.values) {
      const CellParams p = resolve_cell(cfg, axes, rv, cv);
      const InpaintingInstance inst =
          build_inpainting(clean, cfg.missing, p.lambda1, p.lambda2, cfg.seed, cfg.levels);

      std::optional<StepSchedule> sched;
      if (cfg.solver == SolverKind::kIpg) {
        sched.emplace(p.a, p.b);
        const ProblemInstance problem = inst.problem();
        if (!validate_hypotheses(*sched, problem.penalty).ok()) {
          row.push_back("");
          continue;
        }
      }

      const std::string tag = std::string(solver_name(cfg.solver)) + "_" + axes.first.name +
                              fmt_g(rv) + "_" + axes.second.name + fmt_g(cv);
      Vector final_x = inst.observed;
      if (!(fixed && cfg.iters == 0)) {
        std::vector<double> series;
        const auto track = [&series, &clean, &inst](const IterationRecord&, const Vector& x) {
          series.push_back(isnr(clean.pixels, inst.observed, x));
        };
        SolveReport report;
        ++summary.solver_runs;
        if (cfg.solver == SolverKind::kIpg) {
          SolveOptions options;
          if (cfg.curves) options.on_iterate = track;
          report = solve(inst.problem(), *sched, rule, options);
        } else {
          BaselineOptions options;
          options.gamma = p.gamma;
          if (cfg.curves) options.on_iterate = track;
          const BaselineMethod method =
              cfg.solver == SolverKind::kPgm ? BaselineMethod::kPgm : BaselineMethod::kFista;
          report = run_baseline(inst.composite(), method, inst.observed, rule, options);
        }
        if (!fixed && !report.converged) ++summary.incomplete_runs;
        final_x = report.final_x;
        if (cfg.curves) {
          std::ofstream curve(fs::path(cfg.out_dir) / ("curves_" + tag + ".csv"));
          if (!curve) throw std::runtime_error("cannot write curves for " + tag);
          emit_curves(report, series, curve);
        }
      }
      row.push_back(fmt4(isnr(clean.pixels, inst.observed, final_x)));
      if (cfg.save_images) {
        write_pgm(Image(clean.rows, clean.cols, final_x),
                  (fs::path(cfg.out_dir) / ("recon_" + tag + ".pgm")).string());
      }
    }
    summary.table.rows.push_back(std::move(row));
  }

  write_table_file(summary.table, cfg.out_dir, "isnr_grid.csv");
  write_manifest(cfg);
  return summary;
}

RunSummary run_heron_sweep(const ExperimentConfig& cfg) {
  if (cfg.experiment != ExperimentKind::kHeron) {
    throw std::invalid_argument("run_heron_sweep: experiment must be heron");
  }
  if (cfg.solver != SolverKind::kIpg) {
    throw std::invalid_argument("run_heron_sweep: only the bilevel solver applies");
  }
  if (cfg.samples == 0) throw std::invalid_argument("run_heron_sweep: samples must be positive");

  const bool fixed = stop_is_fixed(cfg);
  const StoppingRule rule = make_rule(cfg, fixed);
  const bool grid_mode = cfg.a.size() > 1 || cfg.b.size() > 1;
  fs::create_directories(cfg.out_dir);

  RunSummary summary;

  struct CellStats {
    double time_sum = 0.0;
    double iter_sum = 0.0;
    double norm_sum = 0.0;
    std::size_t converged = 0;
  };

  const auto run_cell = [&](double a_v, double b_v, CellStats& stats) -> bool {
    {
      const HeronInstance probe = build_heron(cfg.m, cfg.n, !cfg.inconsistent, cfg.seed);
      if (!validate_hypotheses(probe.schedule(a_v, b_v), probe.problem().penalty).ok()) {
        return false;
      }
    }
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      const HeronInstance inst = build_heron(cfg.m, cfg.n, !cfg.inconsistent, cfg.seed + s);
      ++summary.solver_runs;
      const SolveReport report = solve(inst.problem(), inst.schedule(a_v, b_v), rule);
      if (!fixed && !report.converged) ++summary.incomplete_runs;
      stats.time_sum += cfg.no_timing ? 0.0 : report.elapsed_s;
      stats.iter_sum += static_cast<double>(report.iterations);
      stats.norm_sum += inst.op_norm;
      if (report.converged) ++stats.converged;
    }
    return true;
  };

  const double inv_samples = 1.0 / static_cast<double>(cfg.samples);
  if (grid_mode) {
    summary.table.columns.push_back("a\\b");
    for (double bv : cfg.b) summary.table.columns.push_back(fmt_g(bv));
    for (double av : cfg.a) {
      std::vector<std::string> row;
      row.push_back(fmt_g(av));
      for (double bv : cfg.b) {
        CellStats stats;
        row.push_back(run_cell(av, bv, stats) ? fmt4(stats.time_sum * inv_samples) : "");
      }
      summary.table.rows.push_back(std::move(row));
    }
  } else {
    summary.table.columns = {"m", "n", "mean_norm_a", "mean_time_s", "mean_iterations",
                             "converged_runs"};
    CellStats stats;
    if (!run_cell(cfg.a[0], cfg.b[0], stats)) {
      throw HypothesisError("run_heron_sweep: the configured (a,b) fails the hypothesis gate");
    }
    summary.table.rows.push_back({std::to_string(cfg.m), std::to_string(cfg.n),
                                  fmt4(stats.norm_sum * inv_samples),
                                  fmt4(stats.time_sum * inv_samples),
                                  fmt("%.1f", stats.iter_sum * inv_samples),
                                  std::to_string(stats.converged)});
  }

  write_table_file(summary.table, cfg.out_dir, "heron_sweep.csv");
  write_manifest(cfg);
  return summary;
}

RunSummary run_tolerance_sweep(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const StoppingRule base = make_rule(cfg, false);

  RunSummary summary;
  const bool inpaint = cfg.experiment == ExperimentKind::kInpaint;
  summary.table.columns = {"eps", "iterations", inpaint ? "isnr_db" : "penalty_gap", "converged"};

  std::optional<InpaintingInstance> inst;
  std::optional<HeronInstance> heron;
  if (inpaint) {
    if (cfg.image_path.empty()) throw std::invalid_argument("run_tolerance_sweep: no input image");
    const Image clean = read_pgm(cfg.image_path);
    inst = build_inpainting(clean, cfg.missing, cfg.lambda1.at(0), cfg.lambda2.at(0), cfg.seed,
                            cfg.levels);
  } else {
    if (cfg.solver != SolverKind::kIpg) {
      throw std::invalid_argument("run_tolerance_sweep: heron sweeps run the bilevel solver only");
    }
    heron = build_heron(cfg.m, cfg.n, !cfg.inconsistent, cfg.seed);
  }

  for (int p = 1; p <= 6; ++p) {
    StoppingRule rule = base;
    rule.eps = std::pow(10.0, -p);

    SolveReport report;
    ++summary.solver_runs;
    if (inpaint) {
      if (cfg.solver == SolverKind::kIpg) {
        report = solve(inst->problem(), StepSchedule(cfg.a.at(0), cfg.b.at(0)), rule);
      } else {
        const BaselineMethod method =
            cfg.solver == SolverKind::kPgm ? BaselineMethod::kPgm : BaselineMethod::kFista;
        BaselineOptions options;
        options.gamma = cfg.gamma.empty() ? 0.0 : cfg.gamma[0];
        report = run_baseline(inst->composite(), method, inst->observed, rule, options);
      }
    } else {
      report = solve(heron->problem(), heron->schedule(cfg.a.at(0), cfg.b.at(0)), rule);
    }
    if (!report.converged) ++summary.incomplete_runs;

    const double quality = inpaint
                               ? isnr(inst->clean->pixels, inst->observed, report.final_x)
                               : report.trace.back().penalty_value;
    summary.table.rows.push_back({fmt_g(rule.eps), std::to_string(report.iterations),
                                  inpaint ? fmt4(quality) : fmt10(quality),
                                  report.converged ? "true" : "false"});
  }

  write_table_file(summary.table, cfg.out_dir, "tolerance_sweep.csv");
  write_manifest(cfg);
  return summary;
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.tol_sweep) return run_tolerance_sweep(cfg);
  if (cfg.experiment == ExperimentKind::kInpaint) return run_isnr_grid(cfg);
  return run_heron_sweep(cfg);
}

}  // namespace ipg
