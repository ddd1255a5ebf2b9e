#include "ipg/baselines.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "ipg/errors.hpp"

namespace ipg {

namespace {

void validate_composite(const CompositeProblem& problem) {
  if (!problem.prox_f || !problem.grad_h) {
    throw std::invalid_argument("baseline: missing prox or gradient map");
  }
  if (!(problem.smooth_lipschitz > 0.0)) {
    throw std::invalid_argument("baseline: L_h must be positive");
  }
}

void check_gamma(double gamma, double lipschitz, bool allow_out_of_range) {
  if (allow_out_of_range) return;
  if (!(gamma > 0.0) || !(gamma < 2.0 / lipschitz)) {
    throw std::invalid_argument("pgm_step: gamma must lie in (0, 2/L_h); pass the override to force");
  }
}

Vector forward_backward(const Vector& at, const CompositeProblem& problem, double step,
                        std::size_t k) {
  Vector mid = at;
  axpy(-step, problem.grad_h(at), mid);
  std::size_t bad = first_nonfinite(mid);
  if (bad == kAllFinite) {
    Vector next = problem.prox_f(mid, step);
    bad = first_nonfinite(next);
    if (bad == kAllFinite) return next;
  }
  throw DivergenceError(static_cast<int>(k), 1, bad,
                        "baseline: non-finite iterate at k=" + std::to_string(k));
}

std::optional<double> composite_value(const CompositeProblem& problem, const Vector& x) {
  if (!problem.value_f || !problem.value_h) return std::nullopt;
  return problem.value_f(x) + problem.value_h(x);
}

}  // namespace

Vector pgm_step(const Vector& x, const CompositeProblem& problem, double gamma,
                bool allow_gamma_out_of_range) {
  validate_composite(problem);
  check_gamma(gamma, problem.smooth_lipschitz, allow_gamma_out_of_range);
  return forward_backward(x, problem, gamma, 0);
}

FistaState fista_step(const FistaState& state, const CompositeProblem& problem) {
  validate_composite(problem);
  if (!(state.t >= 1.0)) throw std::invalid_argument("fista_step: t must be at least 1");
  FistaState next;
  next.x = forward_backward(state.y, problem, 1.0 / problem.smooth_lipschitz, 0);
  next.t = (1.0 + std::sqrt(1.0 + 4.0 * state.t * state.t)) / 2.0;
  next.y = next.x;
  const double momentum = (state.t - 1.0) / next.t;
  for (std::size_t j = 0; j < next.y.size(); ++j) {
    next.y[j] += momentum * (next.x[j] - state.x[j]);
  }
  return next;
}

SolveReport run_baseline(const CompositeProblem& problem, BaselineMethod method,
                         const Vector& start, const StoppingRule& stop,
                         const BaselineOptions& options) {
  validate_composite(problem);
  if (start.empty()) throw std::invalid_argument("run_baseline: empty start point");
  check_finite(start, "run_baseline: start");
  if (!stop.fixed_iterations) {
    if (!(stop.eps > 0.0)) throw std::invalid_argument("run_baseline: eps must be positive");
    if (stop.max_iters == 0) throw std::invalid_argument("run_baseline: max_iters must be positive");
    if (!problem.value_reg || !problem.value_data) {
      throw std::invalid_argument(
          "run_baseline: tolerance stopping needs the regularizer/data-fit split");
    }
  }

  double gamma = options.gamma;
  if (method == BaselineMethod::kPgm) {
    if (gamma == 0.0) gamma = 1.9 / problem.smooth_lipschitz;
    check_gamma(gamma, problem.smooth_lipschitz, options.allow_gamma_out_of_range);
  }

  FistaState state;
  state.x = start;
  state.y = start;

  SolveReport report;
  report.stop_reason = "max_iters";
  if (options.keep_iterates) report.iterates.push_back(state.x);

  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const auto data_value = [&problem](const Vector& x) {
    return problem.value_data ? problem.value_data(x) : 0.0;
  };
  const auto reg_value = [&problem](const Vector& x) {
    return problem.value_reg ? problem.value_reg(x) : 0.0;
  };

  double data_prev = data_value(start);
  double reg_prev = reg_value(start);

  std::vector<IterationRecord> trace;
  std::size_t steps = 0;
  std::size_t k = 1;
  while (steps < stop.max_iters) {
    const Vector prev_x = state.x;
    if (method == BaselineMethod::kPgm) {
      state.x = forward_backward(prev_x, problem, gamma, k);
      state.y = state.x;
    } else {
      state = fista_step(state, problem);
    }
    ++steps;

    IterationRecord rec;
    rec.k = k;
    rec.penalty_value = data_prev;
    rec.inner_disp_sq = dist_sq(state.x, prev_x);
    rec.objective = composite_value(problem, prev_x);
    rec.elapsed_s = elapsed();
    trace.push_back(std::move(rec));
    ++k;
    if (options.keep_iterates) report.iterates.push_back(state.x);
    if (options.on_iterate) options.on_iterate(trace.back(), prev_x);

    const double data_next = data_value(state.x);
    const double reg_next = reg_value(state.x);
    if (!stop.fixed_iterations &&
        stopping_check(prev_x, state.x, reg_prev, reg_next, data_prev, data_next, stop.eps)) {
      report.converged = true;
      report.stop_reason = "tolerance";
      data_prev = data_next;
      reg_prev = reg_next;
      break;
    }
    data_prev = data_next;
    reg_prev = reg_next;
  }

  IterationRecord last;
  last.k = k;
  last.penalty_value = data_prev;
  last.objective = composite_value(problem, state.x);
  last.elapsed_s = elapsed();
  trace.push_back(std::move(last));
  if (options.on_iterate) options.on_iterate(trace.back(), state.x);

  if (stop.fixed_iterations) {
    report.converged = true;
    report.stop_reason = "fixed_iterations";
  }

  report.trace = std::move(trace);
  report.final_x = std::move(state.x);
  report.iterations = steps;
  report.elapsed_s = elapsed();
  return report;
}

}  // namespace ipg
