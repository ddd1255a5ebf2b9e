#include "ipg/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ipg/errors.hpp"

namespace ipg {

namespace {

double relative_change(double prev, double next) {
  return std::abs(next - prev) / (std::abs(prev) + 1.0);
}

// F(x) = sum_i f_i(x) + h_i(x); absent when any evaluator is missing.
std::optional<double> evaluate_objective(const std::vector<ObjectiveTerm>& terms, const Vector& x) {
  double total = 0.0;
  for (const auto& term : terms) {
    if (!term.value_f || !term.value_h) return std::nullopt;
    total += term.value_f(x) + term.value_h(x);
  }
  return total;
}

void validate_problem(const ProblemInstance& problem) {
  if (problem.terms.empty()) throw std::invalid_argument("solve: no objective terms");
  if (problem.start.empty()) throw std::invalid_argument("solve: empty start point");
  check_finite(problem.start, "solve: start");
  for (std::size_t i = 0; i < problem.terms.size(); ++i) {
    const ObjectiveTerm& term = problem.terms[i];
    if (!term.prox_f || !term.grad_h) {
      throw std::invalid_argument("solve: term " + std::to_string(i + 1) +
                                  " is missing its prox or gradient map");
    }
    if (!(term.smooth_lipschitz >= 0.0)) {
      throw std::invalid_argument("solve: term " + std::to_string(i + 1) +
                                  " has a negative Lipschitz constant");
    }
  }
  if (problem.oracle && problem.oracle->size() != problem.start.size()) {
    throw std::invalid_argument("solve: oracle dimension mismatch");
  }
}

}  // namespace

PenaltyFunction::PenaltyFunction(std::function<double(const Vector&)> value,
                                 std::function<Vector(const Vector&)> grad,
                                 double grad_lipschitz,
                                 double min_value,
                                 std::optional<double> growth_constant)
    : value_(std::move(value)),
      grad_(std::move(grad)),
      grad_lipschitz_(grad_lipschitz),
      min_value_(min_value),
      growth_constant_(growth_constant) {
  if (!value_ || !grad_) throw std::invalid_argument("PenaltyFunction: missing value or gradient map");
  if (!(grad_lipschitz_ > 0.0)) throw std::invalid_argument("PenaltyFunction: L_g must be positive");
  if (!std::isfinite(min_value_)) throw std::invalid_argument("PenaltyFunction: min_value must be finite");
  if (growth_constant_ && !(*growth_constant_ > 0.0)) {
    throw std::invalid_argument("PenaltyFunction: growth constant must be positive");
  }
}

StepSchedule::StepSchedule(double a, double b) : a_(a), b_(b) {
  if (!(a_ > 0.0) || !(b_ > 0.0)) {
    throw std::invalid_argument("StepSchedule: a and b must be positive");
  }
}

bool stopping_check(const Vector& x_prev, const Vector& x_next,
                    double obj_prev, double obj_next,
                    double penalty_prev, double penalty_next, double eps) {
  const double iterate_change = dist(x_next, x_prev) / (norm(x_prev) + 1.0);
  const double obj_change = relative_change(obj_prev, obj_next);
  const double penalty_change = relative_change(penalty_prev, penalty_next);
  return std::max({iterate_change, obj_change, penalty_change}) <= eps;
}

bool ValidationReport::ok() const {
  for (const HypothesisCheck& check : checks) {
    if (check.status == HypothesisStatus::kViolated) return false;
  }
  return true;
}

const HypothesisCheck& ValidationReport::find(const std::string& name) const {
  for (const HypothesisCheck& check : checks) {
    if (check.name == name) return check;
  }
  throw std::out_of_range("ValidationReport: no hypothesis named " + name);
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const HypothesisCheck& check : checks) {
    if (!out.empty()) out += "; ";
    out += check.name;
    switch (check.status) {
      case HypothesisStatus::kSatisfied: out += " satisfied"; break;
      case HypothesisStatus::kViolated: out += " violated"; break;
      case HypothesisStatus::kUnverified: out += " unverified"; break;
    }
    out += " (" + check.detail + ")";
  }
  return out;
}

ValidationReport validate_hypotheses(const StepSchedule& sched, const PenaltyFunction& penalty) {
  ValidationReport report;

  HypothesisCheck h2;
  h2.name = "H2";
  h2.status = HypothesisStatus::kSatisfied;
  h2.margin = sched.a();
  h2.detail = "alpha_k = a/k is square-summable but not summable for any a > 0";
  report.checks.push_back(std::move(h2));

  HypothesisCheck h3;
  h3.name = "H3";
  const double bound = 2.0 / penalty.grad_lipschitz();
  const double product = sched.a() * sched.b();
  h3.margin = bound - product;
  h3.status = h3.margin > 0.0 ? HypothesisStatus::kSatisfied : HypothesisStatus::kViolated;
  char buf[160];
  std::snprintf(buf, sizeof buf, "alpha_k*beta_k = %.12g must stay strictly below 2/L_g = %.12g",
                product, bound);
  h3.detail = buf;
  report.checks.push_back(std::move(h3));

  HypothesisCheck h4;
  h4.name = "H4";
  if (penalty.growth_constant()) {
    h4.status = HypothesisStatus::kSatisfied;
    h4.margin = *penalty.growth_constant();
    h4.detail = "penalty declares quadratic growth, which suffices for beta_k = b*k";
  } else {
    h4.status = HypothesisStatus::kUnverified;
    h4.margin = 0.0;
    h4.detail = "no growth constant declared; not checkable from evaluators alone";
  }
  report.checks.push_back(std::move(h4));

  return report;
}

void ipg_step(SolverState& state, const std::vector<ObjectiveTerm>& terms,
              const PenaltyFunction& penalty, const StepSchedule& sched) {
  const std::size_t k = state.k;
  if (k < 1) throw std::invalid_argument("ipg_step: iteration counter must start at 1");
  const double alpha = sched.alpha(k);
  const double weight = alpha * sched.beta(k);

  Vector grad = penalty.grad(state.x);

  IterationRecord record;
  record.k = k;
  record.penalty_value = penalty.value(state.x) - penalty.min_value();
  record.penalty_grad_norm = norm(grad);
  record.objective = evaluate_objective(terms, state.x);

  Vector phi = state.x;
  axpy(-weight, grad, phi);
  std::size_t bad = first_nonfinite(phi);
  if (bad != kAllFinite) {
    throw DivergenceError(static_cast<int>(k), 0, bad,
                          "ipg_step: penalty step produced a non-finite iterate at k=" +
                              std::to_string(k));
  }

  double disp = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Vector grad_h = terms[i].grad_h(phi);
    Vector mid = phi;
    axpy(-alpha, grad_h, mid);
    bad = first_nonfinite(mid);
    if (bad == kAllFinite) {
      Vector next = terms[i].prox_f(mid, alpha);
      bad = first_nonfinite(next);
      if (bad == kAllFinite) {
        disp += dist_sq(next, phi);
        phi = std::move(next);
        continue;
      }
    }
    throw DivergenceError(static_cast<int>(k), static_cast<int>(i + 1), bad,
                          "ipg_step: term " + std::to_string(i + 1) +
                              " produced a non-finite iterate at k=" + std::to_string(k));
  }
  record.inner_disp_sq = disp;

  state.x = std::move(phi);
  state.k = k + 1;
  state.trace.push_back(std::move(record));
}

SolveReport solve(const ProblemInstance& problem, const StepSchedule& sched,
                  const StoppingRule& stop, const SolveOptions& options) {
  validate_problem(problem);
  if (stop.max_iters == 0) throw std::invalid_argument("solve: max_iters must be positive");
  if (!stop.fixed_iterations && !(stop.eps > 0.0)) {
    throw std::invalid_argument("solve: eps must be positive");
  }

  const ValidationReport validation = validate_hypotheses(sched, problem.penalty);
  if (!validation.ok() && !options.skip_hypothesis_check) {
    throw HypothesisError("solve: schedule rejected: " + validation.summary());
  }

  std::optional<double> obj_prev = evaluate_objective(problem.terms, problem.start);
  if (!stop.fixed_iterations && !obj_prev) {
    throw std::invalid_argument("solve: tolerance stopping needs value evaluators on every term");
  }
  double penalty_prev = problem.penalty.value(problem.start);

  SolverState state;
  state.x = problem.start;
  state.k = 1;

  SolveReport report;
  report.stop_reason = "max_iters";
  if (options.keep_iterates) report.iterates.push_back(state.x);

  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  Vector prev_x;
  std::size_t steps = 0;
  while (steps < stop.max_iters) {
    prev_x = state.x;
    ipg_step(state, problem.terms, problem.penalty, sched);
    ++steps;

    IterationRecord& rec = state.trace.back();
    if (problem.oracle) rec.dist_to_oracle = dist(prev_x, *problem.oracle);
    rec.elapsed_s = elapsed();
    if (options.keep_iterates) report.iterates.push_back(state.x);
    if (options.on_iterate) options.on_iterate(rec, prev_x);

    const double penalty_next = problem.penalty.value(state.x);
    const std::optional<double> obj_next = evaluate_objective(problem.terms, state.x);
    if (!stop.fixed_iterations &&
        stopping_check(prev_x, state.x, obj_prev.value_or(0.0), obj_next.value_or(0.0),
                       penalty_prev, penalty_next, stop.eps)) {
      report.converged = true;
      report.stop_reason = "tolerance";
      penalty_prev = penalty_next;
      obj_prev = obj_next;
      break;
    }
    penalty_prev = penalty_next;
    obj_prev = obj_next;
  }

  IterationRecord last;
  last.k = state.k;
  last.penalty_value = penalty_prev - problem.penalty.min_value();
  last.penalty_grad_norm = norm(problem.penalty.grad(state.x));
  last.objective = obj_prev;
  if (problem.oracle) last.dist_to_oracle = dist(state.x, *problem.oracle);
  last.elapsed_s = elapsed();
  state.trace.push_back(std::move(last));
  if (options.on_iterate) options.on_iterate(state.trace.back(), state.x);

  if (stop.fixed_iterations) {
    report.converged = steps == stop.max_iters;
    report.stop_reason = "fixed_iterations";
  }

  report.trace = std::move(state.trace);
  report.final_x = std::move(state.x);
  report.iterations = steps;
  report.elapsed_s = elapsed();
  return report;
}

FejerReport quasi_fejer_check(const SolveReport& report, const Vector& u_star,
                              double slack_tol, double value_tol) {
  if (report.iterates.size() < 10) {
    throw std::invalid_argument("quasi_fejer_check: needs a report with at least 10 kept iterates");
  }
  if (report.trace.empty()) throw std::invalid_argument("quasi_fejer_check: empty trace");

  const std::size_t n = report.iterates.size();
  FejerReport out;
  double prev_d = dist_sq(report.iterates[0], u_star);
  std::vector<double> slack(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double d = dist_sq(report.iterates[k], u_star);
    slack[k - 1] = std::max(0.0, d - prev_d);
    out.total_slack += slack[k - 1];
    prev_d = d;
  }
  for (std::size_t k = slack.size() / 2; k < slack.size(); ++k) out.tail_slack += slack[k];
  out.tail_ok = out.tail_slack <= slack_tol;

  out.final_penalty = report.trace.back().penalty_value;
  out.final_grad_norm = report.trace.back().penalty_grad_norm.value_or(
      std::numeric_limits<double>::infinity());
  for (auto it = report.trace.rbegin(); it != report.trace.rend(); ++it) {
    if (it->inner_disp_sq) {
      out.final_inner_disp = *it->inner_disp_sq;
      break;
    }
  }
  out.limits_ok = out.final_penalty <= value_tol && out.final_grad_norm <= value_tol &&
                  out.final_inner_disp <= value_tol;
  return out;
}

void write_trace_csv(const SolveReport& report, std::ostream& out) {
  out << "k,g,grad_g_norm,inner_disp_sq,obj_F,dist_to_oracle,elapsed_s\n";
  char buf[64];
  const auto put = [&out, &buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (const IterationRecord& rec : report.trace) {
    out << rec.k << ',';
    put(rec.penalty_value);
    out << ',';
    if (rec.penalty_grad_norm) put(*rec.penalty_grad_norm);
    out << ',';
    if (rec.inner_disp_sq) put(*rec.inner_disp_sq);
    out << ',';
    if (rec.objective) put(*rec.objective);
    out << ',';
    if (rec.dist_to_oracle) put(*rec.dist_to_oracle);
    out << ',';
    std::snprintf(buf, sizeof buf, "%.4f", rec.elapsed_s);
    out << buf << '\n';
  }
}

}  // namespace ipg
