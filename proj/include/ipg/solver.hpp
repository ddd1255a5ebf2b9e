#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ipg/prox.hpp"
#include "ipg/vector_ops.hpp"

namespace ipg {

// One composite term F_i = f_i + h_i: f_i enters through its prox, h_i through
// its gradient. value_f/value_h are optional evaluators used for diagnostics
// and relative-change stopping.
struct ObjectiveTerm {
  ProxMap prox_f;
  std::function<Vector(const Vector&)> grad_h;
  double smooth_lipschitz = 0.0;
  std::function<double(const Vector&)> value_f;
  std::function<double(const Vector&)> value_h;
};

// Constraint-defining penalty g with Lipschitz gradient. min_value shifts
// reported penalty values so a run can be judged against "g -> min g" even
// when min g is nonzero (inconsistent least squares). growth_constant, when
// known, certifies quadratic growth g >= min g + (c/2) dist^2(., argmin g).
class PenaltyFunction {
 public:
  PenaltyFunction(std::function<double(const Vector&)> value,
                  std::function<Vector(const Vector&)> grad,
                  double grad_lipschitz,
                  double min_value = 0.0,
                  std::optional<double> growth_constant = std::nullopt);

  double value(const Vector& x) const { return value_(x); }
  Vector grad(const Vector& x) const { return grad_(x); }
  double grad_lipschitz() const { return grad_lipschitz_; }
  double min_value() const { return min_value_; }
  const std::optional<double>& growth_constant() const { return growth_constant_; }

 private:
  std::function<double(const Vector&)> value_;
  std::function<Vector(const Vector&)> grad_;
  double grad_lipschitz_;
  double min_value_;
  std::optional<double> growth_constant_;
};

// Diminishing step alpha_k = a/k paired with the growing penalty weight
// beta_k = b*k, k >= 1. The product alpha_k * beta_k = a*b stays constant,
// which is what the validation hypotheses constrain.
class StepSchedule {
 public:
  StepSchedule(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double alpha(std::size_t k) const { return a_ / static_cast<double>(k); }
  double beta(std::size_t k) const { return b_ * static_cast<double>(k); }

 private:
  double a_;
  double b_;
};

struct ProblemInstance {
  std::vector<ObjectiveTerm> terms;
  PenaltyFunction penalty;
  Vector start;
  std::optional<Vector> oracle;  // known solution, for distance diagnostics
};

// Diagnostics row for iterate x_k. inner_disp_sq is sum_i ||phi_{i+1,k} -
// phi_{i,k}||^2 over the inner pass leaving x_k; it is absent on the final
// iterate, which has no outgoing step. penalty_value is g(x_k) - min g.
// Baseline runs reuse the row with the data-fit value in the penalty slot and
// no gradient norm.
struct IterationRecord {
  std::size_t k = 0;
  double penalty_value = 0.0;
  std::optional<double> penalty_grad_norm;
  std::optional<double> inner_disp_sq;
  std::optional<double> objective;
  std::optional<double> dist_to_oracle;
  double elapsed_s = 0.0;
};

struct SolverState {
  std::size_t k = 1;
  Vector x;
  std::vector<IterationRecord> trace;
};

// Relative-change stopping: fire when
//   max{ ||x+ - x|| / (||x|| + 1),
//        |obj+ - obj| / (|obj| + 1),
//        |pen+ - pen| / (|pen| + 1) } <= eps
// between consecutive iterates. The objective slot carries F (bilevel runs)
// or the regularizer part A (composite baselines); the penalty slot carries g
// or the data-fit part B. With fixed_iterations set, eps is ignored and
// exactly max_iters steps run.
struct StoppingRule {
  double eps = 1e-6;
  std::size_t max_iters = 100000;
  bool fixed_iterations = false;
};

bool stopping_check(const Vector& x_prev, const Vector& x_next,
                    double obj_prev, double obj_next,
                    double penalty_prev, double penalty_next, double eps);

enum class HypothesisStatus { kSatisfied, kViolated, kUnverified };

struct HypothesisCheck {
  std::string name;
  HypothesisStatus status = HypothesisStatus::kUnverified;
  double margin = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;

  bool ok() const;  // true when nothing is violated (unverified passes)
  const HypothesisCheck& find(const std::string& name) const;
  std::string summary() const;
};

// Checks the step/penalty schedule against the convergence hypotheses for the
// family alpha = a/k, beta = b*k:
//   (H2) sum alpha_k = inf, sum alpha_k^2 < inf       - automatic for a > 0
//   (H3) a*b < 2/L_g strictly                          - margin 2/L_g - a*b
//   (H4) penalty growth fast enough for beta ~ b*k     - satisfied when a
//        quadratic-growth constant is declared, otherwise unverified
ValidationReport validate_hypotheses(const StepSchedule& sched, const PenaltyFunction& penalty);

struct SolveOptions {
  bool skip_hypothesis_check = false;
  bool keep_iterates = false;
  // Called once per recorded iterate with its diagnostics row and the point.
  std::function<void(const IterationRecord&, const Vector&)> on_iterate;
};

struct SolveReport {
  std::vector<IterationRecord> trace;
  Vector final_x;
  std::size_t iterations = 0;  // steps performed, so final k = iterations + 1
  bool converged = false;
  double elapsed_s = 0.0;
  std::string stop_reason;
  std::vector<Vector> iterates;  // filled only with SolveOptions::keep_iterates
};

// One outer iteration:
//   phi_1 = x_k - alpha_k * beta_k * grad g(x_k)
//   for i = 1..m:  phi_{i+1} = prox_{alpha_k f_i}(phi_i - alpha_k * grad h_i(phi_i))
//   x_{k+1} = phi_{m+1}
// Appends the diagnostics record for x_k (its penalty value, gradient norm,
// objective when evaluators exist, and the inner displacement sum of this
// pass); the caller owns dist_to_oracle and elapsed_s. Throws DivergenceError
// when any intermediate point goes non-finite, carrying k and the index of the
// offending stage (0 = penalty step, i = term i).
void ipg_step(SolverState& state, const std::vector<ObjectiveTerm>& terms,
              const PenaltyFunction& penalty, const StepSchedule& sched);

// Runs ipg_step until the stopping rule fires or max_iters is hit. Refuses to
// run schedules that fail validate_hypotheses unless the options override is
// set. Tolerance mode needs value evaluators on every term.
SolveReport solve(const ProblemInstance& problem, const StepSchedule& sched,
                  const StoppingRule& stop, const SolveOptions& options = {});

// Quasi-Fejer diagnostics for a finished run against a known solution u*:
// slack delta_k = max(0, ||x_{k+1}-u*||^2 - ||x_k-u*||^2) must have a small
// tail sum, and the penalty gap, its gradient norm, and the inner displacement
// must all have decayed by the final iterate. Requires a report produced with
// keep_iterates and at least 10 iterates.
struct FejerReport {
  double total_slack = 0.0;
  double tail_slack = 0.0;  // sum of delta_k over the last half of the run
  bool tail_ok = false;
  double final_penalty = 0.0;
  double final_grad_norm = 0.0;
  double final_inner_disp = 0.0;
  bool limits_ok = false;
};

FejerReport quasi_fejer_check(const SolveReport& report, const Vector& u_star,
                              double slack_tol, double value_tol);

// Trace CSV: columns k,g,grad_g_norm,inner_disp_sq,obj_F,dist_to_oracle,elapsed_s.
// Optional fields render as empty cells; elapsed_s has 4 decimals.
void write_trace_csv(const SolveReport& report, std::ostream& out);

}  // namespace ipg
