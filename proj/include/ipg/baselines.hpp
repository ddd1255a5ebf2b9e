#pragma once

#include <functional>
#include <optional>

#include "ipg/prox.hpp"
#include "ipg/solver.hpp"
#include "ipg/vector_ops.hpp"

namespace ipg {

// Single composite objective f + h for the unconstrained baselines. value_reg
// and value_data split the objective into the regularizer part A and the
// data-fit part B used by the relative-change stopping rule; value_f/value_h
// follow the prox/gradient split and feed the reported objective.
struct CompositeProblem {
  ProxMap prox_f;
  std::function<Vector(const Vector&)> grad_h;
  double smooth_lipschitz = 0.0;  // L_h > 0
  std::function<double(const Vector&)> value_f;
  std::function<double(const Vector&)> value_h;
  std::function<double(const Vector&)> value_reg;
  std::function<double(const Vector&)> value_data;
};

// prox_{gamma f}(x - gamma * grad h(x)). Requires 0 < gamma < 2/L_h unless the
// caller explicitly overrides the range check.
Vector pgm_step(const Vector& x, const CompositeProblem& problem, double gamma,
                bool allow_gamma_out_of_range = false);

struct FistaState {
  Vector x;
  Vector y;
  double t = 1.0;
};

// x+ = prox_{f/L}(y - (1/L) grad h(y));  t+ = (1 + sqrt(1+4t^2))/2;
// y+ = x+ + ((t-1)/t+) (x+ - x).
FistaState fista_step(const FistaState& state, const CompositeProblem& problem);

enum class BaselineMethod { kPgm, kFista };

struct BaselineOptions {
  // PGM step size; 0 means the default 1.9/L_h.
  double gamma = 0.0;
  bool allow_gamma_out_of_range = false;
  bool keep_iterates = false;
  std::function<void(const IterationRecord&, const Vector&)> on_iterate;
};

// Runs the chosen method from start until the stopping rule fires. Produces
// the same SolveReport shape as the bilevel solver: the penalty column holds
// the data-fit value B (0 when no value_data is given), the gradient-norm
// column stays blank, and inner_disp_sq is the squared step length. A
// fixed_iterations rule with max_iters = 0 returns the start point.
SolveReport run_baseline(const CompositeProblem& problem, BaselineMethod method,
                         const Vector& start, const StoppingRule& stop,
                         const BaselineOptions& options = {});

}  // namespace ipg
