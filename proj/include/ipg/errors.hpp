#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ipg {

/* Iterate or inner point became NaN/Inf during a solve. */
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int iteration, int term_index, std::size_t component,
                  const std::string& what)
      : std::runtime_error(what),
        iteration(iteration),
        term_index(term_index),
        component(component) {}

  int iteration;        // outer iteration k at which the blow-up was seen
  int term_index;       // 0 = penalty step, i >= 1 = objective term i
  std::size_t component;
};

/* Iterative estimator hit its iteration cap before reaching tolerance. */
class NotConvergedError : public std::runtime_error {
 public:
  NotConvergedError(double last_estimate, int iterations, const std::string& what)
      : std::runtime_error(what), last_estimate(last_estimate), iterations(iterations) {}

  double last_estimate;
  int iterations;
};

/* Step schedule fails a convergence hypothesis and no override was given. */
class HypothesisError : public std::runtime_error {
 public:
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ipg
