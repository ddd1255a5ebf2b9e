#include "ipg/problems.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ipg/rng.hpp"

namespace ipg {

namespace {

double l1_norm(const Vector& x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

// Shared capture for the penalty closures so the mask and observed vector are
// stored once per instance, not once per lambda.
struct Observation {
  DiagonalMask mask;
  Vector b;
};

double masked_half_sq(const Observation& obs, const Vector& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (obs.mask.observed(i)) {
      const double d = x[i] - obs.b[i];
      s += d * d;
    }
  }
  return 0.5 * s;
}

Vector masked_residual(const Observation& obs, const Vector& x) {
  Vector g(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (obs.mask.observed(i)) g[i] = x[i] - obs.b[i];
  }
  return g;
}

double ball_distance(const Vector& x, const BallSet& ball) {
  return std::max(0.0, dist(x, ball.center) - ball.radius);
}

}  // namespace

double InpaintingInstance::regularizer(const Vector& x) const {
  return lambda1 * l1_norm(transform->forward(x)) + 0.5 * lambda2 * dot(x, x);
}

double InpaintingInstance::data_fit(const Vector& x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (mask.observed(i)) {
      const double d = x[i] - observed[i];
      s += d * d;
    }
  }
  return 0.5 * s;
}

ProblemInstance InpaintingInstance::problem() const {
  const auto prox = std::make_shared<const ProxL1Orthogonal>(transform);
  const auto w = transform;
  const double l1 = lambda1;
  const double l2 = lambda2;

  ObjectiveTerm term;
  term.prox_f = [prox, l1](const Vector& v, double r) { return (*prox)(v, r * l1); };
  term.grad_h = [l2](const Vector& x) { return scaled(x, l2); };
  term.smooth_lipschitz = l2;
  term.value_f = [w, l1](const Vector& x) { return l1 * l1_norm(w->forward(x)); };
  term.value_h = [l2](const Vector& x) { return 0.5 * l2 * dot(x, x); };

  const auto obs = std::make_shared<const Observation>(Observation{mask, observed});
  PenaltyFunction penalty(
      [obs](const Vector& x) { return masked_half_sq(*obs, x); },
      [obs](const Vector& x) { return masked_residual(*obs, x); },
      1.0, 0.0, 1.0);

  return ProblemInstance{{std::move(term)}, std::move(penalty), observed, std::nullopt};
}

CompositeProblem InpaintingInstance::composite() const {
  const auto prox = std::make_shared<const ProxL1Orthogonal>(transform);
  const auto w = transform;
  const double l1 = lambda1;
  const double l2 = lambda2;
  const auto obs = std::make_shared<const Observation>(Observation{mask, observed});

  CompositeProblem out;
  out.prox_f = [prox, l1](const Vector& v, double r) { return (*prox)(v, r * l1); };
  out.grad_h = [l2, obs](const Vector& x) {
    Vector g = masked_residual(*obs, x);
    axpy(l2, x, g);
    return g;
  };
  out.smooth_lipschitz = l2 + 1.0;
  out.value_f = [w, l1](const Vector& x) { return l1 * l1_norm(w->forward(x)); };
  out.value_h = [l2, obs](const Vector& x) {
    return 0.5 * l2 * dot(x, x) + masked_half_sq(*obs, x);
  };
  out.value_reg = [w, l1, l2](const Vector& x) {
    return l1 * l1_norm(w->forward(x)) + 0.5 * l2 * dot(x, x);
  };
  out.value_data = [obs](const Vector& x) { return masked_half_sq(*obs, x); };
  return out;
}

std::string InpaintingInstance::manifest() const {
  std::ostringstream out;
  out << "experiment=inpainting\n";
  out << "rows=" << rows() << "\n";
  out << "cols=" << cols() << "\n";
  out << "levels=" << transform->levels() << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", missing_fraction);
  out << "missing_fraction=" << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", lambda1);
  out << "lambda1=" << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", lambda2);
  out << "lambda2=" << buf << "\n";
  out << "seed=" << seed << "\n";
  return out.str();
}

InpaintingInstance build_inpainting(const Image& clean, double missing_fraction,
                                    double lambda1, double lambda2, std::uint64_t seed,
                                    std::size_t levels) {
  if (!(missing_fraction > 0.0) || !(missing_fraction < 1.0)) {
    throw std::invalid_argument("build_inpainting: missing_fraction must lie in (0,1)");
  }
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw std::invalid_argument("build_inpainting: lambda1 and lambda2 must be positive");
  }
  for (double v : clean.pixels) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("build_inpainting: clean pixels must lie in [0,1]");
    }
  }
  const std::size_t n = clean.size();
  const std::size_t hidden = static_cast<std::size_t>(missing_fraction * static_cast<double>(n));
  if (hidden == 0 || hidden >= n) {
    throw std::invalid_argument("build_inpainting: mask would hide nothing or everything");
  }
  if (max_levels(clean.rows, clean.cols) == 0) {
    throw std::invalid_argument("build_inpainting: image dimensions must both be even");
  }
  if (levels == 0) levels = max_levels(clean.rows, clean.cols);
  const auto transform = std::make_shared<const HaarTransform>(clean.rows, clean.cols, levels);

  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  SeededRng rng(seed);
  rng.shuffle(indices);
  indices.resize(hidden);
  DiagonalMask mask = DiagonalMask::from_masked_indices(n, indices);
  Vector b = mask.apply(clean.pixels);

  return InpaintingInstance{clean,   mask,      std::move(b),     lambda1,
                            lambda2, transform, missing_fraction, seed};
}

double HeronInstance::penalty_value(const Vector& x) const {
  Vector res = matrix.apply(x);
  axpy(-1.0, rhs, res);
  return 0.5 * dot(res, res);
}

ProblemInstance HeronInstance::problem() const {
  std::vector<ObjectiveTerm> terms;
  const double inv_m = 1.0 / static_cast<double>(m);
  for (const BallSet& ball : balls) {
    ObjectiveTerm term;
    term.prox_f = [ball](const Vector& v, double r) { return prox_dist_ball(v, r, ball); };
    term.grad_h = [inv_m](const Vector& x) { return scaled(x, inv_m); };
    term.smooth_lipschitz = inv_m;
    term.value_f = [ball](const Vector& x) { return ball_distance(x, ball); };
    term.value_h = [inv_m](const Vector& x) { return 0.5 * inv_m * dot(x, x); };
    terms.push_back(std::move(term));
  }

  const auto a = std::make_shared<const DenseMatrix>(matrix);
  const auto b = std::make_shared<const Vector>(rhs);
  const auto residual = [a, b](const Vector& x) {
    Vector res = a->apply(x);
    axpy(-1.0, *b, res);
    return res;
  };
  double min_value = 0.0;
  if (least_squares) min_value = penalty_value(*least_squares);
  PenaltyFunction penalty(
      [residual](const Vector& x) {
        const Vector res = residual(x);
        return 0.5 * dot(res, res);
      },
      [a, residual](const Vector& x) { return a->apply_transpose(residual(x)); },
      op_norm * op_norm, min_value, growth);

  return ProblemInstance{std::move(terms), std::move(penalty), start, least_squares};
}

StepSchedule HeronInstance::schedule(double a, double b) const {
  return StepSchedule(a, b / (op_norm * op_norm));
}

std::string HeronInstance::manifest() const {
  std::ostringstream out;
  out << "experiment=heron\n";
  out << "m=" << m << "\n";
  out << "n=" << n << "\n";
  out << "consistent=" << (consistent ? "true" : "false") << "\n";
  out << "seed=" << seed << "\n";
  return out.str();
}

HeronInstance build_heron(std::size_t m, std::size_t n, bool consistent, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("build_heron: m and n must be at least 1");

  SeededRng rng(seed);
  const double span = static_cast<double>(n) * static_cast<double>(n);

  HeronInstance inst;
  inst.m = m;
  inst.n = n;
  inst.consistent = consistent;
  inst.seed = seed;

  for (std::size_t i = 0; i < m; ++i) {
    Vector center(n);
    for (double& c : center) c = rng.uniform(-span, span);
    inst.balls.emplace_back(std::move(center), 0.2);
  }

  const std::size_t r = m * m;
  inst.matrix = DenseMatrix(r, n);
  for (double& entry : inst.matrix.data) entry = rng.uniform(-span, span);

  inst.rhs.assign(r, 0.0);
  if (!consistent) {
    for (double& v : inst.rhs) v = rng.uniform(0.0, 1.0);
  }

  inst.start.resize(n);
  for (double& v : inst.start) v = rng.uniform(-span, span);

  inst.op_norm = operator_norm(inst.matrix);
  if (gram_condition(inst.matrix) < 1e12) {
    inst.least_squares = solve_least_squares(inst.matrix, inst.rhs);
    inst.growth = smallest_positive_eigenvalue(inst.matrix.gram());
  }
  return inst;
}

double isnr(const Vector& clean, const Vector& noisy, const Vector& current) {
  if (clean.size() != noisy.size() || clean.size() != current.size()) {
    throw std::invalid_argument("isnr: dimension mismatch");
  }
  const double reference = dist_sq(clean, noisy);
  if (reference == 0.0) return 0.0;
  const double error = dist_sq(clean, current);
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(reference / error);
}

double isnr(const Image& clean, const Image& noisy, const Image& current) {
  if (clean.rows != noisy.rows || clean.cols != noisy.cols ||
      clean.rows != current.rows || clean.cols != current.cols) {
    throw std::invalid_argument("isnr: image dimension mismatch");
  }
  return isnr(clean.pixels, noisy.pixels, current.pixels);
}

OracleResult inpainting_oracle(const InpaintingInstance& instance, std::size_t iters, double tol) {
  if (instance.size() > 64) {
    throw std::invalid_argument("inpainting_oracle: instance too large (at most 64 pixels)");
  }
  if (iters == 0) throw std::invalid_argument("inpainting_oracle: iters must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("inpainting_oracle: tol must be positive");

  const HaarTransform& w = *instance.transform;
  const DiagonalMask& mask = instance.mask;
  const Vector& b = instance.observed;
  const double l1 = instance.lambda1;
  const double l2 = instance.lambda2;
  const std::size_t n = instance.size();

  const auto pin = [&mask, &b](Vector v) {
    mask.overwrite_observed(v, b);
    return v;
  };
  const auto objective = [&](const Vector& v) {
    return l1 * l1_norm(w.forward(v)) + 0.5 * l2 * dot(v, v);
  };

  // One proximal-point subproblem per outer pass: minimize the objective plus
  // (1/(2 tau))||. - anchor||^2 over the affine feasible set. The quadratic
  // pieces are absorbed into the shrinkage, so the inner splitting alternates
  // the pinning projection with a single soft-threshold in transform space.
  const double tau = 1.0 / l2;
  const double mu = l2 + 1.0 / tau;
  const double r = 1.0 / (1.0 + l1);
  const double denom = 1.0 + r * mu;
  const double rt = r / denom;
  const double shift_scale = r / tau;

  const auto prox_sub = [&](const Vector& v, const Vector& anchor) {
    Vector u(n);
    for (std::size_t j = 0; j < n; ++j) u[j] = (v[j] + shift_scale * anchor[j]) / denom;
    return w.inverse(soft_threshold(w.forward(u), rt * l1));
  };

  OracleResult out;
  Vector x = pin(b);
  out.objective_trace.push_back(objective(x));
  Vector z = x;
  std::size_t total = 0;
  while (total < iters) {
    bool inner_done = false;
    while (total < iters) {
      const Vector p = prox_sub(z, x);
      Vector q(n);
      for (std::size_t j = 0; j < n; ++j) q[j] = 2.0 * p[j] - z[j];
      q = pin(std::move(q));
      double gap = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double d = q[j] - p[j];
        z[j] += d;
        gap += d * d;
      }
      ++total;
      if (std::sqrt(gap) <= tol * std::max(1.0, norm(z))) {
        inner_done = true;
        break;
      }
    }
    if (!inner_done) break;
    Vector next = pin(prox_sub(z, x));
    out.objective_trace.push_back(objective(next));
    const double step = dist(next, x);
    x = std::move(next);
    if (step <= tol * std::max(1.0, norm(x))) {
      out.converged = true;
      break;
    }
  }
  out.iterations = total;
  out.x = std::move(x);
  return out;
}

}  // namespace ipg
