#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ipg/baselines.hpp"
#include "ipg/dense_matrix.hpp"
#include "ipg/haar.hpp"
#include "ipg/image.hpp"
#include "ipg/mask.hpp"
#include "ipg/prox.hpp"
#include "ipg/solver.hpp"

namespace ipg {

// Wavelet-regularized inpainting:
//   minimize lambda1 ||W x||_1 + (lambda2/2) ||x||^2
//   subject to x in argmin (1/2) ||B x - b||^2
// with B the diagonal observation mask and b = B * clean. The damaged image
// (= b) doubles as the starting point.
struct InpaintingInstance {
  std::optional<Image> clean;
  DiagonalMask mask;
  Vector observed;  // b, zero at masked pixels
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::shared_ptr<const HaarTransform> transform;
  double missing_fraction = 0.0;
  std::uint64_t seed = 0;

  std::size_t rows() const { return transform->rows(); }
  std::size_t cols() const { return transform->cols(); }
  std::size_t size() const { return observed.size(); }

  Image damaged() const { return Image(rows(), cols(), observed); }

  double regularizer(const Vector& x) const;  // A = lambda1 ||Wx||_1 + (lambda2/2)||x||^2
  double data_fit(const Vector& x) const;     // B = (1/2)||Bx - b||^2

  // Bilevel form: one term (prox of lambda1 ||W.||_1, gradient lambda2 * x),
  // penalty (1/2)||Bx - b||^2 with L_g = 1 and quadratic-growth constant 1.
  ProblemInstance problem() const;

  // Unconstrained composite form for the baselines: f = lambda1 ||W.||_1,
  // h = (lambda2/2)||.||^2 + (1/2)||Bx - b||^2, L_h = lambda2 + 1.
  CompositeProblem composite() const;

  // key=value lines sufficient to regenerate the instance from the same clean
  // image: dimensions, levels, missing_fraction, lambda1, lambda2, seed.
  std::string manifest() const;
};

// Samples floor(missing_fraction * n) distinct pixels to hide via a seeded
// shuffle, then builds the instance from the clean image. levels = 0 picks
// the maximal decomposition depth; an explicit levels must divide both
// dimensions. The degenerate masks (nothing or everything hidden) are
// rejected.
InpaintingInstance build_inpainting(const Image& clean, double missing_fraction,
                                    double lambda1, double lambda2, std::uint64_t seed,
                                    std::size_t levels = 0);

// Generalized Heron problem over a least-squares set:
//   minimize sum_i dist(x, C_i) + (1/2)||x||^2
//   subject to x in argmin (1/2)||A x - b||^2
// with m balls of radius 0.2, A of size m^2 x n, all entries and centers
// drawn uniformly from (-n^2, n^2), b = 0 (consistent) or uniform in (0,1)
// (inconsistent). Generation order: centers, A, b, start.
struct HeronInstance {
  std::size_t m = 0;
  std::size_t n = 0;
  bool consistent = true;
  std::uint64_t seed = 0;
  std::vector<BallSet> balls;
  DenseMatrix matrix;
  Vector rhs;
  Vector start;
  double op_norm = 0.0;                 // ||A|| by power iteration
  std::optional<Vector> least_squares;  // omitted when A^T A is ill-conditioned
  std::optional<double> growth;         // smallest positive eigenvalue of A^T A

  double penalty_value(const Vector& x) const;  // (1/2)||Ax - b||^2

  // Terms use prox_dist_ball and grad h_i = x/m with L_i = 1/m; the penalty
  // carries L_g = ||A||^2, min g evaluated at the least-squares point, the
  // growth constant, and the least-squares point as the diagnostics oracle.
  ProblemInstance problem() const;

  // beta_k = b*k/||A||^2 expressed through the schedule's plain b, so the
  // (H3) check sees the effective product a*b/||A||^2 against 2/L_g.
  StepSchedule schedule(double a, double b) const;

  std::string manifest() const;
};

HeronInstance build_heron(std::size_t m, std::size_t n, bool consistent, std::uint64_t seed);

// Improvement in signal-to-noise ratio, 10*log10(||x - b||^2 / ||x - x_k||^2)
// in dB. An undamaged reference returns 0 by convention (even alongside a
// perfect reconstruction); a perfect reconstruction of a damaged reference
// returns +infinity.
double isnr(const Vector& clean, const Vector& noisy, const Vector& current);
double isnr(const Image& clean, const Image& noisy, const Image& current);

// Ground truth for small inpainting instances (at most 64 pixels), solved as
//   minimize lambda1 ||W x||_1 + (lambda2/2)||x||^2  over  {x : Bx = b}
// by an outer proximal-point loop whose subproblems alternate the exact
// coordinatewise projection onto the affine set with the prox of the
// objective (warm-started splitting, run until the paired points agree to
// tol). The outer objective trace is non-increasing by construction.
struct OracleResult {
  Vector x;
  std::size_t iterations = 0;           // total inner iterations
  std::vector<double> objective_trace;  // objective at the feasible outer iterates
  bool converged = false;
};

OracleResult inpainting_oracle(const InpaintingInstance& instance,
                               std::size_t iters = 1000000, double tol = 1e-12);

}  // namespace ipg
