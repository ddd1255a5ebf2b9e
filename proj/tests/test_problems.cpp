#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>

#include "ipg/problems.hpp"
#include "ipg/rng.hpp"
#include "ipg/vector_ops.hpp"

#include "support.hpp"

using ipg::Vector;

namespace {

ipg::Image random_image(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  ipg::SeededRng rng(seed);
  ipg::Image img(rows, cols);
  for (double& p : img.pixels) p = rng.uniform(0.0, 1.0);
  return img;
}

}  // namespace

TEST_CASE("inpainting builder masks the expected pixel count") {
  const ipg::Image clean = random_image(4, 4, 1);
  const ipg::InpaintingInstance inst = ipg::build_inpainting(clean, 0.6, 0.1, 1e-4, 7);

  CHECK(inst.size() == 16);
  CHECK(inst.mask.observed_count() == 16 - 9);  // floor(0.6 * 16) hidden
  CHECK(inst.missing_fraction == 0.6);
  CHECK(inst.seed == 7);

  // Observed pixels carry the clean values; hidden pixels are zero.
  for (std::size_t i = 0; i < 16; ++i) {
    if (inst.mask.observed(i)) {
      CHECK(inst.observed[i] == clean.pixels[i]);
    } else {
      CHECK(inst.observed[i] == 0.0);
    }
  }
}

TEST_CASE("inpainting builder is deterministic and seed-sensitive") {
  const ipg::Image clean = random_image(8, 8, 2);
  const ipg::InpaintingInstance a = ipg::build_inpainting(clean, 0.5, 0.1, 1e-4, 3);
  const ipg::InpaintingInstance b = ipg::build_inpainting(clean, 0.5, 0.1, 1e-4, 3);
  const ipg::InpaintingInstance c = ipg::build_inpainting(clean, 0.5, 0.1, 1e-4, 4);

  CHECK(a.observed == b.observed);
  bool same_mask = true;
  for (std::size_t i = 0; i < 64; ++i) {
    same_mask = same_mask && (a.mask.observed(i) == c.mask.observed(i));
  }
  CHECK(!same_mask);
}

TEST_CASE("inpainting builder validation") {
  const ipg::Image clean = random_image(4, 4, 3);
  CHECK_THROWS_AS(ipg::build_inpainting(clean, 0.0, 0.1, 1e-4, 1), std::invalid_argument);
  CHECK_THROWS_AS(ipg::build_inpainting(clean, 1.0, 0.1, 1e-4, 1), std::invalid_argument);
  CHECK_THROWS_AS(ipg::build_inpainting(clean, 0.01, 0.1, 1e-4, 1),
                  std::invalid_argument);  // floor(0.01*16) = 0 hidden
  CHECK_THROWS_AS(ipg::build_inpainting(clean, 0.5, 0.0, 1e-4, 1), std::invalid_argument);
  CHECK_THROWS_AS(ipg::build_inpainting(clean, 0.5, 0.1, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ipg::build_inpainting(clean, 0.5, 0.1, 1e-4, 1, 9), std::invalid_argument);

  ipg::Image bad = clean;
  bad.pixels[0] = 1.5;
  CHECK_THROWS_AS(ipg::build_inpainting(bad, 0.5, 0.1, 1e-4, 1), std::invalid_argument);

  const ipg::Image odd = random_image(3, 4, 4);
  CHECK_THROWS_AS(ipg::build_inpainting(odd, 0.5, 0.1, 1e-4, 1), std::invalid_argument);
}

TEST_CASE("inpainting objective split and penalty geometry") {
  const ipg::Image clean = random_image(8, 8, 5);
  const ipg::InpaintingInstance inst = ipg::build_inpainting(clean, 0.4, 0.3, 0.01, 11);
  const ipg::ProblemInstance problem = inst.problem();

  CHECK(problem.terms.size() == 1);
  CHECK(problem.penalty.grad_lipschitz() == 1.0);
  CHECK(problem.penalty.min_value() == 0.0);
  REQUIRE(problem.penalty.growth_constant().has_value());
  CHECK(*problem.penalty.growth_constant() == 1.0);
  CHECK(problem.start == inst.observed);

  // Penalty vanishes at the damaged image and g = (1/2) dist^2 to argmin g.
  CHECK(problem.penalty.value(inst.observed) == 0.0);

  ipg::SeededRng rng(50);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = support::random_vector(rng, 64, -1.0, 2.0);

    double dist_to_set_sq = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
      if (inst.mask.observed(i)) {
        const double d = x[i] - inst.observed[i];
        dist_to_set_sq += d * d;
      }
    }
    CHECK(problem.penalty.value(x) ==
          doctest::Approx(0.5 * dist_to_set_sq).epsilon(1e-12));
    CHECK(inst.data_fit(x) == doctest::Approx(problem.penalty.value(x)).epsilon(1e-12));

    // Regularizer value agrees with a direct evaluation.
    const ipg::HaarTransform& w = *inst.transform;
    double l1 = 0.0;
    for (double cwt : w.forward(x)) l1 += std::abs(cwt);
    CHECK(inst.regularizer(x) ==
          doctest::Approx(0.3 * l1 + 0.5 * 0.01 * ipg::dot(x, x)).epsilon(1e-12));

    // Objective evaluators split consistently across both formulations.
    const ipg::CompositeProblem comp = inst.composite();
    CHECK(comp.value_reg(x) == doctest::Approx(inst.regularizer(x)).epsilon(1e-12));
    CHECK(comp.value_data(x) == doctest::Approx(inst.data_fit(x)).epsilon(1e-12));
    CHECK(comp.value_f(x) + comp.value_h(x) ==
          doctest::Approx(comp.value_reg(x) + comp.value_data(x)).epsilon(1e-12));
  }
}

TEST_CASE("inpainting gradients match finite differences and lipschitz bounds") {
  const ipg::Image clean = random_image(4, 4, 6);
  const ipg::InpaintingInstance inst = ipg::build_inpainting(clean, 0.5, 0.2, 0.05, 13);
  const ipg::ProblemInstance problem = inst.problem();
  const ipg::CompositeProblem comp = inst.composite();

  ipg::SeededRng rng(60);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = support::random_vector(rng, 16, -1.0, 1.0);
    const Vector y = support::random_vector(rng, 16, -1.0, 1.0);

    // Penalty gradient is 1-Lipschitz; composite gradient (lambda2+1)-Lipschitz.
    const double dxy = ipg::dist(x, y);
    CHECK(ipg::dist(problem.penalty.grad(x), problem.penalty.grad(y)) <= dxy + 1e-12);
    CHECK(ipg::dist(comp.grad_h(x), comp.grad_h(y)) <=
          comp.smooth_lipschitz * dxy + 1e-12);

    // Directional derivative of the penalty by central differences.
    Vector dir = support::random_vector(rng, 16, -1.0, 1.0);
    const double scale = 1e-6 / ipg::norm(dir);
    Vector xp = x, xm = x;
    ipg::axpy(scale, dir, xp);
    ipg::axpy(-scale, dir, xm);
    const double fd = (problem.penalty.value(xp) - problem.penalty.value(xm)) / (2.0 * scale);
    CHECK(std::abs(fd - ipg::dot(problem.penalty.grad(x), dir)) < 1e-5 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("inpainting term prox minimizes its objective") {
  const ipg::Image clean = random_image(4, 4, 8);
  const ipg::InpaintingInstance inst = ipg::build_inpainting(clean, 0.5, 0.7, 0.05, 17);
  const ipg::ProblemInstance problem = inst.problem();

  const auto f = [&inst](const Vector& v) {
    double l1 = 0.0;
    for (double c : inst.transform->forward(v)) l1 += std::abs(c);
    return inst.lambda1 * l1;
  };

  ipg::SeededRng rng(70);
  ipg::SeededRng probe_rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = support::random_vector(rng, 16, -1.0, 1.0);
    const double r = rng.uniform(0.05, 1.5);
    const Vector p = problem.terms[0].prox_f(x, r);
    CHECK(support::prox_probe_ok(f, x, p, r, probe_rng, 300, 1e-8));
  }
}

TEST_CASE("isnr conventions and arithmetic") {
  const Vector clean = {1.0, 0.0, 1.0, 0.0};
  const Vector noisy = {0.0, 0.0, 0.0, 0.0};

  // Reconstruction error exactly half the damage: 10*log10(4) dB.
  Vector half = clean;
  half[0] = 0.5;
  half[2] = 0.5;
  // ||clean - noisy||^2 = 2, ||clean - half||^2 = 0.5, ratio 4.
  CHECK(ipg::isnr(clean, noisy, half) == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));

  // No damage: 0 by convention.
  CHECK(ipg::isnr(clean, clean, half) == 0.0);
  CHECK(ipg::isnr(clean, clean, clean) == 0.0);

  // Perfect reconstruction of a damaged signal: +infinity.
  CHECK(std::isinf(ipg::isnr(clean, noisy, clean)));
  CHECK(ipg::isnr(clean, noisy, clean) > 0.0);

  // Image overload delegates to the flat version.
  const ipg::Image ci(2, 2, clean), ni(2, 2, noisy), hi(2, 2, half);
  CHECK(ipg::isnr(ci, ni, hi) == ipg::isnr(clean, noisy, half));

  CHECK(ipg::isnr(clean, noisy, half) ==
        doctest::Approx(10.0 * std::log10(ipg::dist_sq(clean, noisy) /
                                          ipg::dist_sq(clean, half)))
            .epsilon(1e-14));
}

TEST_CASE("heron builder geometry and determinism") {
  const ipg::HeronInstance inst = ipg::build_heron(5, 2, true, 42);

  CHECK(inst.m == 5);
  CHECK(inst.n == 2);
  CHECK(inst.consistent);
  CHECK(inst.balls.size() == 5);
  CHECK(inst.matrix.rows == 25);
  CHECK(inst.matrix.cols == 2);
  CHECK(inst.rhs == Vector(25, 0.0));
  CHECK(inst.start.size() == 2);

  for (const ipg::BallSet& ball : inst.balls) {
    CHECK(ball.radius == 0.2);
    for (double c : ball.center) {
      CHECK(c >= -4.0);
      CHECK(c < 4.0);
    }
  }
  for (double v : inst.start) {
    CHECK(v >= -4.0);
    CHECK(v < 4.0);
  }

  // The stored operator norm matches an independent recomputation.
  CHECK(inst.op_norm == doctest::Approx(ipg::operator_norm(inst.matrix)).epsilon(1e-9));

  const ipg::HeronInstance again = ipg::build_heron(5, 2, true, 42);
  CHECK(again.start == inst.start);
  CHECK(again.balls[3].center == inst.balls[3].center);

  const ipg::HeronInstance other = ipg::build_heron(5, 2, true, 43);
  CHECK(other.start != inst.start);
}

TEST_CASE("heron inconsistent right-hand side and least-squares oracle") {
  const ipg::HeronInstance inst = ipg::build_heron(5, 2, false, 13);
  CHECK(!inst.consistent);
  for (double v : inst.rhs) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }

  REQUIRE(inst.least_squares.has_value());
  // Normal equations hold at the oracle point.
  Vector residual = inst.matrix.apply(*inst.least_squares);
  ipg::axpy(-1.0, inst.rhs, residual);
  CHECK(ipg::norm(inst.matrix.apply_transpose(residual)) < 1e-8);

  // Growth constant is the smallest positive gram eigenvalue.
  REQUIRE(inst.growth.has_value());
  CHECK(*inst.growth ==
        doctest::Approx(ipg::smallest_positive_eigenvalue(inst.matrix.gram())).epsilon(1e-9));

  // Penalty is calibrated so the reported gap vanishes at the oracle point.
  const ipg::ProblemInstance problem = inst.problem();
  CHECK(problem.penalty.value(*inst.least_squares) - problem.penalty.min_value() ==
        doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(problem.oracle.has_value());
  CHECK(*problem.oracle == *inst.least_squares);
}

TEST_CASE("heron bilevel structure") {
  const ipg::HeronInstance inst = ipg::build_heron(4, 3, true, 21);
  const ipg::ProblemInstance problem = inst.problem();
  REQUIRE(problem.terms.size() == 4);

  ipg::SeededRng rng(80);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = support::random_vector(rng, 3, -9.0, 9.0);

    // Smooth parts sum to the identity map: sum_i x/m = x.
    Vector sum(3, 0.0);
    for (const auto& term : problem.terms) ipg::axpy(1.0, term.grad_h(x), sum);
    CHECK(ipg::dist(sum, x) < 1e-14);

    // Each term's prox is the distance prox of its ball.
    for (std::size_t i = 0; i < 4; ++i) {
      const Vector via_term = problem.terms[i].prox_f(x, 0.7);
      const Vector direct = ipg::prox_dist_ball(x, 0.7, inst.balls[i]);
      CHECK(ipg::dist(via_term, direct) == 0.0);
    }

    CHECK(problem.penalty.value(x) == doctest::Approx(inst.penalty_value(x)).epsilon(1e-12));
  }

  CHECK(problem.penalty.grad_lipschitz() ==
        doctest::Approx(inst.op_norm * inst.op_norm).epsilon(1e-9));

  // Effective (H3) product is a*b regardless of the operator norm.
  const ipg::ValidationReport accept =
      ipg::validate_hypotheses(inst.schedule(1.0, 1.9), problem.penalty);
  CHECK(accept.ok());
  const double expected_margin = (2.0 - 1.9) / (inst.op_norm * inst.op_norm);
  CHECK(accept.find("H3").margin == doctest::Approx(expected_margin).epsilon(1e-6));
  CHECK(!ipg::validate_hypotheses(inst.schedule(1.1, 1.9), problem.penalty).ok());
}

TEST_CASE("heron manifest and inpainting manifest carry the generation keys") {
  const ipg::HeronInstance heron = ipg::build_heron(3, 2, false, 5);
  const std::string hm = heron.manifest();
  CHECK(hm.find("m=3") != std::string::npos);
  CHECK(hm.find("n=2") != std::string::npos);
  CHECK(hm.find("seed=5") != std::string::npos);

  const ipg::Image clean = random_image(4, 4, 9);
  const ipg::InpaintingInstance inp = ipg::build_inpainting(clean, 0.5, 0.1, 1e-4, 31);
  const std::string im = inp.manifest();
  CHECK(im.find("rows=4") != std::string::npos);
  CHECK(im.find("seed=31") != std::string::npos);
  CHECK(im.find("lambda1=") != std::string::npos);
}

TEST_CASE("oracle returns the observed image when nothing is hidden") {
  // The builder rejects degenerate masks, so assemble the instance directly.
  const ipg::Image clean = random_image(4, 4, 10);
  ipg::InpaintingInstance inst{
      clean,
      ipg::DiagonalMask(std::vector<bool>(16, true)),
      clean.pixels,
      0.1,
      1e-4,
      std::make_shared<const ipg::HaarTransform>(4, 4, 2),
      0.0,
      0};

  const ipg::OracleResult result = ipg::inpainting_oracle(inst);
  CHECK(result.converged);
  CHECK(ipg::dist(result.x, clean.pixels) < 1e-12);
}

TEST_CASE("oracle output is feasible, stable, and objective-monotone") {
  const ipg::Image clean = random_image(8, 8, 11);
  const ipg::InpaintingInstance inst = ipg::build_inpainting(clean, 0.6, 0.1, 1e-4, 19);

  const ipg::OracleResult result = ipg::inpainting_oracle(inst, 1000000, 1e-11);
  CHECK(result.converged);
  CHECK(result.iterations >= 1);

  // Feasibility: observed pixels match exactly.
  for (std::size_t i = 0; i < 64; ++i) {
    if (inst.mask.observed(i)) {
      CHECK(result.x[i] == inst.observed[i]);
    }
  }

  // The outer objective trace never increases.
  REQUIRE(result.objective_trace.size() >= 2);
  for (std::size_t i = 1; i < result.objective_trace.size(); ++i) {
    CHECK(result.objective_trace[i] <= result.objective_trace[i - 1] + 1e-10);
  }

  // No feasible perturbation improves the objective.
  ipg::SeededRng rng(90);
  const double base = inst.regularizer(result.x);
  for (int probe = 0; probe < 200; ++probe) {
    Vector q = result.x;
    const double scale = std::pow(10.0, -3.0 * rng.uniform());
    for (std::size_t i = 0; i < 64; ++i) {
      if (!inst.mask.observed(i)) q[i] += scale * rng.uniform(-1.0, 1.0);
    }
    CHECK(inst.regularizer(q) >= base - 1e-8 * (1.0 + std::abs(base)));
  }

  CHECK(ipg::dist(ipg::inpainting_oracle(inst, 1000000, 1e-11).x, result.x) == 0.0);
}

TEST_CASE("oracle matches the closed form in the sparse limit") {
  // One observed pixel and a dominant l1 weight: the optimum keeps the
  // observed value v, sets the other three pixels of its 2x2 block to -v/3,
  // and zeroes the rest, making exactly three level-1 details active.
  const std::size_t rows = 4, cols = 4;
  std::vector<bool> keep(16, false);
  const std::size_t p = 5;  // row 1, col 1
  keep[p] = true;
  const double v = 0.8;
  Vector observed(16, 0.0);
  observed[p] = v;

  ipg::InpaintingInstance inst{
      std::nullopt,
      ipg::DiagonalMask(keep),
      observed,
      1e6,
      1e-4,
      std::make_shared<const ipg::HaarTransform>(rows, cols, 2),
      15.0 / 16.0,
      0};

  const ipg::OracleResult result = ipg::inpainting_oracle(inst, 1000000, 1e-12);
  CHECK(result.converged);

  Vector expect(16, 0.0);
  expect[5] = v;
  expect[4] = -v / 3.0;
  expect[1] = -v / 3.0;
  expect[0] = -v / 3.0;
  CHECK(ipg::dist(result.x, expect) < 1e-6);

  // ||W x*||_1 = 2v and only the three level-1 details of that block are set.
  const Vector coeffs = inst.transform->forward(result.x);
  double l1 = 0.0;
  for (double c : coeffs) l1 += std::abs(c);
  CHECK(l1 == doctest::Approx(2.0 * v).epsilon(1e-5));
}

TEST_CASE("oracle rejects oversized instances") {
  const ipg::Image clean = random_image(16, 16, 12);
  const ipg::InpaintingInstance inst = ipg::build_inpainting(clean, 0.5, 0.1, 1e-4, 1);
  CHECK_THROWS_AS(ipg::inpainting_oracle(inst), std::invalid_argument);
}
