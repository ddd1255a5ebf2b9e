#pragma once

// Shared helpers and independently written oracles for the test suite. The
// reference implementations here deliberately avoid calling into the library
// code they are used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ipg/dense_matrix.hpp"
#include "ipg/rng.hpp"
#include "ipg/vector_ops.hpp"

namespace support {

using ipg::Vector;

// Brute-force 1-D minimizer: uniform grid with four zoom-in refinements.
inline double grid_min_1d(const std::function<double(double)>& obj, double lo, double hi) {
  double best_x = lo;
  double best = obj(lo);
  double step = 0.0;
  for (int pass = 0; pass < 4; ++pass) {
    const int n = 2000;
    step = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
      const double v = lo + i * step;
      const double val = obj(v);
      if (val < best) {
        best = val;
        best_x = v;
      }
    }
    lo = best_x - step;
    hi = best_x + step;
  }
  return best_x;
}

// Checks the prox defining property by random probing: no perturbation of the
// returned point may improve r*f(u) + 0.5*||u - x||^2 beyond tolerance. For
// convex f, local optimality implies global optimality.
inline bool prox_probe_ok(const std::function<double(const Vector&)>& f, const Vector& x,
                          const Vector& p, double r, ipg::SeededRng& rng, int probes,
                          double tol) {
  const auto obj = [&](const Vector& v) { return r * f(v) + 0.5 * ipg::dist_sq(v, x); };
  const double base = obj(p);
  for (int i = 0; i < probes; ++i) {
    const double scale = std::pow(10.0, -3.0 * rng.uniform());
    Vector q = p;
    for (double& c : q) c += scale * rng.uniform(-1.0, 1.0);
    if (obj(q) < base - tol * (1.0 + std::abs(base))) return false;
  }
  return true;
}

// -------- Reference wavelet transform (separable construction) --------
//
// One level applies the two-tap filters (u+v)/sqrt(2), (u-v)/sqrt(2) to the
// rows and then to the columns of the current approximation. Flattening is
// recursive: coarsest approximation first, then detail bands LH, HL, HH from
// the coarsest level down to the finest, each band row-major.

struct Bands {
  std::vector<std::vector<double>> ll, lh, hl, hh;
};

inline Bands split_once(const std::vector<std::vector<double>>& img) {
  const std::size_t rows = img.size();
  const std::size_t cols = img[0].size();
  const double s = 1.0 / std::sqrt(2.0);

  std::vector<std::vector<double>> low(rows), high(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    low[i].resize(cols / 2);
    high[i].resize(cols / 2);
    for (std::size_t j = 0; j < cols / 2; ++j) {
      low[i][j] = s * (img[i][2 * j] + img[i][2 * j + 1]);
      high[i][j] = s * (img[i][2 * j] - img[i][2 * j + 1]);
    }
  }

  Bands out;
  out.ll.resize(rows / 2);
  out.lh.resize(rows / 2);
  out.hl.resize(rows / 2);
  out.hh.resize(rows / 2);
  for (std::size_t i = 0; i < rows / 2; ++i) {
    out.ll[i].resize(cols / 2);
    out.lh[i].resize(cols / 2);
    out.hl[i].resize(cols / 2);
    out.hh[i].resize(cols / 2);
    for (std::size_t j = 0; j < cols / 2; ++j) {
      out.ll[i][j] = s * (low[2 * i][j] + low[2 * i + 1][j]);
      out.hl[i][j] = s * (low[2 * i][j] - low[2 * i + 1][j]);
      out.lh[i][j] = s * (high[2 * i][j] + high[2 * i + 1][j]);
      out.hh[i][j] = s * (high[2 * i][j] - high[2 * i + 1][j]);
    }
  }
  return out;
}

inline void append_band(const std::vector<std::vector<double>>& band, Vector& out) {
  for (const auto& row : band)
    for (double v : row) out.push_back(v);
}

inline Vector flatten_levels(const std::vector<std::vector<double>>& img, std::size_t levels) {
  if (levels == 0) {
    Vector out;
    append_band(img, out);
    return out;
  }
  const Bands bands = split_once(img);
  Vector out = flatten_levels(bands.ll, levels - 1);
  append_band(bands.lh, out);
  append_band(bands.hl, out);
  append_band(bands.hh, out);
  return out;
}

inline Vector reference_haar(const Vector& pixels, std::size_t rows, std::size_t cols,
                             std::size_t levels) {
  if (pixels.size() != rows * cols) throw std::invalid_argument("reference_haar: size mismatch");
  std::vector<std::vector<double>> img(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) img[i][j] = pixels[i * cols + j];
  return flatten_levels(img, levels);
}

// Dense matrix of the reference transform, assembled column by column.
inline ipg::DenseMatrix reference_haar_matrix(std::size_t rows, std::size_t cols,
                                              std::size_t levels) {
  const std::size_t n = rows * cols;
  ipg::DenseMatrix mat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector basis(n, 0.0);
    basis[j] = 1.0;
    const Vector image = reference_haar(basis, rows, cols, levels);
    for (std::size_t i = 0; i < n; ++i) mat.at(i, j) = image[i];
  }
  return mat;
}

// -------- Reference solver step (plain transcription) --------
//
// One outer update written as three explicit formulas, independent of the
// library's solver internals.

struct ReferenceBall {
  Vector center;
  double radius = 1.0;
};

struct ReferenceTerm {
  ReferenceBall ball;              // f_i = distance to this ball
  double smooth_coeff = 0.0;       // h_i = smooth_coeff/2 * ||x||^2
};

inline Vector reference_ball_prox(const Vector& x, const ReferenceBall& ball, double r) {
  const double to_center = ipg::dist(x, ball.center);
  Vector proj = x;
  if (to_center > ball.radius) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      proj[i] = ball.center[i] + (ball.radius / to_center) * (x[i] - ball.center[i]);
    }
  }
  const double d = ipg::dist(x, proj);
  if (d <= r) return proj;
  Vector out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += (r / d) * (proj[i] - x[i]);
  return out;
}

inline Vector reference_step(const Vector& x, int k, const std::vector<ReferenceTerm>& terms,
                             const std::function<Vector(const Vector&)>& grad_g, double a,
                             double b) {
  const double alpha = a / static_cast<double>(k);
  const double beta = b * static_cast<double>(k);

  const Vector gg = grad_g(x);
  Vector phi = x;
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] -= alpha * beta * gg[i];

  for (const ReferenceTerm& term : terms) {
    Vector mid = phi;
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] -= alpha * term.smooth_coeff * phi[i];
    phi = reference_ball_prox(mid, term.ball, alpha);
  }
  return phi;
}

inline Vector random_vector(ipg::SeededRng& rng, std::size_t n, double lo, double hi) {
  Vector v(n);
  for (double& c : v) c = rng.uniform(lo, hi);
  return v;
}

}  // namespace support
