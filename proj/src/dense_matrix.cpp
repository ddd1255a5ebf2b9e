#include "ipg/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ipg/errors.hpp"

namespace ipg {

Vector DenseMatrix::apply(const Vector& x) const {
  if (x.size() != cols) throw std::invalid_argument("apply: dimension mismatch");
  Vector out(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = data.data() + i * cols;
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
    out[i] = s;
  }
  return out;
}

Vector DenseMatrix::apply_transpose(const Vector& y) const {
  if (y.size() != rows) throw std::invalid_argument("apply_transpose: dimension mismatch");
  Vector out(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = data.data() + i * cols;
    const double yi = y[i];
    for (std::size_t j = 0; j < cols; ++j) out[j] += row[j] * yi;
  }
  return out;
}

DenseMatrix DenseMatrix::gram() const {
  DenseMatrix g(cols, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = data.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t k = j; k < cols; ++k) g.at(j, k) += row[j] * row[k];
    }
  }
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t k = 0; k < j; ++k) g.at(j, k) = g.at(k, j);
  return g;
}

double operator_norm(const DenseMatrix& a, double tol, int max_iter) {
  if (a.rows == 0 || a.cols == 0) throw std::invalid_argument("operator_norm: empty matrix");
  const bool zero = std::all_of(a.data.begin(), a.data.end(), [](double v) { return v == 0.0; });
  if (zero) throw std::invalid_argument("operator_norm: zero matrix");

  const std::size_t n = a.cols;
  Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));

  /* The all-ones start can land in the null space of A; fall back to basis vectors. */
  {
    Vector av = a.apply(v);
    std::size_t probe = 0;
    while (norm(av) == 0.0 && probe < n) {
      std::fill(v.begin(), v.end(), 0.0);
      v[probe++] = 1.0;
      av = a.apply(v);
    }
    if (norm(av) == 0.0) throw std::invalid_argument("operator_norm: zero matrix");
  }

  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = a.apply_transpose(a.apply(v));  // A^T A v
    const double lambda = dot(v, w);           // Rayleigh quotient, v normalized
    const double next = std::sqrt(std::max(lambda, 0.0));
    const double wn = norm(w);
    if (wn == 0.0) return 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = w[j] / wn;
    if (it > 0 && std::abs(next - sigma) <= tol * std::max(next, 1e-300)) return next;
    sigma = next;
  }
  throw NotConvergedError(sigma, max_iter,
                          "operator_norm: power iteration did not reach tolerance");
}

SymmetricEigen symmetric_eigen(const DenseMatrix& g) {
  if (g.rows != g.cols) throw std::invalid_argument("symmetric_eigen: matrix not square");
  const std::size_t n = g.rows;
  DenseMatrix a = g;
  DenseMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

  auto off_diag_sq = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a.at(i, j) * a.at(i, j);
    return s;
  };
  double scale = 0.0;
  for (double x : g.data) scale = std::max(scale, std::abs(x));
  const double stop = (scale * scale) * 1e-28 * static_cast<double>(n * n) + 1e-300;

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps && off_diag_sq() > stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v.at(k, p), vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a.at(i, i) < a.at(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a.at(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors.at(i, j) = v.at(i, order[j]);
  }
  return out;
}

double smallest_positive_eigenvalue(const DenseMatrix& g) {
  const SymmetricEigen eig = symmetric_eigen(g);
  const double lambda_max = eig.values.empty() ? 0.0 : eig.values.back();
  if (lambda_max <= 0.0)
    throw std::invalid_argument("smallest_positive_eigenvalue: no positive eigenvalue");
  const double cut = 1e-10 * lambda_max;
  for (double lambda : eig.values)
    if (lambda > cut) return lambda;
  throw std::invalid_argument("smallest_positive_eigenvalue: no positive eigenvalue");
}

Vector solve_least_squares(const DenseMatrix& a, const Vector& b) {
  if (b.size() != a.rows) throw std::invalid_argument("solve_least_squares: dimension mismatch");
  const SymmetricEigen eig = symmetric_eigen(a.gram());
  const double lambda_max = eig.values.empty() ? 0.0 : eig.values.back();
  const double cut = lambda_max * 1e-14;
  const Vector atb = a.apply_transpose(b);
  const std::size_t n = a.cols;
  Vector coeff(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (eig.values[j] <= cut) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += eig.vectors.at(i, j) * atb[i];
    coeff[j] = s / eig.values[j];
  }
  Vector x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += eig.vectors.at(i, j) * coeff[j];
    x[i] = s;
  }
  return x;
}

double gram_condition(const DenseMatrix& a) {
  const SymmetricEigen eig = symmetric_eigen(a.gram());
  const double lo = eig.values.front();
  const double hi = eig.values.back();
  if (lo <= 0.0 || hi <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace ipg
