#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipg {

using Vector = std::vector<double>;

inline double dot(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm(const Vector& x) { return std::sqrt(dot(x, x)); }

inline double dist(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dist: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double dist_sq(const Vector& x, const Vector& y) {
  const double d = dist(x, y);
  return d * d;
}

/* y += a * x */
inline void axpy(double a, const Vector& x, Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline Vector scaled(const Vector& x, double a) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i];
  return out;
}

constexpr std::size_t kAllFinite = std::numeric_limits<std::size_t>::max();

/* Index of the first NaN/Inf entry, or kAllFinite if none. */
inline std::size_t first_nonfinite(const Vector& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i])) return i;
  return kAllFinite;
}

inline void check_finite(const Vector& x, const std::string& what) {
  const std::size_t i = first_nonfinite(x);
  if (i != kAllFinite)
    throw std::invalid_argument(what + ": non-finite entry at index " + std::to_string(i));
}

}  // namespace ipg
