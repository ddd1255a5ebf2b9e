#include "ipg/haar.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ipg {

std::size_t max_levels(std::size_t rows, std::size_t cols) {
  std::size_t levels = 0;
  while (rows % 2 == 0 && cols % 2 == 0 && rows > 0 && cols > 0) {
    rows /= 2;
    cols /= 2;
    ++levels;
  }
  return levels;
}

HaarTransform::HaarTransform(std::size_t rows, std::size_t cols, std::size_t levels)
    : rows_(rows), cols_(cols), levels_(levels) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("HaarTransform: dimensions below 2x2");
  if (levels < 1) throw std::invalid_argument("HaarTransform: levels must be at least 1");
  if (levels > max_levels(rows, cols)) {
    throw std::invalid_argument("HaarTransform: 2^levels must divide both dimensions");
  }
}

Vector HaarTransform::forward(const Vector& x) const {
  if (x.size() != size()) throw std::invalid_argument("HaarTransform: length mismatch");
  Vector out(x.size());
  std::vector<double> cur(x.begin(), x.end());
  std::size_t h = rows_;
  std::size_t w = cols_;
  std::size_t tail = x.size();
  for (std::size_t level = 0; level < levels_; ++level) {
    const std::size_t h2 = h / 2;
    const std::size_t w2 = w / 2;
    const std::size_t band = h2 * w2;
    std::vector<double> low(band);
    double* lh = out.data() + (tail - 3 * band);
    double* hl = lh + band;
    double* hh = hl + band;
    for (std::size_t i = 0; i < h2; ++i) {
      for (std::size_t j = 0; j < w2; ++j) {
        const double a = cur[2 * i * w + 2 * j];
        const double b = cur[2 * i * w + 2 * j + 1];
        const double c = cur[(2 * i + 1) * w + 2 * j];
        const double d = cur[(2 * i + 1) * w + 2 * j + 1];
        low[i * w2 + j] = (a + b + c + d) / 2.0;
        lh[i * w2 + j] = (a - b + c - d) / 2.0;
        hl[i * w2 + j] = (a + b - c - d) / 2.0;
        hh[i * w2 + j] = (a - b - c + d) / 2.0;
      }
    }
    tail -= 3 * band;
    cur.swap(low);
    h = h2;
    w = w2;
  }
  std::copy(cur.begin(), cur.end(), out.begin());
  return out;
}

Vector HaarTransform::inverse(const Vector& coeffs) const {
  if (coeffs.size() != size()) throw std::invalid_argument("HaarTransform: length mismatch");
  std::size_t h = rows_;
  std::size_t w = cols_;
  for (std::size_t level = 0; level < levels_; ++level) {
    h /= 2;
    w /= 2;
  }
  std::vector<double> cur(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(h * w));
  std::size_t offset = h * w;
  for (std::size_t level = levels_; level > 0; --level) {
    const std::size_t band = h * w;
    const double* lh = coeffs.data() + offset;
    const double* hl = lh + band;
    const double* hh = hl + band;
    const std::size_t h2 = 2 * h;
    const std::size_t w2 = 2 * w;
    std::vector<double> up(h2 * w2);
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        const double ll = cur[i * w + j];
        const double dlh = lh[i * w + j];
        const double dhl = hl[i * w + j];
        const double dhh = hh[i * w + j];
        up[2 * i * w2 + 2 * j] = (ll + dlh + dhl + dhh) / 2.0;
        up[2 * i * w2 + 2 * j + 1] = (ll - dlh + dhl - dhh) / 2.0;
        up[(2 * i + 1) * w2 + 2 * j] = (ll + dlh - dhl - dhh) / 2.0;
        up[(2 * i + 1) * w2 + 2 * j + 1] = (ll - dlh - dhl + dhh) / 2.0;
      }
    }
    offset += 3 * band;
    cur.swap(up);
    h = h2;
    w = w2;
  }
  return Vector(cur.begin(), cur.end());
}

}  // namespace ipg
