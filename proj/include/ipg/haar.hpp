#pragma once

#include <cstddef>

#include "ipg/prox.hpp"
#include "ipg/vector_ops.hpp"

namespace ipg {

// Largest L such that 2^L divides both dimensions (0 when either is odd).
std::size_t max_levels(std::size_t rows, std::size_t cols);

// Orthonormal 2-D discrete Haar transform: each level filters rows and columns
// with the analysis pair (1,1)/sqrt(2), (1,-1)/sqrt(2) and recurses on the
// low-pass band.
//
// Coefficient layout for an L-level transform, every band row-major:
//   [ LL_L | LH_L HL_L HH_L | LH_{L-1} HL_{L-1} HH_{L-1} | ... | LH_1 HL_1 HH_1 ]
// Level 1 is the finest scale.
class HaarTransform final : public OrthogonalTransform {
 public:
  // Requires levels >= 1 and 2^levels dividing both dimensions.
  HaarTransform(std::size_t rows, std::size_t cols, std::size_t levels);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t levels() const { return levels_; }
  std::size_t size() const override { return rows_ * cols_; }

  Vector forward(const Vector& x) const override;
  Vector inverse(const Vector& coeffs) const override;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t levels_;
};

}  // namespace ipg
