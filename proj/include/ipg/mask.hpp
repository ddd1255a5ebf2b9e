#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ipg/vector_ops.hpp"

namespace ipg {

// Diagonal 0/1 observation operator: keeps observed coordinates, zeroes the rest.
// Self-adjoint and idempotent, so it is its own transpose and its own Gram matrix.
class DiagonalMask {
 public:
  explicit DiagonalMask(std::vector<bool> keep) : keep_(std::move(keep)) {
    if (keep_.empty()) throw std::invalid_argument("DiagonalMask: empty mask");
  }

  // Builds a mask of the given size with the listed coordinates hidden.
  static DiagonalMask from_masked_indices(std::size_t size, const std::vector<std::size_t>& masked) {
    std::vector<bool> keep(size, true);
    for (std::size_t i : masked) {
      if (i >= size) throw std::out_of_range("DiagonalMask: masked index out of range");
      keep[i] = false;
    }
    return DiagonalMask(std::move(keep));
  }

  std::size_t size() const { return keep_.size(); }
  bool observed(std::size_t i) const { return keep_[i]; }

  std::size_t observed_count() const {
    std::size_t n = 0;
    for (bool k : keep_) n += k ? 1 : 0;
    return n;
  }

  Vector apply(const Vector& x) const {
    require_size(x);
    Vector y(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (keep_[i]) y[i] = x[i];
    }
    return y;
  }

  void apply_in_place(Vector& x) const {
    require_size(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!keep_[i]) x[i] = 0.0;
    }
  }

  // Overwrites the observed coordinates of x with those of data; masked ones stay.
  void overwrite_observed(Vector& x, const Vector& data) const {
    require_size(x);
    require_size(data);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (keep_[i]) x[i] = data[i];
    }
  }

 private:
  void require_size(const Vector& x) const {
    if (x.size() != keep_.size()) throw std::invalid_argument("DiagonalMask: size mismatch");
  }

  std::vector<bool> keep_;
};

}  // namespace ipg
