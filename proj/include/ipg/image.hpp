#pragma once

#include <cstddef>
#include <string>

#include "ipg/vector_ops.hpp"

namespace ipg {

// Grayscale image with row-major pixels in [0,1]. The pixel buffer doubles as
// the vectorized form, so vectorize/devectorize are exact by construction.
struct Image {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vector pixels;

  Image() = default;
  Image(std::size_t rows_, std::size_t cols_, double fill = 0.0);
  Image(std::size_t rows_, std::size_t cols_, Vector pixels_);

  std::size_t size() const { return rows * cols; }
  double at(std::size_t i, std::size_t j) const { return pixels[i * cols + j]; }
  double& at(std::size_t i, std::size_t j) { return pixels[i * cols + j]; }
};

// Binary (P5) PGM reader; accepts '#' comments in the header and any maxval
// up to 255, scaling pixels to [0,1].
Image read_pgm(const std::string& path);

// Binary (P5) PGM writer with maxval 255; values are clamped to [0,1] and
// rounded to the nearest level.
void write_pgm(const Image& image, const std::string& path);

}  // namespace ipg
