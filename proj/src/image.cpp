#include "ipg/image.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ipg {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw std::runtime_error("pgm " + path + ": " + why);
}

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  while (ch != EOF && !std::isspace(ch) && ch != '#') {
    token.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  if (ch == '#') in.unget();
  return token;
}

std::size_t parse_count(const std::string& token, const std::string& path, const std::string& field) {
  if (token.empty()) fail(path, "truncated header");
  std::size_t value = 0;
  for (char c : token) {
    if (c < '0' || c > '9') fail(path, "bad " + field + " '" + token + "'");
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

}  // namespace

Image::Image(std::size_t rows_, std::size_t cols_, double fill)
    : rows(rows_), cols(cols_), pixels(rows_ * cols_, fill) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("Image: empty dimensions");
}

Image::Image(std::size_t rows_, std::size_t cols_, Vector pixels_)
    : rows(rows_), cols(cols_), pixels(std::move(pixels_)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("Image: empty dimensions");
  if (pixels.size() != rows * cols) throw std::invalid_argument("Image: pixel count mismatch");
}

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  if (next_token(in) != "P5") fail(path, "not a binary PGM (P5)");
  const std::size_t cols = parse_count(next_token(in), path, "width");
  const std::size_t rows = parse_count(next_token(in), path, "height");
  const std::size_t maxval = parse_count(next_token(in), path, "maxval");
  if (rows == 0 || cols == 0) fail(path, "empty dimensions");
  if (maxval == 0 || maxval > 255) fail(path, "unsupported maxval");

  std::vector<std::uint8_t> raw(rows * cols);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) fail(path, "truncated pixel data");

  Image image(rows, cols);
  const double scale = 1.0 / static_cast<double>(maxval);
  for (std::size_t i = 0; i < raw.size(); ++i) image.pixels[i] = scale * raw[i];
  return image;
}

void write_pgm(const Image& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pgm " + path + ": cannot open for writing");
  out << "P5\n" << image.cols << " " << image.rows << "\n255\n";
  std::vector<std::uint8_t> raw(image.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double v = image.pixels[i];
    v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    raw[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("pgm " + path + ": write failed");
}

}  // namespace ipg
