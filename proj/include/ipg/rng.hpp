#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ipg {

/*
 * Deterministic random source. The raw mt19937_64 stream is pinned by the
 * standard, and all derived draws below avoid std::uniform_*_distribution
 * (whose output is implementation-defined), so equal seeds give bit-equal
 * streams on every platform.
 */
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /* Uniform double in [0, 1) with 53 random bits. */
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("uniform: lo must be < hi");
    return lo + uniform() * (hi - lo);
  }

  /* Unbiased integer in [0, bound) via rejection sampling. */
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below: bound must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t r = next_u64();
    while (r > limit) r = next_u64();
    return r % bound;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ipg
