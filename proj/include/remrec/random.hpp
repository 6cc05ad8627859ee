#pragma once

#include <cstdint>
#include <random>

namespace remrec {

inline constexpr std::uint64_t kDefaultSeed = 12345;

/// Uniform draws built from raw mt19937_64 output, so the sequence is the
/// same on every standard library (distributions are not).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed = kDefaultSeed) : gen_(seed) {}
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double between(double a, double b) { return a + (b - a) * unit(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace remrec
