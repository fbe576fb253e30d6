#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace remrec {

// Every random draw comes from a named sub-stream of one run seed, so a
// partial rerun (say, only the shuffling) reproduces the same values.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view name,
                             std::uint64_t index = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::string_view name, std::uint64_t index = 0)
      : engine_(substream_seed(seed, name, index)) {}

  // Uniform in [0, 1), 53 random bits; platform independent.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  // Uniform in the open interval (-bound, bound).
  double symmetric_open(double bound);
  // Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  double gaussian();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace remrec
