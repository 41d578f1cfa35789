#ifndef TENSIONAL_RNG_HPP
#define TENSIONAL_RNG_HPP

#include <cstdint>
#include <random>

namespace tensional {

// Deterministic uniform generator. std::uniform_real_distribution is
// implementation-defined, so the engine maps raw mt19937_64 output to
// [0,1) itself; the resulting stream is identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t bits() { return gen_(); }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return n ? gen_() % n : 0; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace tensional

#endif
