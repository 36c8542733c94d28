#pragma once

// Counter-based random numbers. The k-th draw of stream s under seed S is
//   mix(mix(S + G * (s + 1)) ^ (G * (k + 1)))
// with G = 0x9e3779b97f4a7c15 and mix the splitmix64 finalizer. Every value is
// a pure function of (S, s, k), so trials can run in any order or thread.

#include <cmath>
#include <cstdint>

namespace flatmink {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix64(seed + kGolden * (stream + 1))) {}

  constexpr std::uint64_t next() noexcept { return mix64(key_ ^ (kGolden * (++counter_))); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// exp(uniform(ln lo, ln hi)).
  double log_uniform(double lo, double hi) noexcept {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept { return n == 0 ? 0 : next() % n; }
  bool coin(double p = 0.5) noexcept { return uniform() < p; }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace flatmink
