#pragma once

#include <cstdint>
#include <random>

namespace dsclust {

// Independent streams derived from one user seed. Problem generation and
// network initialization must never draw from the same stream.
enum class Stream : std::uint64_t {
  Problem = 0x70726f626c656d00ULL,
  InitNoise = 0x696e69746e6f6973ULL,
  Test = 0x7465737400000000ULL,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// mt19937_64 with hand-rolled real conversions. The standard distributions
/// are implementation-defined, so they are avoided to keep draws identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, Stream tag) {
    return Rng(splitmix64(seed ^ static_cast<std::uint64_t>(tag)));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double open_unit() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dsclust
