#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "crnbkk/rational.hpp"

namespace crnbkk {

// splitmix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded, splittable generator. The bit stream of mt19937_64 is fixed by the
/// standard; bounded draws use our own rejection sampler so results do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  /// Child generator for a named purpose; independent of draws made so far.
  Rng split(std::string_view tag) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) h = (h ^ c) * 0x100000001b3ULL;
    return Rng(mix64(seed_ ^ mix64(h)));
  }
  Rng split(std::uint64_t index) const { return Rng(mix64(seed_ + mix64(index + 1))); }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  /// Positive rational p/q with 1 <= p, q <= height.
  Rational positive_rational(std::int64_t height = 1000) {
    Rational r(static_cast<long>(uniform(1, height)), static_cast<long>(uniform(1, height)));
    r.canonicalize();
    return r;
  }

  /// Nonzero integer in [-bound, bound].
  std::int64_t nonzero(std::int64_t bound) {
    std::int64_t v = uniform(-bound, bound - 1);
    return v >= 0 ? v + 1 : v;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace crnbkk
