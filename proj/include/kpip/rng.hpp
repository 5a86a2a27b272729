#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace kpip {

/// Seeded generator shared by all instance generators.
///
/// State update is the 64-bit LCG  s' = s * 6364136223846793005 + 1442695040888963407 (mod 2^64)
/// (Knuth's MMIX constants). A draw returns the high 32 bits of the new state, and
/// `below(n)` reduces that draw modulo n. The initial state is the seed itself.
/// Only these three rules are used, so instances reproduce across implementations.
class Rng {
 public:
  using Engine = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                                 1442695040888963407ULL, 0ULL>;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint32_t next() { return static_cast<std::uint32_t>(engine_() >> 32); }

  /// Uniform-ish draw in [0, n); n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next()) % n; }

  /// Fisher-Yates from the back, using `below`.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  Engine engine_;
};

}  // namespace kpip
