#pragma once

#include <cstdint>
#include <random>

namespace hkcoh {

// Seeded generator for the randomized cross-checks. Integers are drawn by
// plain modular reduction of mt19937_64 output so that sequences do not
// depend on the standard library's distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform-ish integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hkcoh
