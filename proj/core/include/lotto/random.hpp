#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace lotto {

// Seeded generator whose draws are identical on every platform:
// mt19937_64's output sequence is fixed by the standard, and bounded draws
// use rejection sampling instead of the implementation-defined distributions.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Uniform sample of `count` distinct items (partial Fisher-Yates); returns
/// them in draw order. count is clamped to items.size().
std::vector<std::size_t> SampleWithoutReplacement(std::span<const std::size_t> items, std::size_t count,
                                                  SeededRng& rng);

}  // namespace lotto
