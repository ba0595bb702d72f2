#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace duet {

// std::mt19937_64 output is fully specified by the standard, unlike the
// standard distributions, so these helpers keep seeded runs reproducible
// across toolchains.

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = gen();
  } while (r >= limit);
  return r % bound;
}

template <typename T>
void fisher_yates(std::span<T> values, std::mt19937_64& gen) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(gen, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace duet
