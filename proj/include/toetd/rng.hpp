#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace toetd {

// Portable seeded generator. std::mt19937_64's output sequence is fixed by
// the C++ standard; the standard distributions are not, so uniform doubles
// are built from the top 53 bits by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Index drawn from unnormalized nonnegative weights; zero-weight entries are
  // never returned.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = uniform() * total;
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      last_positive = i;
      cumulative += weights[i];
      if (u < cumulative) return i;
    }
    return last_positive;
  }

  std::uint64_t next_u64() { return engine_(); }

  bool operator==(const Rng&) const = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace toetd
