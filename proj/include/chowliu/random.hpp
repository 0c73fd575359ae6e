#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace chowliu {

/// splitmix64 finalizer. Used to derive per-trial seeds so that results do not
/// depend on the order in which parallel workers pick up trials.
std::uint64_t mix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept;

/// Deterministic generator. Uniform doubles are produced directly from the
/// engine bits so sampled tables are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound) noexcept;

  /// Inverse-CDF draw from a probability vector; robust to rounding in the tail.
  std::size_t categorical(std::span<const double> probs) noexcept;

  /// Symmetric Dirichlet(1) draw mapped to floor + (1 - k*floor) * w, so every
  /// entry is at least `floor`.
  std::vector<double> floored_simplex(std::size_t k, double floor);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chowliu
