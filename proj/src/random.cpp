#include "chowliu/random.hpp"

#include <cmath>
#include <stdexcept>

namespace chowliu {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) noexcept {
  return mix64(mix64(master) ^ (a + 0x632be59bd9b4e019ULL));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept {
  return derive_seed(derive_seed(master, a), b);
}

std::size_t Rng::below(std::size_t bound) noexcept {
  if (bound <= 1) return 0;
  // Lemire's multiply-shift with rejection; unbiased.
  const auto range = static_cast<std::uint64_t>(bound);
  std::uint64_t x = engine_();
  __uint128_t m = static_cast<__uint128_t>(x) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      x = engine_();
      m = static_cast<__uint128_t>(x) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

std::size_t Rng::categorical(std::span<const double> probs) noexcept {
  const double u = uniform();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

std::vector<double> Rng::floored_simplex(std::size_t k, double floor) {
  if (k == 0 || floor < 0.0 || floor * static_cast<double>(k) >= 1.0) {
    throw std::invalid_argument("floored_simplex: need k >= 1 and floor * k < 1");
  }
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& x : w) {
    // Exponential(1) draws normalized give Dirichlet(1, ..., 1).
    x = -std::log1p(-uniform());
    total += x;
  }
  const double scale = 1.0 - floor * static_cast<double>(k);
  for (auto& x : w) x = floor + scale * (x / total);
  return w;
}

}  // namespace chowliu
