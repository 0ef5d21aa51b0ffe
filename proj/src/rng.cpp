#include "ocdr/rng.hpp"

#include "ocdr/error.hpp"

#include <array>
#include <cmath>

namespace ocdr {
namespace {

constexpr std::size_t kTableSize = 1024;

const std::array<double, kTableSize>& log_factorial_table() {
  static const std::array<double, kTableSize> table = [] {
    std::array<double, kTableSize> t{};
    t[0] = 0.0;
    for (std::size_t k = 1; k < kTableSize; ++k)
      t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
  }();
  return table;
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double log_factorial(std::uint64_t k) {
  if (k < kTableSize) return log_factorial_table()[k];
  // Stirling series for ln Gamma(x) at x = k+1; the k >= 1024 regime keeps
  // every retained term well above the next omitted one.
  const double x = static_cast<double>(k) + 1.0;
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * M_PI) +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0)));
}

std::uint64_t CountingRng::poisson(double mean) {
  require(mean >= 0.0 && std::isfinite(mean), Errc::range_violation,
          "poisson: mean must be finite and nonnegative");
  if (mean == 0.0) return 0;
  if (mean < 10.0) return poisson_inversion(mean);
  return poisson_ptrs(mean);
}

std::uint64_t CountingRng::poisson_inversion(double mean) {
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit);
  return k - 1;
}

// Hormann's PTRS transformed-rejection sampler, valid for mean >= 10.
std::uint64_t CountingRng::poisson_ptrs(double mean) {
  const double log_mean = std::log(mean);
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (v <= 0.0) continue;
    const auto k = static_cast<std::uint64_t>(kf);
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * log_mean - mean - log_factorial(k))
      return k;
  }
}

} // namespace ocdr
