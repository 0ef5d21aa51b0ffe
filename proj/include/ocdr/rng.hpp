#pragma once

#include <cstdint>
#include <random>

// Reproducible counting statistics. The engine is std::mt19937_64 (its
// output sequence is fixed by the standard) and both the uniform mapping
// and the Poisson sampler are implemented here, so a given seed produces
// the same counts on every standard-conforming build.

namespace ocdr {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// log(k!) via a cached table for small k and a Stirling series above.
double log_factorial(std::uint64_t k);

class CountingRng {
public:
  explicit CountingRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Exact Poisson sample: sequential inversion below mean 10, transformed
  /// rejection (Hormann's PTRS) above. No normal approximation, so the
  /// sampled distribution passes goodness-of-fit at any mean.
  std::uint64_t poisson(double mean);

private:
  std::uint64_t poisson_inversion(double mean);
  std::uint64_t poisson_ptrs(double mean);

  std::mt19937_64 engine_;
};

} // namespace ocdr
