#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ocdr::fft {

/// X[k] = sum_n x[n] exp(-i 2 pi k n / N)
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x);

/// Normalized inverse; inverse(forward(x)) == x up to rounding.
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x);

/// Real input convenience: promotes to complex and transforms.
std::vector<std::complex<double>> forward_real(std::span<const double> x, std::size_t padded_size);

std::size_t next_pow2(std::size_t n);

} // namespace ocdr::fft
