#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Arithmetic inner loops used by the spectra/psf/dsp pipelines. Each
// operation has a scalar reference implementation and, where the host
// supports it, a SIMD variant (AVX2+FMA on x86-64, NEON on aarch64)
// selected once at runtime. The variants are equivalence-tested against
// the scalar reference.
//
// The backend can be pinned with force_backend() or the environment
// variable OCDR_KERNEL_BACKEND (scalar|avx2|neon), checked on first use.

namespace ocdr::kernels {

enum class Backend { scalar, avx2, neon };

Backend active_backend();
bool backend_available(Backend b);
std::string_view backend_name(Backend b);
void force_backend(Backend b);  // throws Error(invalid_argument) if unavailable
void reset_backend();           // return to auto-detection

/// Sum of x[i] * y[i]; sizes must match.
double dot(std::span<const double> x, std::span<const double> y);

/// Sum of all elements.
double sum(std::span<const double> x);

/// Sum of (x[i] - center)^2; the inner loop of two-pass variance.
double sum_sq_dev(std::span<const double> x, double center);

/// out[i] = a[i] * b[i]; sizes must match.
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);

/// x[i] *= s, in place.
void scale(std::span<double> x, double s);

/// out[i] = sqrt(re[i]^2 + im[i]^2).
void complex_magnitude(std::span<const double> re, std::span<const double> im,
                       std::span<double> out);

/// Largest element; empty input throws.
double max_value(std::span<const double> x);

/// Centered FIR with zero-padded edges: out[i] = sum_k taps[k] * x[i + k - M],
/// M = (taps.size()-1)/2. taps.size() must be odd; out.size() == x.size().
void fir_same(std::span<const double> x, std::span<const double> taps, std::span<double> out);

} // namespace ocdr::kernels
