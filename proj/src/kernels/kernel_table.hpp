#pragma once

#include <cstddef>

// Internal dispatch table. One instance per backend; kernels.cpp picks one
// at runtime. Raw pointers + lengths keep the per-backend code free of any
// span/ABI concerns.

namespace ocdr::kernels::detail {

struct KernelTable {
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sum_sq_dev)(const double* x, std::size_t n, double center);
  void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
  void (*scale)(double* x, std::size_t n, double s);
  void (*complex_magnitude)(const double* re, const double* im, double* out, std::size_t n);
  double (*max_value)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

} // namespace ocdr::kernels::detail
