#include "ocdr/kernels.hpp"

#include "kernel_table.hpp"
#include "ocdr/error.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace ocdr::kernels {
namespace {

using detail::KernelTable;

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &detail::scalar_table();
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      if (cpu_has_avx2()) return &detail::avx2_table();
#endif
      return nullptr;
    case Backend::neon:
#if defined(__aarch64__)
      return &detail::neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

struct Selection {
  const KernelTable* table;
  Backend backend;
};

Selection detect() {
  if (const char* env = std::getenv("OCDR_KERNEL_BACKEND")) {
    Backend want = Backend::scalar;
    if (std::strcmp(env, "avx2") == 0) want = Backend::avx2;
    else if (std::strcmp(env, "neon") == 0) want = Backend::neon;
    else if (std::strcmp(env, "scalar") != 0)
      fail(Errc::invalid_argument, std::string("OCDR_KERNEL_BACKEND: unknown backend '") + env + "'");
    const KernelTable* t = table_for(want);
    require(t != nullptr, Errc::invalid_argument,
            std::string("OCDR_KERNEL_BACKEND: backend '") + env + "' not available on this host");
    return {t, want};
  }
#if defined(__aarch64__)
  return {&detail::neon_table(), Backend::neon};
#else
  if (const KernelTable* t = table_for(Backend::avx2)) return {t, Backend::avx2};
  return {&detail::scalar_table(), Backend::scalar};
#endif
}

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const KernelTable& ops() {
  const KernelTable* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    Selection sel = detect();
    g_backend.store(sel.backend, std::memory_order_relaxed);
    g_table.store(sel.table, std::memory_order_release);
    t = sel.table;
  }
  return *t;
}

} // namespace

Backend active_backend() {
  ops();
  return g_backend.load(std::memory_order_relaxed);
}

bool backend_available(Backend b) { return table_for(b) != nullptr; }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "?";
}

void force_backend(Backend b) {
  const KernelTable* t = table_for(b);
  require(t != nullptr, Errc::invalid_argument,
          std::string("kernel backend '") + std::string(backend_name(b)) + "' not available");
  g_backend.store(b, std::memory_order_relaxed);
  g_table.store(t, std::memory_order_release);
}

void reset_backend() {
  Selection sel = detect();
  g_backend.store(sel.backend, std::memory_order_relaxed);
  g_table.store(sel.table, std::memory_order_release);
}

double dot(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), Errc::invalid_argument, "dot: size mismatch");
  if (x.empty()) return 0.0;
  return ops().dot(x.data(), y.data(), x.size());
}

double sum(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return ops().sum(x.data(), x.size());
}

double sum_sq_dev(std::span<const double> x, double center) {
  if (x.empty()) return 0.0;
  return ops().sum_sq_dev(x.data(), x.size(), center);
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  require(a.size() == b.size() && a.size() == out.size(), Errc::invalid_argument,
          "multiply: size mismatch");
  if (a.empty()) return;
  ops().multiply(a.data(), b.data(), out.data(), a.size());
}

void scale(std::span<double> x, double s) {
  if (x.empty()) return;
  ops().scale(x.data(), x.size(), s);
}

void complex_magnitude(std::span<const double> re, std::span<const double> im,
                       std::span<double> out) {
  require(re.size() == im.size() && re.size() == out.size(), Errc::invalid_argument,
          "complex_magnitude: size mismatch");
  if (re.empty()) return;
  ops().complex_magnitude(re.data(), im.data(), out.data(), re.size());
}

double max_value(std::span<const double> x) {
  require(!x.empty(), Errc::invalid_argument, "max_value: empty input");
  return ops().max_value(x.data(), x.size());
}

void fir_same(std::span<const double> x, std::span<const double> taps, std::span<double> out) {
  require(taps.size() % 2 == 1, Errc::invalid_argument, "fir_same: tap count must be odd");
  require(out.size() == x.size(), Errc::invalid_argument, "fir_same: output size mismatch");
  require(x.size() > taps.size(), Errc::too_short_input, "fir_same: input shorter than filter");
  const std::size_t n = x.size();
  const std::size_t nt = taps.size();
  const std::size_t m = nt / 2;
  const KernelTable& t = ops();

  // Edges: clip the window against the input and use a partial dot.
  for (std::size_t i = 0; i < m && i < n; ++i) {
    const std::size_t k0 = m - i;
    const std::size_t len = nt - k0;
    out[i] = t.dot(taps.data() + k0, x.data(), len);
  }
  // Interior: full-length contiguous dot.
  for (std::size_t i = m; i + m < n; ++i)
    out[i] = t.dot(taps.data(), x.data() + (i - m), nt);
  for (std::size_t i = (n > m ? n - m : 0); i < n; ++i) {
    const std::size_t len = m + (n - i);
    out[i] = t.dot(taps.data(), x.data() + (i - m), len);
  }
}

} // namespace ocdr::kernels
