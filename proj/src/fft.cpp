#include "ocdr/fft.hpp"

#include "ocdr/error.hpp"

#include <fftw3.h>

#include <mutex>

namespace ocdr::fft {
namespace {

// FFTW execution is thread-safe, planning is not.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  fftw_complex* data;
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) fail(Errc::io_failure, "fftw allocation failed");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

std::vector<std::complex<double>> transform(std::span<const std::complex<double>> x, int sign) {
  require(!x.empty(), Errc::invalid_argument, "fft: empty input");
  const std::size_t n = x.size();
  FftwBuffer in(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    in.data[i][0] = x[i].real();
    in.data[i][1] = x[i].imag();
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) fail(Errc::io_failure, "fftw planning failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<std::complex<double>> result(n);
  for (std::size_t i = 0; i < n; ++i) result[i] = {out.data[i][0], out.data[i][1]};
  return result;
}

} // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x) {
  return transform(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x) {
  auto result = transform(x, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : result) v *= scale;
  return result;
}

std::vector<std::complex<double>> forward_real(std::span<const double> x, std::size_t padded_size) {
  require(padded_size >= x.size(), Errc::invalid_argument, "fft: pad smaller than input");
  std::vector<std::complex<double>> buf(padded_size, {0.0, 0.0});
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = {x[i], 0.0};
  return forward(buf);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

} // namespace ocdr::fft
