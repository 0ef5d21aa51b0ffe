#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ocdr/fft.hpp"
#include "test_support.hpp"

#include <random>

using namespace ocdr;

TEST_CASE("forward transform matches the direct DFT sum") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  for (std::size_t n : {std::size_t{8}, std::size_t{37}, std::size_t{64}, std::size_t{256}}) {
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {dist(rng), dist(rng)};

    const auto fast = fft::forward(x);
    const auto slow = testsupport::naive_dft(x);
    REQUIRE(fast.size() == n);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(fast[k].real() == doctest::Approx(slow[k].real()).epsilon(1e-9).scale(10.0));
      CHECK(fast[k].imag() == doctest::Approx(slow[k].imag()).epsilon(1e-9).scale(10.0));
    }
  }
}

TEST_CASE("inverse undoes forward") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  std::vector<std::complex<double>> x(128);
  for (auto& v : x) v = {dist(rng), dist(rng)};

  const auto back = fft::inverse(fft::forward(x));
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(back[i].real() == doctest::Approx(x[i].real()).epsilon(1e-12));
    CHECK(back[i].imag() == doctest::Approx(x[i].imag()).epsilon(1e-12));
  }
}

TEST_CASE("forward_real zero-pads") {
  std::vector<double> x{1.0, 2.0, 3.0};
  const auto spec = fft::forward_real(x, 8);
  REQUIRE(spec.size() == 8);
  // DC bin is just the sum
  CHECK(spec[0].real() == doctest::Approx(6.0));
  CHECK(spec[0].imag() == doctest::Approx(0.0));
  // real input: Hermitian symmetry
  CHECK(spec[1].real() == doctest::Approx(spec[7].real()));
  CHECK(spec[1].imag() == doctest::Approx(-spec[7].imag()));
}

TEST_CASE("next_pow2") {
  CHECK(fft::next_pow2(1) == 1);
  CHECK(fft::next_pow2(2) == 2);
  CHECK(fft::next_pow2(3) == 4);
  CHECK(fft::next_pow2(4096) == 4096);
  CHECK(fft::next_pow2(4097) == 8192);
}
