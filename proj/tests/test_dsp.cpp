#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ocdr/constants.hpp"
#include "ocdr/dsp.hpp"
#include "ocdr/error.hpp"
#include "ocdr/psf.hpp"
#include "ocdr/rng.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace ocdr;

namespace {

FrequencyGrid default_grid() { return FrequencyGrid(150e12, 1000e12, 16384); }

ScanConfig config_930(double dz_um, double span_um) {
  ScanConfig sc;
  sc.z_start_um = 0.0;
  sc.z_end_um = span_um;
  sc.mirror_speed_mm_s = 1.0;
  sc.counting_time_s = dz_um / 1000.0;
  sc.reference_flux_cps = 1e8;
  sc.sample_flux_peak_cps = 1e6;
  sc.eta = 0.05;
  sc.dark_rate_cps = 100.0;
  sc.dead_time_s = 0.0;
  sc.rng_seed = 77;
  sc.center_wavelength_nm = 930.0;
  return sc;
}

std::vector<double> cosine_wave(double freq_per_sample, std::size_t n, double amplitude = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amplitude * std::cos(2.0 * M_PI * freq_per_sample * static_cast<double>(i));
  return x;
}

} // namespace

TEST_CASE("design_bandpass centers on the fringe carrier") {
  const auto grid = default_grid();

  SUBCASE("930 nm source: 2.1505 cycles/um") {
    const auto sys = make_gaussian_source(930.0, 70.0, grid);
    const auto spec = design_bandpass(config_930(0.05, 100.0), sys, 1.5);
    CHECK(spec.center_spatial_freq == doctest::Approx(2.0 / 0.930).epsilon(1e-3));
    CHECK(spec.n_taps % 2 == 1);
    CHECK(spec.n_taps >= 31);
    CHECK(spec.bandwidth > 0.0);
    CHECK(spec.bandwidth < 2.0 * spec.center_spatial_freq);
  }

  SUBCASE("1064 nm source: 1.8797 cycles/um") {
    const auto sys = make_spdc_source(532.0, 30e12, SpdcShape::gaussian, grid);
    auto sc = config_930(0.05, 100.0);
    sc.center_wavelength_nm = sys.center_wavelength_nm;
    const auto spec = design_bandpass(sc, sys, 1.5);
    CHECK(spec.center_spatial_freq == doctest::Approx(2.0 / 1.064).epsilon(1e-3));
  }

  SUBCASE("delta-like spectrum floors at two FT bins") {
    const auto sys = make_gaussian_source(930.0, 0.05, grid);
    const auto spec = design_bandpass(config_930(0.05, 100.0), sys, 1.5);
    CHECK(spec.bandwidth == doctest::Approx(2.0 / 100.0).epsilon(1e-9));
  }

  SUBCASE("margin below one is rejected") {
    const auto sys = make_gaussian_source(930.0, 70.0, grid);
    CHECK_THROWS_AS(design_bandpass(config_930(0.05, 100.0), sys, 0.5), Error);
  }

  SUBCASE("bandwidth beyond Nyquist is rejected") {
    const auto sys = make_gaussian_source(930.0, 70.0, grid);
    // dz = 0.22 um puts the passband edge past 0.5 cycles/sample
    auto sc = config_930(0.22, 400.0);
    try {
      design_bandpass(sc, sys, 1.5);
      FAIL("expected nyquist_violation");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::nyquist_violation);
    }
  }
}

TEST_CASE("bandpass filter response") {
  const auto sys = make_gaussian_source(930.0, 70.0, default_grid());
  const auto sc = config_930(0.05, 200.0);
  const auto spec = design_bandpass(sc, sys, 1.5);
  const std::size_t n = 4000;
  const std::size_t trim = static_cast<std::size_t>(spec.n_taps);
  const double f_c = spec.center_spatial_freq * 0.05;  // cycles/sample

  SUBCASE("DC is rejected") {
    std::vector<double> ones(n, 1.0);
    const auto out = bandpass_filter(ones, spec, 0.05);
    double worst = 0.0;
    for (std::size_t i = trim; i + trim < n; ++i) worst = std::max(worst, std::abs(out[i]));
    CHECK(worst < 1e-6);
  }

  SUBCASE("unit carrier passes with gain one") {
    const auto out = bandpass_filter(cosine_wave(f_c, n), spec, 0.05);
    const auto env = demodulate_envelope(out, spec, 0.05);
    for (std::size_t i = trim; i + trim < n; i += 50)
      CHECK(env[i] == doctest::Approx(1.0).epsilon(0.01));
  }

  SUBCASE("third harmonic is down by at least 40 dB") {
    // oracle: the designed transfer function itself
    CHECK(filter_response(spec, 3.0 * spec.center_spatial_freq) < 0.01);
    const auto out = bandpass_filter(cosine_wave(3.0 * f_c, n), spec, 0.05);
    double worst = 0.0;
    for (std::size_t i = trim; i + trim < n; ++i) worst = std::max(worst, std::abs(out[i]));
    CHECK(worst < 0.01);
  }

  SUBCASE("input must be longer than the filter") {
    std::vector<double> shorty(static_cast<std::size_t>(spec.n_taps) - 5, 0.0);
    try {
      bandpass_filter(shorty, spec, 0.05);
      FAIL("expected too_short_input");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::too_short_input);
    }
  }

  SUBCASE("bin spacing must match the design") {
    std::vector<double> x(n, 0.0);
    CHECK_THROWS_AS(bandpass_filter(x, spec, 0.07), Error);
  }
}

TEST_CASE("envelope demodulation") {
  const auto sys = make_gaussian_source(930.0, 70.0, default_grid());
  const auto sc = config_930(0.05, 200.0);
  const auto spec = design_bandpass(sc, sys, 1.5);
  const double f_c = spec.center_spatial_freq * 0.05;

  SUBCASE("pure carrier demodulates to a constant") {
    const std::size_t n = 3000;
    const auto env = demodulate_envelope(cosine_wave(f_c, n, 2.5), spec, 0.05);
    for (std::size_t i = 200; i + 200 < n; i += 37)
      CHECK(env[i] == doctest::Approx(2.5).epsilon(0.02));
  }

  SUBCASE("gaussian window survives demodulation with its width") {
    const std::size_t n = 4001;
    const double sigma = 220.0;  // samples
    std::vector<double> x(n), z(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) - 2000.0;
      truth[i] = std::exp(-0.5 * t * t / (sigma * sigma));
      x[i] = truth[i] * std::cos(2.0 * M_PI * f_c * t);
      z[i] = static_cast<double>(i);
    }
    const auto env = demodulate_envelope(x, spec, 0.05);
    const double fwhm = measure_fwhm(env, z);
    const double expected = 2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma;
    CHECK(fwhm == doctest::Approx(expected).epsilon(0.03));
  }

  SUBCASE("zeros stay zeros") {
    std::vector<double> x(512, 0.0);
    for (double v : demodulate_envelope(x, spec, 0.05)) CHECK(v == 0.0);
  }
}

TEST_CASE("find_peaks") {
  SUBCASE("single synthetic peak with parabolic refinement") {
    std::vector<double> z, env;
    for (int i = 0; i <= 400; ++i) {
      const double x = i * 0.25;
      z.push_back(x);
      env.push_back(std::exp(-0.5 * (x - 50.1) * (x - 50.1) / 9.0));
    }
    const auto peaks = find_peaks(env, z, 0.3);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].position_um == doctest::Approx(50.1).epsilon(1e-3));
    CHECK(peaks[0].fwhm_um ==
          doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * 3.0).epsilon(0.01));
  }

  SUBCASE("two peaks separated by 135 um") {
    std::vector<double> z, env;
    for (int i = 0; i <= 4000; ++i) {
      const double x = i * 0.1;
      z.push_back(x);
      env.push_back(std::exp(-0.5 * (x - 100.0) * (x - 100.0) / 4.0) +
                    0.8 * std::exp(-0.5 * (x - 235.0) * (x - 235.0) / 4.0));
    }
    const auto peaks = find_peaks(env, z, 0.3);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[1].position_um - peaks[0].position_um == doctest::Approx(135.0).epsilon(1e-3));
    CHECK(peaks[0].height > peaks[1].height);
  }

  SUBCASE("threshold contract under pure noise") {
    CountingRng rng(31337);
    std::vector<double> z, env;
    for (int i = 0; i < 4000; ++i) {
      z.push_back(i * 0.1);
      env.push_back(rng.uniform());
    }
    const auto peaks = find_peaks(env, z, 0.9);
    double top = 0.0;
    for (double v : env) top = std::max(top, v);
    for (const auto& p : peaks) CHECK(p.height >= 0.9 * top * 0.999);
  }

  SUBCASE("bad threshold is rejected") {
    std::vector<double> z{0, 1, 2}, env{0, 1, 0};
    CHECK_THROWS_AS(find_peaks(env, z, 0.0), Error);
    CHECK_THROWS_AS(find_peaks(env, z, 1.0), Error);
  }
}

TEST_CASE("estimate_snr") {
  // integer z keeps the region index selection unambiguous
  const std::size_t n = 2000;
  std::vector<double> z(n), filtered(n), envelope(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = static_cast<double>(i);
    filtered[i] = (i % 2 == 0) ? 1.0 : -1.0;
    envelope[i] = 1.0;
  }
  // a clean signal bump over z in [250, 350)
  for (std::size_t i = 250; i < 350; ++i) envelope[i] = 10.0;
  // [500, 590] selects 91 noise bins; alternating +-1 with odd count:
  // mean 1/91, variance (91 - 1/91)/90
  const double noise_var = (91.0 - 1.0 / 91.0) / 90.0;

  SUBCASE("definition: peak envelope squared over noise variance") {
    const auto est = estimate_snr(filtered, envelope, z, {240.0, 360.0}, {500.0, 590.0});
    CHECK(est.snr == doctest::Approx(100.0 / noise_var).epsilon(1e-12));
    CHECK(est.snr_db == doctest::Approx(10.0 * std::log10(100.0 / noise_var)).epsilon(1e-12));
  }

  SUBCASE("562 maps to 27.5 dB") {
    std::vector<double> env2 = envelope;
    for (std::size_t i = 250; i < 350; ++i) env2[i] = std::sqrt(562.0 * noise_var);
    const auto est = estimate_snr(filtered, env2, z, {240.0, 360.0}, {500.0, 590.0});
    CHECK(est.snr == doctest::Approx(562.0).epsilon(1e-9));
    CHECK(est.snr_db == doctest::Approx(27.4969).epsilon(0.002));
    CHECK(std::abs(est.snr_db - 27.5) < 0.05);
  }

  SUBCASE("region errors") {
    CHECK_THROWS_AS(estimate_snr(filtered, envelope, z, {240.0, 510.0}, {500.0, 590.0}), Error);
    CHECK_THROWS_AS(estimate_snr(filtered, envelope, z, {360.0, 240.0}, {500.0, 590.0}), Error);
    CHECK_THROWS_AS(estimate_snr(filtered, envelope, z, {240.0, 360.0}, {5000.0, 6000.0}),
                    Error);
  }

  SUBCASE("degenerate noise raises") {
    std::vector<double> flat(n, 0.0);
    try {
      estimate_snr(flat, envelope, z, {240.0, 360.0}, {500.0, 590.0});
      FAIL("expected degenerate_noise");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::degenerate_noise);
    }
  }
}

TEST_CASE("fano_factor") {
  SUBCASE("constant counts have zero variance") {
    const std::vector<double> c{5.0, 5.0, 5.0, 5.0};
    const auto est = fano_factor(std::span<const double>(c));
    CHECK(est.f_hat == 0.0);
    CHECK(est.n_samples == 4);
    CHECK(est.expected_std == doctest::Approx(std::sqrt(0.5)));
  }

  SUBCASE("doubling the counts doubles the estimate exactly") {
    const std::vector<double> c{48.0, 55.0, 52.0, 47.0, 51.0, 43.0};
    std::vector<double> doubled = c;
    for (double& v : doubled) v *= 2.0;
    const auto a = fano_factor(std::span<const double>(c));
    const auto b = fano_factor(std::span<const double>(doubled));
    CHECK(b.f_hat == 2.0 * a.f_hat);
  }

  SUBCASE("zero mean raises") {
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    CHECK_THROWS_AS(fano_factor(std::span<const double>(zeros)), Error);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(fano_factor(std::span<const double>(one)), Error);
  }

  SUBCASE("poisson calibration: mean 1 +- 0.02, spread sqrt(2/N)") {
    CountingRng rng(909);
    const int trials = 10000;
    std::vector<double> f_hats(trials);
    for (int t = 0; t < trials; ++t) {
      std::vector<double> counts(100);
      for (double& c : counts) c = static_cast<double>(rng.poisson(50.0));
      f_hats[t] = fano_factor(std::span<const double>(counts)).f_hat;
    }
    const double mean = testsupport::mean_of(f_hats);
    const double spread = std::sqrt(testsupport::sample_variance(f_hats));
    CHECK(std::abs(mean - 1.0) < 0.02);
    CHECK(spread == doctest::Approx(std::sqrt(2.0 / 100.0)).epsilon(0.15));
  }

  SUBCASE("spread scales as 1/sqrt(N) for N in {25, 100, 400}") {
    CountingRng rng(910);
    for (int n_samples : {25, 100, 400}) {
      const int trials = 4000;
      std::vector<double> f_hats(trials);
      for (int t = 0; t < trials; ++t) {
        std::vector<double> counts(n_samples);
        for (double& c : counts) c = static_cast<double>(rng.poisson(80.0));
        f_hats[t] = fano_factor(std::span<const double>(counts)).f_hat;
      }
      const double spread = std::sqrt(testsupport::sample_variance(f_hats));
      CHECK(spread == doctest::Approx(std::sqrt(2.0 / n_samples)).epsilon(0.15));
    }
  }
}

TEST_CASE("process_scan pipeline on a silica-like record") {
  const auto sys = make_gaussian_source(930.0, 70.0, default_grid());
  ScanConfig sc = config_930(0.05, 300.0);
  sc.reference_flux_cps = 1e8;
  sc.sample_flux_peak_cps = 1e8;
  sc.counting_time_s = 5e-5 * 20;  // dz still 0.05 via speed
  sc.mirror_speed_mm_s = 0.05;
  sc.rng_seed = 31;

  SampleModel sample;
  sample.reflectors.push_back({100.0, 0.3, 0.0});
  sample.reflectors.push_back({235.0, 0.3, 0.0});

  const double lambda0_um = sys.center_wavelength_nm / 1000.0;
  const double reach = 240.0;
  const int pts = static_cast<int>(std::ceil(2.0 * reach / (lambda0_um / 10.0))) + 1;
  const Psf psf = point_spread(sys, reach, pts);
  const auto rec = simulate_scan(sc, sample, psf);

  const auto spec = design_bandpass(sc, sys, 1.5);
  const auto result = process_scan(rec, spec, 0.3, std::nullopt, std::nullopt, psf.fwhm_um);

  REQUIRE(result.peaks.size() >= 2);
  std::vector<Peak> by_height = result.peaks;
  std::sort(by_height.begin(), by_height.end(),
            [](const Peak& a, const Peak& b) { return a.height > b.height; });
  const double separation = std::abs(by_height[0].position_um - by_height[1].position_um);
  CHECK(separation == doctest::Approx(135.0).epsilon(0.01));

  SUBCASE("filtering widens the envelope at most by the filter's own width") {
    // filter envelope width: demodulated impulse response
    std::vector<double> impulse(4096, 0.0);
    impulse[2048] = 1.0;
    const auto h_env = demodulate_envelope(bandpass_filter(impulse, spec, 0.05), spec, 0.05);
    std::vector<double> z(h_env.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = static_cast<double>(i) * 0.05;
    const double filter_fwhm = measure_fwhm(h_env, z);

    double truth_fwhm = psf.fwhm_um;
    for (const auto& pk : by_height) {
      if (!std::isnan(pk.fwhm_um)) {
        CHECK(pk.fwhm_um <= truth_fwhm + filter_fwhm + 0.3);
        CHECK(pk.fwhm_um >= truth_fwhm * 0.9);
      }
    }
  }
}

TEST_CASE("peak separation stays within half a bin plus 0.5 um over 100 seeds") {
  const auto sys = make_gaussian_source(930.0, 70.0, default_grid());
  ScanConfig sc = config_930(0.05, 60.0);
  sc.reference_flux_cps = 1e8;
  sc.sample_flux_peak_cps = 1e8;
  sc.counting_time_s = 1e-3;
  sc.mirror_speed_mm_s = 0.05;

  SampleModel sample;
  // separation 25 um, at least 3 coherence lengths apart
  sample.reflectors.push_back({18.0, 0.3, 0.0});
  sample.reflectors.push_back({43.0, 0.3, 0.0});

  const double lambda0_um = sys.center_wavelength_nm / 1000.0;
  const int pts = static_cast<int>(std::ceil(2.0 * 65.0 / (lambda0_um / 10.0))) + 1;
  const Psf psf = point_spread(sys, 65.0, pts);
  const auto spec = design_bandpass(sc, sys, 1.5);

  double worst = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    sc.rng_seed = mix_seed(9000, static_cast<std::uint64_t>(seed));
    const auto rec = simulate_scan(sc, sample, psf);
    const auto result = process_scan(rec, spec, 0.3, std::nullopt, std::nullopt, psf.fwhm_um);
    REQUIRE(result.peaks.size() >= 2);
    std::vector<Peak> by_height = result.peaks;
    std::sort(by_height.begin(), by_height.end(),
              [](const Peak& a, const Peak& b) { return a.height > b.height; });
    const double sep = std::abs(by_height[0].position_um - by_height[1].position_um);
    worst = std::max(worst, std::abs(sep - 25.0));
  }
  CHECK(worst < 0.5 * sc.bin_spacing_um() + 0.5);
}

TEST_CASE("envelope result export") {
  testsupport::TempDir tmp("dsp");
  EnvelopeResult r;
  r.z_um = {0.0, 1.0, 2.0};
  r.envelope = {0.1, 1.0, 0.2};
  r.peaks.push_back({1.0, 1.0, 0.8});
  r.snr = SnrEstimate{100.0, 20.0};
  r.effective_bandwidth_hz = 0.025;
  write_envelope_result(r, tmp.str("env.csv"), tmp.str("env_summary.txt"));
  CHECK(testsupport::slurp(tmp.str("env.csv")).find("z_um,envelope") == 0);
  const auto summary = testsupport::slurp(tmp.str("env_summary.txt"));
  CHECK(summary.find("snr_db = 20") != std::string::npos);
  CHECK(summary.find("peak_0_position_um = 1") != std::string::npos);
}
