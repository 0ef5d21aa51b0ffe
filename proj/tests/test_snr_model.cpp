#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ocdr/constants.hpp"
#include "ocdr/error.hpp"
#include "ocdr/scan.hpp"
#include "ocdr/snr_model.hpp"

#include <cmath>
#include <random>

using namespace ocdr;

TEST_CASE("thermal/shot crossover lands at 10 nW with the documented defaults") {
  const ConventionalSnrParams p;  // defaults
  const double crossover = thermal_shot_crossover_power(p);
  // hand-derived: 2 k T / (e R R_f) with T=300, R=0.8, R_f=6.46e6
  CHECK(crossover == doctest::Approx(1.0e-8).epsilon(0.02));

  ConventionalSnrParams at = p;
  at.reference_power_w = crossover;
  const auto b = snr_conventional(at);
  CHECK(b.thermal_noise_a2 == doctest::Approx(b.shot_noise_a2).epsilon(1e-9));
}

TEST_CASE("large R_f and large source bandwidth recover the shot limit") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r_dist(0.1, 1.0);
  std::uniform_real_distribution<double> p_dist(-16.0, -7.0);
  std::uniform_real_distribution<double> b_dist(-2.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    ConventionalSnrParams p;
    p.responsivity_a_w = r_dist(rng);
    p.reference_power_w = std::pow(10.0, p_dist(rng) + 4.0);
    p.sample_power_w = std::pow(10.0, p_dist(rng));
    p.bandwidth_hz = std::pow(10.0, b_dist(rng));
    p.feedback_resistance_ohm = 1e18;
    p.source_bandwidth_hz = 1e30;
    const auto b = snr_conventional(p);
    const double limit = snr_shot_limit(p);
    CHECK(b.snr == doctest::Approx(limit).epsilon(1e-6));
  }
}

TEST_CASE("snr vanishes as the reference power goes to zero") {
  ConventionalSnrParams p;
  double prev = std::numeric_limits<double>::max();
  for (double power : {1e-8, 1e-12, 1e-16, 1e-20}) {
    p.reference_power_w = power;
    const double snr = snr_conventional(p).snr;
    CHECK(snr < prev);
    prev = snr;
  }
  p.reference_power_w = 1e-30;
  CHECK(snr_conventional(p).snr < 1e-12);
}

TEST_CASE("optimal reference power") {
  SUBCASE("grid search agrees with the closed form within 1%") {
    const ConventionalSnrParams p;
    const double closed = optimal_reference_power(p);

    double best_snr = 0.0, best_p = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      ConventionalSnrParams q = p;
      q.reference_power_w = std::pow(10.0, -12.0 + 8.0 * i / (n - 1.0));
      const double snr = snr_conventional(q).snr;
      if (snr > best_snr) {
        best_snr = snr;
        best_p = q.reference_power_w;
      }
    }
    CHECK(best_p == doctest::Approx(closed).epsilon(0.01));
  }

  SUBCASE("doubling the source bandwidth scales the optimum by sqrt(2)") {
    ConventionalSnrParams p;
    const double base = optimal_reference_power(p);
    p.source_bandwidth_hz *= 2.0;
    CHECK(optimal_reference_power(p) == doctest::Approx(base * std::sqrt(2.0)).epsilon(1e-12));
  }

  SUBCASE("polarized vs unpolarized changes the optimum by 1/sqrt(2)") {
    ConventionalSnrParams p;
    p.polarization_degree = 1.0;
    const double polarized = optimal_reference_power(p);
    p.polarization_degree = 0.0;
    CHECK(polarized == doctest::Approx(optimal_reference_power(p) / std::sqrt(2.0))
                           .epsilon(1e-12));
  }

  SUBCASE("the snr curve over a log grid is unimodal with the peak at the optimum") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> rf(1e5, 1e8);
    std::uniform_real_distribution<double> dnu(1e12, 1e14);
    for (int t = 0; t < 20; ++t) {
      ConventionalSnrParams p;
      p.feedback_resistance_ohm = rf(rng);
      p.source_bandwidth_hz = dnu(rng);

      const int n = 400;
      std::vector<double> snr(n), power(n);
      for (int i = 0; i < n; ++i) {
        ConventionalSnrParams q = p;
        power[i] = std::pow(10.0, -12.0 + 8.0 * i / (n - 1.0));
        q.reference_power_w = power[i];
        snr[i] = snr_conventional(q).snr;
      }
      int maxima = 0;
      int peak_at = 0;
      for (int i = 1; i + 1 < n; ++i) {
        if (snr[i] > snr[i - 1] && snr[i] >= snr[i + 1]) {
          ++maxima;
          peak_at = i;
        }
      }
      CHECK(maxima == 1);
      const double closed = optimal_reference_power(p);
      const double step = std::pow(10.0, 8.0 / (n - 1.0));
      CHECK(power[peak_at] / closed < step * 1.001);
      CHECK(closed / power[peak_at] < step * 1.001);
    }
  }
}

TEST_CASE("dominant regime labels the largest term") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    ConventionalSnrParams p;
    p.responsivity_a_w = 0.05 + u(rng);
    p.reference_power_w = std::pow(10.0, -14.0 + 10.0 * u(rng));
    p.sample_power_w = std::pow(10.0, -18.0 + 6.0 * u(rng));
    p.temperature_k = 4.0 + 400.0 * u(rng);
    p.bandwidth_hz = std::pow(10.0, -2.0 + 8.0 * u(rng));
    p.feedback_resistance_ohm = std::pow(10.0, 3.0 + 6.0 * u(rng));
    p.polarization_degree = u(rng);
    p.source_bandwidth_hz = std::pow(10.0, 11.0 + 4.0 * u(rng));
    const auto b = snr_conventional(p);
    NoiseRegime expected = NoiseRegime::thermal;
    double top = b.thermal_noise_a2;
    if (b.shot_noise_a2 > top) {
      top = b.shot_noise_a2;
      expected = NoiseRegime::shot;
    }
    if (b.excess_noise_a2 > top) expected = NoiseRegime::excess;
    CHECK(b.dominant_regime == expected);
  }
}

TEST_CASE("photon-counting snr") {
  // eta 0.05, 1170 photons/s, B = 1/40 Hz: the shot-limited prediction
  const auto pc = snr_photon_counting(0.05, 1170.0, 1.0 / 40.0);
  CHECK(pc.snr == doctest::Approx(1170.0).epsilon(1e-12));
  CHECK(pc.snr_db == doctest::Approx(10.0 * std::log10(1170.0)).epsilon(1e-12));
  CHECK(std::abs(pc.snr_db - 30.7) < 0.05);

  CHECK(snr_photon_counting(1.0, 2.0, 1.0).snr == doctest::Approx(1.0));
  CHECK(snr_photon_counting(0.05, 2340.0, 1.0 / 40.0).snr == doctest::Approx(2340.0));
  CHECK_THROWS_AS(snr_photon_counting(0.0, 1.0, 1.0), Error);
}

TEST_CASE("minimum detectable flux") {
  CHECK(min_detectable_flux(1.0, 1.0) == 2.0);
  CHECK(min_detectable_flux(0.05, 1.0 / 40.0) == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("snr at the minimum flux is unity") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> eta(0.001, 1.0);
    std::uniform_real_distribution<double> bw(-3.0, 6.0);
    for (int t = 0; t < 200; ++t) {
      const double e = eta(rng);
      const double b = std::pow(10.0, bw(rng));
      CHECK(snr_photon_counting(e, min_detectable_flux(e, b), b).snr ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("photon-counting and shot-limit forms agree when eta = R h nu / e") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> r_dist(0.05, 0.7);
  std::uniform_real_distribution<double> lam(900.0, 1500.0);  // keeps eta below 1
  std::uniform_real_distribution<double> pw(-17.0, -10.0);
  for (int t = 0; t < 200; ++t) {
    ConventionalSnrParams p;
    p.responsivity_a_w = r_dist(rng);
    p.sample_power_w = std::pow(10.0, pw(rng));
    const double lambda_nm = lam(rng);
    const double photon_energy =
        constants::planck_h * constants::speed_of_light / (lambda_nm * 1e-9);
    const double eta = p.responsivity_a_w * photon_energy / constants::electron_charge;
    REQUIRE(eta <= 1.0);
    const double flux = flux_from_power(p.sample_power_w, lambda_nm);
    const auto pc = snr_photon_counting(eta, flux, p.bandwidth_hz);
    CHECK(pc.snr == doctest::Approx(snr_shot_limit(p)).epsilon(1e-6));
  }
}

TEST_CASE("counting bandwidth") {
  CHECK(counting_bandwidth(1.0, std::nullopt) == 0.5);
  CHECK(counting_bandwidth(1.0, 1.0 / 40.0) == doctest::Approx(0.025));
  CHECK(counting_bandwidth(1e-5, std::nullopt) == doctest::Approx(5e4));
  CHECK_THROWS_AS(counting_bandwidth(0.0, std::nullopt), Error);
}

TEST_CASE("acquisition plan") {
  SUBCASE("the silica-scan operating point") {
    const auto plan = acquisition_plan(1.0, 1.0, 1e-5, 5e6, 1e-8);
    CHECK(plan.scan_time_s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(plan.n_bins == 100000);
    CHECK(plan.counts_per_bin_pre_dead == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(plan.counts_per_bin == doctest::Approx(50.0 / 1.05).epsilon(1e-9));
    CHECK_FALSE(plan.saturation_warning);
  }

  SUBCASE("ten-fold faster scanning keeps the counts per bin") {
    const auto plan = acquisition_plan(1.0, 10.0, 1e-6, 5e7, 1e-8);
    CHECK(plan.scan_time_s == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(plan.counts_per_bin_pre_dead == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(plan.saturation_warning);  // 0.5 dead-time product compresses by a third
  }

  SUBCASE("degenerate zero-length scan") {
    const auto plan = acquisition_plan(0.0, 1.0, 1e-5, 5e6, 1e-8);
    CHECK(plan.n_bins == 0);
    CHECK(plan.scan_time_s == 0.0);
  }
}
