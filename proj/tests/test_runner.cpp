#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ocdr/config.hpp"
#include "ocdr/error.hpp"
#include "ocdr/runner.hpp"
#include "test_support.hpp"

#include <cmath>
#include <string>

using namespace ocdr;

namespace {

ExperimentConfig config_for(Scenario s, const std::string& out_dir,
                            const std::string& extra = "") {
  auto cfg = parse_config("scenario = " + scenario_name(s) + "\n" + extra);
  cfg.out_dir = out_dir;
  return cfg;
}

} // namespace

TEST_CASE("psf scenario reproduces the broadband-source width") {
  testsupport::TempDir tmp("run_psf");
  const auto report = run_experiment(config_for(Scenario::psf, tmp.str()));
  // gaussian 930/70 through the default flat detector
  CHECK(report.metric("fwhm_um") == doctest::Approx(5.45).epsilon(0.02));
  CHECK(report.metric("effective_eta") == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(report.has_metric("center_wavelength_nm"));
  CHECK(!report.files.empty());
  CHECK(testsupport::slurp(tmp.str("psf.csv")).find("z_um,envelope") != std::string::npos);
}

TEST_CASE("acq_plan scenario") {
  testsupport::TempDir tmp("run_plan");
  const auto report = run_experiment(config_for(Scenario::acq_plan, tmp.str()));
  CHECK(report.metric("scan_time_s") == doctest::Approx(1.0));
  CHECK(report.metric("n_bins") == 100000.0);
  CHECK(report.metric("counts_per_bin_pre_dead") == doctest::Approx(50.0));
  CHECK(report.metric("saturation_warning") == 0.0);
}

TEST_CASE("snr_budget scenario") {
  testsupport::TempDir tmp("run_budget");
  const auto report = run_experiment(config_for(Scenario::snr_budget, tmp.str()));
  CHECK(report.metric("thermal_shot_crossover_w") == doctest::Approx(1.0e-8).epsilon(0.02));
  CHECK(report.metric("optimal_p_r_grid_w") ==
        doctest::Approx(report.metric("optimal_p_r_w")).epsilon(0.1));
  const auto sweep = testsupport::slurp(tmp.str("snr_sweep.csv"));
  CHECK(sweep.find("p_r_w,snr") == 0);
  CHECK(sweep.find("thermal") != std::string::npos);
  CHECK(sweep.find("excess") != std::string::npos);
}

TEST_CASE("snr_run scenario median lands within a factor of two of the prediction") {
  testsupport::TempDir tmp("run_snr");
  // fewer seeds than the acceptance gate to keep the unit suite quick
  const auto report =
      run_experiment(config_for(Scenario::snr_run, tmp.str(), "[monte_carlo]\nn_seeds = 5\n"));
  CHECK(report.metric("phi_s_cps") == doctest::Approx(1170.0).epsilon(0.005));
  CHECK(report.metric("eta") == 0.05);
  const double median = report.metric("simulated_snr_median");
  CHECK(median > 1170.0 / 2.0);
  CHECK(median < 1170.0 * 2.0);
  // the envelope clears the noise floor by well over 10x in every run
  CHECK(report.metric("simulated_snr_min") >= 100.0);
}

TEST_CASE("fano_run scenario") {
  testsupport::TempDir tmp("run_fano");
  const auto report = run_experiment(
      config_for(Scenario::fano_run, tmp.str(), "[monte_carlo]\nn_trials = 2000\n"));
  CHECK(report.metric("mean_f_hat") == doctest::Approx(1.0).epsilon(0.03));
  CHECK(report.metric("std_f_hat") == doctest::Approx(0.1414).epsilon(0.2));
  CHECK(report.metric("expected_std") == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
}

TEST_CASE("silica_scan scenario finds the window surfaces") {
  testsupport::TempDir tmp("run_silica");
  const auto report = run_experiment(config_for(Scenario::silica_scan, tmp.str()));
  CHECK(report.metric("peak_separation_um") == doctest::Approx(135.0).epsilon(1.0 / 135.0));
  CHECK(report.metric("counts_per_bin_pre_dead") == doctest::Approx(50.0).epsilon(0.05));
  CHECK(report.metric("scan_time_s") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.metric("fast_scan_time_s") == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(report.metric("fast_counts_per_bin_pre_dead") ==
        doctest::Approx(report.metric("counts_per_bin_pre_dead")).epsilon(1e-9));
  // observed counts sit below the pre-dead-time value by the ~5% compression
  CHECK(report.metric("counts_per_bin_mean") <
        report.metric("counts_per_bin_pre_dead"));
  CHECK(report.metric("counts_per_bin_mean") == doctest::Approx(47.6).epsilon(0.02));
}

TEST_CASE("compare_detectors scenario") {
  testsupport::TempDir tmp("run_compare");
  const auto report = run_experiment(config_for(Scenario::compare_detectors, tmp.str()));
  CHECK(report.metric("fwhm_sspd_um") == doctest::Approx(3.3).epsilon(0.02));
  const double spad = report.metric("fwhm_spad_um");
  CHECK(spad > 4.3);
  CHECK(spad < 6.5);
  CHECK(report.metric("spectral_mass_beyond_1100nm_spad") < 0.01);
  CHECK(report.metric("spectral_mass_beyond_1100nm_sspd") >= 0.10);
  // scan-domain widths agree with the psf-domain ones within the loose gate
  CHECK(report.metric("scan_fwhm_sspd_um") == doctest::Approx(3.3).epsilon(0.2));
  CHECK(report.metric("scan_fwhm_spad_um") == doctest::Approx(5.4).epsilon(0.25));
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  testsupport::TempDir tmp_a("det_a");
  testsupport::TempDir tmp_b("det_b");
  const std::string shrink =
      "[scan]\nz_end_um = 200\n[sample]\ndepths_um = 40,175\namplitudes = 0.2,0.2\n";
  const auto ra = run_experiment(config_for(Scenario::silica_scan, tmp_a.str(), shrink));
  const auto rb = run_experiment(config_for(Scenario::silica_scan, tmp_b.str(), shrink));

  CHECK(testsupport::slurp(tmp_a.str("scan.txt")) == testsupport::slurp(tmp_b.str("scan.txt")));
  CHECK(testsupport::slurp(tmp_a.str("envelope.csv")) ==
        testsupport::slurp(tmp_b.str("envelope.csv")));
  REQUIRE(ra.metrics.size() == rb.metrics.size());
  for (std::size_t i = 0; i < ra.metrics.size(); ++i) {
    CHECK(ra.metrics[i].first == rb.metrics[i].first);
    CHECK(ra.metrics[i].second == rb.metrics[i].second);
  }

  SUBCASE("a different seed changes the record") {
    testsupport::TempDir tmp_c("det_c");
    auto cfg = config_for(Scenario::silica_scan, tmp_c.str(), shrink);
    cfg.rng_seed = 1;
    run_experiment(cfg);
    CHECK(testsupport::slurp(tmp_a.str("scan.txt")) !=
          testsupport::slurp(tmp_c.str("scan.txt")));
  }
}

TEST_CASE("reports echo a reparseable resolved config") {
  testsupport::TempDir tmp("report");
  const auto report = run_experiment(config_for(Scenario::acq_plan, tmp.str()));
  const auto echoed = parse_config(report.resolved_config);
  REQUIRE(echoed.scenario.has_value());
  CHECK(*echoed.scenario == Scenario::acq_plan);
  // rerunning from the echo reproduces the metrics
  auto cfg2 = echoed;
  cfg2.out_dir = tmp.str("again");
  const auto report2 = run_experiment(cfg2);
  CHECK(report2.metric("counts_per_bin") == report.metric("counts_per_bin"));

  const std::string text = format_report(report);
  CHECK(text.find("# ocdr run report") == 0);
  CHECK(text.find("[metrics]") != std::string::npos);
  CHECK(text.find("[config]") != std::string::npos);
  CHECK(text.find("scenario = acq_plan") != std::string::npos);
}

TEST_CASE("running without a scenario fails cleanly") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(run_experiment(cfg), Error);
}
