#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

// Experiment configuration: a line-oriented `key = value` format with
// `[section]` headers and `#` comments. Parsing is strict (unknown sections
// or keys are rejected with a line number) and locale-independent. Keys a
// scenario resolves differently are optional here and filled by the runner;
// serialization always emits the fully-resolved current values.

namespace ocdr {

enum class Scenario {
  psf,
  compare_detectors,
  snr_run,
  fano_run,
  silica_scan,
  snr_budget,
  acq_plan,
};

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);  // throws range_violation

struct GridConfig {
  double nu_min_thz = 150.0;
  double nu_max_thz = 1000.0;
  int n_points = 16384;
  bool operator==(const GridConfig&) const = default;
};

struct SourceConfig {
  std::string type = "gaussian";  // gaussian | spdc
  double center_wavelength_nm = 930.0;
  double fwhm_wavelength_nm = 70.0;
  double pump_wavelength_nm = 532.0;
  std::string spdc_shape = "sinc2";  // sinc2 | gaussian
  double spdc_bandwidth_thz = 0.0;   // 0 = calibrate against the resolution target
  double power_w = 1e-8;
  double sample_attenuation_db = 70.0;
  double bs_factor = 0.25;
  bool operator==(const SourceConfig&) const = default;
};

struct DetectorConfig {
  std::string kind = "sspd";  // sspd | spad | ingaas | ideal_flat | custom
  double qe_max = 1.0;
  double spad_cutoff_nm = 1100.0;
  double spad_transition_nm = 60.0;
  double sspd_qe_ref = 0.05;
  double sspd_lambda_ref_nm = 930.0;
  double sspd_lambda_decay_nm = 1000.0;
  double dark_rate_cps = 100.0;
  std::optional<double> dead_time_s;  // scenario default: 0 except silica_scan (10 ns)
  std::string custom_response_file;
  bool operator==(const DetectorConfig&) const = default;
};

struct BiasConfig {
  double bias_ratio = 0.85;
  double temperature_k = 4.2;
  bool operator==(const BiasConfig&) const = default;
};

struct SampleConfig {
  std::vector<double> depths_um;
  std::vector<double> amplitudes;
  std::vector<double> phases_rad;
  bool operator==(const SampleConfig&) const = default;
};

struct ScanSection {
  std::optional<double> z_start_um;
  std::optional<double> z_end_um;
  std::optional<double> mirror_speed_mm_s;
  std::optional<double> counting_time_s;
  std::optional<double> reference_flux_cps;   // unset: derived from source power
  std::optional<double> sample_flux_peak_cps; // unset: derived from source power
  std::optional<double> eta;                  // unset: band-averaged system qe
  int psf_z_points = 0;                       // 0 = auto
  bool store_truth = false;
  bool operator==(const ScanSection&) const = default;
};

struct FilterConfig {
  double margin = 1.5;
  int n_taps = 0;  // 0 = auto
  std::string window = "hamming";
  double threshold_fraction = 0.3;
  std::optional<double> signal_lo_um, signal_hi_um;
  std::optional<double> noise_lo_um, noise_hi_um;
  bool operator==(const FilterConfig&) const = default;
};

struct SnrBudgetConfig {
  double responsivity_a_w = 0.8;
  double reference_power_w = 1e-8;
  double sample_power_w = 2.5e-16;
  double temperature_k = 300.0;
  double bandwidth_hz = 0.025;
  double feedback_resistance_ohm = 6.46e6;
  double polarization_degree = 1.0;
  double source_bandwidth_thz = 10.0;
  double sweep_min_w = 1e-12;
  double sweep_max_w = 1e-4;
  int sweep_points = 321;
  bool operator==(const SnrBudgetConfig&) const = default;
};

struct PlanConfig {
  double scan_length_mm = 1.0;
  double mirror_speed_mm_s = 1.0;
  double counting_time_s = 1e-5;
  double count_rate_cps = 5e6;
  double dead_time_s = 1e-8;
  bool operator==(const PlanConfig&) const = default;
};

struct MonteCarloConfig {
  int n_seeds = 20;     // snr_run
  int n_repeats = 100;  // fano_run: counts per estimate
  int n_trials = 10000; // fano_run: estimates
  bool operator==(const MonteCarloConfig&) const = default;
};

struct ExperimentConfig {
  std::optional<Scenario> scenario;
  std::uint64_t rng_seed = 20080215;
  std::string out_dir = ".";

  GridConfig grid;
  SourceConfig source;
  DetectorConfig detector;
  BiasConfig bias;
  SampleConfig sample;
  ScanSection scan;
  FilterConfig filter;
  SnrBudgetConfig snr_budget;
  PlanConfig plan;
  MonteCarloConfig monte_carlo;

  // Keys the user set explicitly (section.key); scenario defaults leave
  // these alone. Not part of value equality.
  std::set<std::string> explicit_keys;

  bool is_explicit(const std::string& key) const { return explicit_keys.count(key) != 0; }

  bool operator==(const ExperimentConfig& o) const {
    return scenario == o.scenario && rng_seed == o.rng_seed && out_dir == o.out_dir &&
           grid == o.grid && source == o.source && detector == o.detector && bias == o.bias &&
           sample == o.sample && scan == o.scan && filter == o.filter &&
           snr_budget == o.snr_budget && plan == o.plan && monte_carlo == o.monte_carlo;
  }
};

/// Strict parse; throws config_syntax / unknown_key / range_violation with
/// the offending line number or field name.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Emits every section and key with the current values; reparses to an
/// equal config.
std::string serialize_config(const ExperimentConfig& cfg);

} // namespace ocdr
