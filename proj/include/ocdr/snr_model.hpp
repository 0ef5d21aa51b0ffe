#pragma once

#include <optional>

// Analytic sensitivity models: the conventional current-SNR budget with its
// thermal/shot/excess noise terms, the shot-noise limit, photon-counting
// SNR and minimum detectable flux, and acquisition-rate planning.

namespace ocdr {

struct ConventionalSnrParams {
  double responsivity_a_w = 0.8;           // R
  double reference_power_w = 1e-8;         // P_R
  double sample_power_w = 2.5e-16;         // P_S
  double temperature_k = 300.0;            // T
  double bandwidth_hz = 0.025;             // B
  double feedback_resistance_ohm = 6.46e6; // R_f
  double polarization_degree = 1.0;        // Pi, in [0,1]
  double source_bandwidth_hz = 1e13;       // d(nu)

  void validate() const;
};

enum class NoiseRegime { thermal, shot, excess };

struct SnrBudget {
  double signal_term_a2 = 0.0;   // R^2 P_R P_S
  double thermal_noise_a2 = 0.0; // 4 k T B / R_f
  double shot_noise_a2 = 0.0;    // 2 e B R P_R
  double excess_noise_a2 = 0.0;  // (1 + Pi^2) B R^2 P_R^2 / d(nu)
  double snr = 0.0;
  double snr_db = 0.0;
  NoiseRegime dominant_regime = NoiseRegime::thermal;
};

struct AcquisitionPlan {
  double scan_length_mm = 0.0;
  double mirror_speed_mm_s = 0.0;
  double counting_time_s = 0.0;
  double count_rate_cps = 0.0;          // observed (dead-time compressed)
  double count_rate_pre_dead_cps = 0.0;
  long n_bins = 0;
  double counts_per_bin = 0.0;          // observed
  double counts_per_bin_pre_dead = 0.0;
  double scan_time_s = 0.0;
  bool saturation_warning = false;      // dead-time compression above 10%
};

SnrBudget snr_conventional(const ConventionalSnrParams& params);

/// Shot-noise-limited SNR: R P_S / (2 e B).
double snr_shot_limit(const ConventionalSnrParams& params);

/// P_R maximizing the conventional SNR: sqrt(4 k T dnu / (R_f (1+Pi^2) R^2)).
double optimal_reference_power(const ConventionalSnrParams& params);

/// Reference power at which thermal and shot noise are equal: 2 k T/(e R R_f).
double thermal_shot_crossover_power(const ConventionalSnrParams& params);

/// Reference power at which shot and excess noise are equal.
double shot_excess_crossover_power(const ConventionalSnrParams& params);

struct PhotonCountingSnr {
  double snr = 0.0;
  double snr_db = 0.0;
};

/// eta * flux / (2 B).
PhotonCountingSnr snr_photon_counting(double eta, double sample_flux_cps, double bandwidth_hz);

/// 2 B / eta, i.e. 1/eta photons per resolution time of the receiver.
double min_detectable_flux(double eta, double bandwidth_hz);

/// min(1/(2T), digital filter bandwidth when present).
double counting_bandwidth(double counting_time_s, std::optional<double> filter_bandwidth_hz);

AcquisitionPlan acquisition_plan(double scan_length_mm, double mirror_speed_mm_s,
                                 double counting_time_s, double count_rate_cps,
                                 double dead_time_s);

} // namespace ocdr
