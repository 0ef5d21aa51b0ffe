#include "ocdr/snr_model.hpp"

#include "ocdr/constants.hpp"
#include "ocdr/error.hpp"
#include "ocdr/scan.hpp"

#include <cmath>

namespace ocdr {

void ConventionalSnrParams::validate() const {
  require(responsivity_a_w > 0.0, Errc::range_violation, "snr: responsivity must be positive");
  require(reference_power_w > 0.0, Errc::range_violation, "snr: P_R must be positive");
  require(sample_power_w > 0.0, Errc::range_violation, "snr: P_S must be positive");
  require(temperature_k > 0.0, Errc::range_violation, "snr: temperature must be positive");
  require(bandwidth_hz > 0.0, Errc::range_violation, "snr: bandwidth must be positive");
  require(feedback_resistance_ohm > 0.0, Errc::range_violation, "snr: R_f must be positive");
  require(polarization_degree >= 0.0 && polarization_degree <= 1.0, Errc::range_violation,
          "snr: polarization degree must lie in [0,1]");
  require(source_bandwidth_hz > 0.0, Errc::range_violation,
          "snr: source bandwidth must be positive");
}

SnrBudget snr_conventional(const ConventionalSnrParams& p) {
  p.validate();
  const double r = p.responsivity_a_w;
  const double pi2 = p.polarization_degree * p.polarization_degree;

  SnrBudget b;
  b.signal_term_a2 = r * r * p.reference_power_w * p.sample_power_w;
  b.thermal_noise_a2 = 4.0 * constants::boltzmann_k * p.temperature_k * p.bandwidth_hz /
                       p.feedback_resistance_ohm;
  b.shot_noise_a2 =
      2.0 * constants::electron_charge * p.bandwidth_hz * r * p.reference_power_w;
  b.excess_noise_a2 = (1.0 + pi2) * p.bandwidth_hz * r * r * p.reference_power_w *
                      p.reference_power_w / p.source_bandwidth_hz;

  b.snr = b.signal_term_a2 / (b.thermal_noise_a2 + b.shot_noise_a2 + b.excess_noise_a2);
  b.snr_db = 10.0 * std::log10(b.snr);
  b.dominant_regime = NoiseRegime::thermal;
  if (b.shot_noise_a2 > b.thermal_noise_a2 && b.shot_noise_a2 >= b.excess_noise_a2)
    b.dominant_regime = NoiseRegime::shot;
  else if (b.excess_noise_a2 > b.thermal_noise_a2 && b.excess_noise_a2 > b.shot_noise_a2)
    b.dominant_regime = NoiseRegime::excess;
  return b;
}

double snr_shot_limit(const ConventionalSnrParams& p) {
  p.validate();
  return p.responsivity_a_w * p.sample_power_w /
         (2.0 * constants::electron_charge * p.bandwidth_hz);
}

double optimal_reference_power(const ConventionalSnrParams& p) {
  p.validate();
  const double pi2 = p.polarization_degree * p.polarization_degree;
  return std::sqrt(4.0 * constants::boltzmann_k * p.temperature_k * p.source_bandwidth_hz /
                   (p.feedback_resistance_ohm * (1.0 + pi2) * p.responsivity_a_w *
                    p.responsivity_a_w));
}

double thermal_shot_crossover_power(const ConventionalSnrParams& p) {
  p.validate();
  return 2.0 * constants::boltzmann_k * p.temperature_k /
         (constants::electron_charge * p.responsivity_a_w * p.feedback_resistance_ohm);
}

double shot_excess_crossover_power(const ConventionalSnrParams& p) {
  p.validate();
  const double pi2 = p.polarization_degree * p.polarization_degree;
  return 2.0 * constants::electron_charge * p.source_bandwidth_hz /
         ((1.0 + pi2) * p.responsivity_a_w);
}

PhotonCountingSnr snr_photon_counting(double eta, double sample_flux_cps, double bandwidth_hz) {
  require(eta > 0.0 && eta <= 1.0, Errc::range_violation, "snr: eta must lie in (0,1]");
  require(sample_flux_cps > 0.0, Errc::range_violation, "snr: flux must be positive");
  require(bandwidth_hz > 0.0, Errc::range_violation, "snr: bandwidth must be positive");
  PhotonCountingSnr out;
  out.snr = eta * sample_flux_cps / (2.0 * bandwidth_hz);
  out.snr_db = 10.0 * std::log10(out.snr);
  return out;
}

double min_detectable_flux(double eta, double bandwidth_hz) {
  require(eta > 0.0 && eta <= 1.0, Errc::range_violation, "snr: eta must lie in (0,1]");
  require(bandwidth_hz > 0.0, Errc::range_violation, "snr: bandwidth must be positive");
  return 2.0 * bandwidth_hz / eta;
}

double counting_bandwidth(double counting_time_s, std::optional<double> filter_bandwidth_hz) {
  require(counting_time_s > 0.0, Errc::range_violation, "bandwidth: T must be positive");
  const double counting = 1.0 / (2.0 * counting_time_s);
  if (filter_bandwidth_hz) {
    require(*filter_bandwidth_hz > 0.0, Errc::range_violation,
            "bandwidth: filter bandwidth must be positive");
    return std::min(counting, *filter_bandwidth_hz);
  }
  return counting;
}

AcquisitionPlan acquisition_plan(double scan_length_mm, double mirror_speed_mm_s,
                                 double counting_time_s, double count_rate_cps,
                                 double dead_time_s) {
  require(scan_length_mm >= 0.0, Errc::range_violation, "plan: negative scan length");
  require(mirror_speed_mm_s > 0.0, Errc::range_violation, "plan: speed must be positive");
  require(counting_time_s > 0.0, Errc::range_violation, "plan: T must be positive");
  require(count_rate_cps >= 0.0, Errc::range_violation, "plan: negative count rate");

  AcquisitionPlan plan;
  plan.scan_length_mm = scan_length_mm;
  plan.mirror_speed_mm_s = mirror_speed_mm_s;
  plan.counting_time_s = counting_time_s;
  plan.count_rate_pre_dead_cps = count_rate_cps;
  plan.count_rate_cps = dead_time_rate(count_rate_cps, dead_time_s);
  plan.n_bins = static_cast<long>(
      std::floor(scan_length_mm / (mirror_speed_mm_s * counting_time_s) * (1.0 + 1e-12)));
  plan.counts_per_bin = plan.count_rate_cps * counting_time_s;
  plan.counts_per_bin_pre_dead = count_rate_cps * counting_time_s;
  plan.scan_time_s = scan_length_mm / mirror_speed_mm_s;
  const double compression =
      count_rate_cps > 0.0 ? 1.0 - plan.count_rate_cps / count_rate_cps : 0.0;
  plan.saturation_warning = compression > 0.10;
  return plan;
}

} // namespace ocdr
