#include "ocdr/scan.hpp"

#include "ocdr/constants.hpp"
#include "ocdr/error.hpp"
#include "ocdr/rng.hpp"
#include "ocdr/text_io.hpp"

#include <cmath>

namespace ocdr {

void SampleModel::validate() const {
  double power = 0.0;
  for (std::size_t i = 0; i < reflectors.size(); ++i) {
    const Reflector& r = reflectors[i];
    require(r.amplitude >= 0.0 && r.amplitude <= 1.0, Errc::range_violation,
            "sample: amplitude reflectance must lie in [0,1]");
    if (i > 0)
      require(r.depth_um > reflectors[i - 1].depth_um, Errc::range_violation,
              "sample: optical depths must strictly increase");
    power += r.amplitude * r.amplitude;
  }
  require(power <= 1.0 + 1e-12, Errc::range_violation,
          "sample: total power reflectance exceeds 1");
}

double SampleModel::total_power_reflectance() const {
  double power = 0.0;
  for (const Reflector& r : reflectors) power += r.amplitude * r.amplitude;
  return power;
}

int ScanConfig::n_bins() const {
  const double span = z_end_um - z_start_um;
  const double dz = bin_spacing_um();
  if (span <= 0.0 || dz <= 0.0) return 0;
  // the nudge keeps exact multiples from landing one bin short
  return static_cast<int>(std::floor(span / dz * (1.0 + 1e-12)));
}

double ScanConfig::position_um(int bin) const {
  return z_start_um + (bin + 0.5) * bin_spacing_um();
}

void ScanConfig::validate() const {
  require(z_end_um > z_start_um, Errc::range_violation, "scan: z_end must exceed z_start");
  require(mirror_speed_mm_s > 0.0, Errc::range_violation, "scan: mirror speed must be positive");
  require(counting_time_s > 0.0, Errc::range_violation, "scan: counting_time must be positive");
  require(reference_flux_cps >= 0.0, Errc::range_violation, "scan: negative reference flux");
  require(sample_flux_peak_cps >= 0.0, Errc::range_violation, "scan: negative sample flux");
  require(eta >= 0.0 && eta <= 1.0, Errc::range_violation, "scan: eta must lie in [0,1]");
  require(dark_rate_cps >= 0.0, Errc::range_violation, "scan: negative dark rate");
  require(dead_time_s >= 0.0, Errc::range_violation, "scan: negative dead time");
  require(center_wavelength_nm > 0.0, Errc::range_violation, "scan: bad center wavelength");
  const double lambda0_um = center_wavelength_nm / 1000.0;
  require(bin_spacing_um() < lambda0_um / 4.0, Errc::nyquist_violation,
          "scan: bin spacing " + text::format_double(bin_spacing_um()) +
              " um violates the carrier Nyquist limit lambda0/4 = " +
              text::format_double(lambda0_um / 4.0) + " um");
}

double flux_from_power(double power_w, double wavelength_nm) {
  require(power_w >= 0.0, Errc::range_violation, "flux: negative power");
  require(wavelength_nm > 0.0, Errc::range_violation, "flux: bad wavelength");
  const double photon_energy_j = constants::planck_h * constants::speed_of_light /
                                 (wavelength_nm * 1e-9);
  return power_w / photon_energy_j;
}

double sample_arm_power(double source_power_w, double attenuation_db, double bs_factor) {
  require(source_power_w >= 0.0, Errc::range_violation, "sample arm: negative power");
  require(attenuation_db >= 0.0, Errc::range_violation, "sample arm: negative attenuation");
  require(bs_factor > 0.0 && bs_factor <= 1.0, Errc::range_violation,
          "sample arm: bs_factor must lie in (0,1]");
  // divide by the (often exactly representable) positive power of ten
  return source_power_w * bs_factor / std::pow(10.0, attenuation_db / 10.0);
}

double mean_rate(const ScanConfig& config, const SampleModel& sample, const Psf& system_psf,
                 double z_um) {
  const double lambda0_um = config.center_wavelength_nm / 1000.0;
  const double heterodyne =
      2.0 * std::sqrt(config.reference_flux_cps * config.sample_flux_peak_cps);

  double cross = 0.0;
  for (const Reflector& r : sample.reflectors) {
    const double dz = z_um - r.depth_um;
    const double env = system_psf.envelope_at(dz);
    cross += r.amplitude * env * std::cos(4.0 * M_PI * dz / lambda0_um + r.phase_rad);
  }

  const double rate = config.eta * (config.reference_flux_cps +
                                    config.sample_flux_peak_cps *
                                        sample.total_power_reflectance() +
                                    heterodyne * cross) +
                      config.dark_rate_cps;
  return rate > 0.0 ? rate : 0.0;
}

double dead_time_rate(double true_rate_cps, double dead_time_s) {
  require(true_rate_cps >= 0.0, Errc::range_violation, "dead time: negative rate");
  require(dead_time_s >= 0.0, Errc::range_violation, "dead time: negative dead time");
  return true_rate_cps / (1.0 + true_rate_cps * dead_time_s);
}

ScanRecord simulate_scan(const ScanConfig& config, const SampleModel& sample,
                         const Psf& system_psf, bool store_truth) {
  config.validate();
  sample.validate();

  const int n = config.n_bins();
  ScanRecord rec;
  rec.config = config;
  rec.positions_um.resize(n);
  rec.counts.resize(n);
  if (store_truth) rec.truth_rate_cps.resize(n);

  CountingRng rng(config.rng_seed);
  for (int k = 0; k < n; ++k) {
    const double z = config.position_um(k);
    const double observed = dead_time_rate(mean_rate(config, sample, system_psf, z),
                                           config.dead_time_s);
    rec.positions_um[k] = z;
    rec.counts[k] = rng.poisson(observed * config.counting_time_s);
    if (store_truth) rec.truth_rate_cps[k] = observed;
  }
  return rec;
}

ScanRecord simulate_scan_events(const ScanConfig& config, const SampleModel& sample,
                                const Psf& system_psf, bool store_truth) {
  config.validate();
  sample.validate();

  const int n = config.n_bins();
  ScanRecord rec;
  rec.config = config;
  rec.positions_um.resize(n);
  rec.counts.resize(n);
  if (store_truth) rec.truth_rate_cps.resize(n);

  CountingRng rng(config.rng_seed);
  const double bin_t = config.counting_time_s;
  double next_ready = 0.0;  // earliest time the detector can fire again
  for (int k = 0; k < n; ++k) {
    const double z = config.position_um(k);
    const double rate = mean_rate(config, sample, system_psf, z);
    rec.positions_um[k] = z;
    if (store_truth) rec.truth_rate_cps[k] = dead_time_rate(rate, config.dead_time_s);

    std::uint64_t registered = 0;
    if (rate > 0.0) {
      const double t_end = (k + 1) * bin_t;
      double t = k * bin_t;
      for (;;) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        t += -std::log(u) / rate;  // exponential gap to the next arrival
        if (t >= t_end) break;
        if (t >= next_ready) {
          ++registered;
          next_ready = t + config.dead_time_s;
        }
      }
    }
    rec.counts[k] = registered;
  }
  return rec;
}

std::vector<std::uint64_t> repeat_at_position(const ScanConfig& config, const SampleModel& sample,
                                              const Psf& system_psf, double z_um, int n_repeats) {
  require(n_repeats >= 2, Errc::range_violation, "repeat: need at least 2 repeats");
  sample.validate();
  const double observed =
      dead_time_rate(mean_rate(config, sample, system_psf, z_um), config.dead_time_s);
  const double mean = observed * config.counting_time_s;

  CountingRng rng(config.rng_seed);
  std::vector<std::uint64_t> counts(n_repeats);
  for (auto& c : counts) c = rng.poisson(mean);
  return counts;
}

} // namespace ocdr
