#pragma once

#include "ocdr/psf.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Synthetic photon-count axial scans: fringe-modulated mean rates from the
// interferometer model, exact Poisson sampling, dark counts, and
// nonparalyzable dead-time saturation.

namespace ocdr {

struct Reflector {
  double depth_um = 0.0;    // optical depth (refractive index already applied)
  double amplitude = 0.0;   // amplitude reflectance in [0,1]
  double phase_rad = 0.0;
};

struct SampleModel {
  std::vector<Reflector> reflectors;  // depths strictly increasing; sum r^2 <= 1
  std::string description;

  void validate() const;
  double total_power_reflectance() const;  // sum of r_i^2
};

struct ScanConfig {
  double z_start_um = 0.0;
  double z_end_um = 0.0;
  double mirror_speed_mm_s = 0.0;
  double counting_time_s = 0.0;       // per bin
  double reference_flux_cps = 0.0;    // photons/s at the detector
  double sample_flux_peak_cps = 0.0;  // photons/s before reflectance weighting
  double eta = 0.0;                   // scalar quantum efficiency
  double dark_rate_cps = 0.0;
  double dead_time_s = 0.0;
  std::uint64_t rng_seed = 0;
  double center_wavelength_nm = 0.0;  // fringe carrier

  double bin_spacing_um() const { return mirror_speed_mm_s * 1000.0 * counting_time_s; }
  int n_bins() const;
  double position_um(int bin) const;  // bin center
  void validate() const;              // throws nyquist_violation / range_violation
};

struct ScanRecord {
  ScanConfig config;
  std::vector<double> positions_um;
  std::vector<std::uint64_t> counts;
  std::vector<double> truth_rate_cps;  // observed (post-dead-time) mean rate; optional
  int format_version = 1;
};

/// power/(h c / lambda)
double flux_from_power(double power_w, double wavelength_nm);

/// source_power * bs_factor * 10^(-attenuation_db/10). The default
/// bs_factor 0.25 is two passes through a 50/50 splitter.
double sample_arm_power(double source_power_w, double attenuation_db, double bs_factor = 0.25);

/// Pre-dead-time detected rate at mirror position z:
///   eta * [ Phi_R + Phi_S sum r^2
///           + 2 sqrt(Phi_R Phi_S) sum_i r_i env(z - z_i) cos(4 pi (z - z_i)/lambda0 + phi_i) ]
///   + dark rate,
/// clamped at zero (overlapping coherent reflectors can drive the model
/// transiently negative). env is the PSF envelope, which must span every
/// |z - z_i| the scan needs or mean_rate throws psf_range.
double mean_rate(const ScanConfig& config, const SampleModel& sample, const Psf& system_psf,
                 double z_um);

/// Nonparalyzable saturation: observed = rate / (1 + rate * dead_time).
double dead_time_rate(double true_rate_cps, double dead_time_s);

/// One seeded axial scan; bit-identical for identical (seed, config, sample).
/// Bins are generated sequentially from a single RNG stream.
ScanRecord simulate_scan(const ScanConfig& config, const SampleModel& sample,
                         const Psf& system_psf, bool store_truth = false);

/// Event-level variant: exponential inter-arrival times at the bin's true
/// rate, with a detection registered only after the nonparalyzable dead
/// time has elapsed (carried across bin boundaries). Validates the
/// rate-compression approximation used by simulate_scan at high rates.
ScanRecord simulate_scan_events(const ScanConfig& config, const SampleModel& sample,
                                const Psf& system_psf, bool store_truth = false);

/// Independent Poisson draws at a fixed mirror position.
std::vector<std::uint64_t> repeat_at_position(const ScanConfig& config, const SampleModel& sample,
                                              const Psf& system_psf, double z_um, int n_repeats);

// Line-oriented record persistence: `# key = value` header covering every
// config field plus format_version and the bin count, then position_um,counts
// rows. The roundtrip is bit-exact.
void write_scan_record(const ScanRecord& record, const std::string& path);
ScanRecord read_scan_record(const std::string& path);

} // namespace ocdr
