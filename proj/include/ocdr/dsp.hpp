#pragma once

#include "ocdr/scan.hpp"
#include "ocdr/spectra.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

// Axial-profile recovery from count records: DC removal and bandpass
// filtering around the fringe carrier, analytic-signal envelope
// demodulation, peak/FWHM extraction, SNR estimation, and Fano statistics.

namespace ocdr {

enum class FilterWindow { hamming, blackman };

struct FilterSpec {
  double center_spatial_freq = 0.0;  // cycles/um
  double bandwidth = 0.0;            // cycles/um, full width
  int n_taps = 0;                    // odd, >= 31
  FilterWindow window = FilterWindow::hamming;
  double design_bin_spacing_um = 0.0;  // taps are normalized to this spacing
  std::vector<double> taps;            // zero DC gain, unit passband gain at center
};

/// Windowed-sinc linear-phase bandpass centered on the fringe carrier
/// 2/lambda0. The bandwidth is `margin` times the width of the central
/// 99%-mass interval of the system spectrum mapped to spatial frequency
/// (nu -> 2 nu / c), floored at two FT bins of the scan span. Tap count is
/// automatic from the transition width unless n_taps_override is given.
FilterSpec design_bandpass(const ScanConfig& config, const SpectralDensity& system_spectrum,
                           double margin, FilterWindow window = FilterWindow::hamming,
                           int n_taps_override = 0);

/// |H(f)| of the designed filter at a spatial frequency (cycles/um).
double filter_response(const FilterSpec& spec, double spatial_freq);

/// Zero-phase application (symmetric FIR centered on each sample, edges
/// zero-padded). DC gain is 0 and passband gain 1 within 1%.
std::vector<double> bandpass_filter(std::span<const double> x, const FilterSpec& spec,
                                    double bin_spacing_um);

/// Magnitude of the analytic signal (FFT-based quadrature demodulation).
std::vector<double> demodulate_envelope(std::span<const double> filtered, const FilterSpec& spec,
                                        double bin_spacing_um);

struct Peak {
  double position_um = 0.0;  // 3-point parabolic refinement
  double height = 0.0;
  double fwhm_um = 0.0;      // NaN when the half-max region is unresolved
};

/// Local maxima above threshold_fraction of the global max, sorted by
/// position. When min_separation_um > 0, maxima closer than that to a
/// taller one are suppressed (callers pass the coherence length so ripple
/// on a lobe's crest does not split one physical peak into several).
/// Per-peak FWHM is measured on the envelope restricted to the
/// valley-to-valley region around each peak.
std::vector<Peak> find_peaks(std::span<const double> envelope, std::span<const double> z,
                             double threshold_fraction, double min_separation_um = 0.0);

struct Interval {
  double lo_um = 0.0;
  double hi_um = 0.0;
};

struct SnrEstimate {
  double snr = 0.0;
  double snr_db = 0.0;
};

/// snr = (max envelope in the signal region)^2 / variance of the filtered
/// sequence in the noise region. The noise region must lie outside every
/// coherence envelope; the regions must not overlap.
SnrEstimate estimate_snr(std::span<const double> filtered, std::span<const double> envelope,
                         std::span<const double> z, Interval signal_region,
                         Interval noise_region);

struct FanoEstimate {
  double f_hat = 0.0;
  int n_samples = 0;
  double expected_std = 0.0;  // sqrt(2/n) for Poisson data
};

/// Unbiased sample variance over sample mean.
FanoEstimate fano_factor(std::span<const double> counts);
FanoEstimate fano_factor(std::span<const std::uint64_t> counts);

struct EnvelopeResult {
  std::vector<double> z_um;
  std::vector<double> envelope;
  std::vector<Peak> peaks;
  std::optional<SnrEstimate> snr;
  double effective_bandwidth_hz = 0.0;
};

/// Full chain on one record: filter, demodulate, trim n_taps/2 bins from
/// each end, find peaks, and (when regions are given) estimate the SNR.
EnvelopeResult process_scan(const ScanRecord& record, const FilterSpec& spec,
                            double threshold_fraction,
                            std::optional<Interval> signal_region = std::nullopt,
                            std::optional<Interval> noise_region = std::nullopt,
                            double min_peak_separation_um = 0.0);

/// Post-filter electrical bandwidth: min(1/(2T), filter spatial bandwidth
/// per quadrature component x mirror speed).
double effective_bandwidth_hz(const FilterSpec& spec, const ScanConfig& config);

/// CSV export (z_um,envelope) plus a structured-text summary sidecar with
/// peaks, widths, and SNR.
void write_envelope_result(const EnvelopeResult& r, const std::string& csv_path,
                           const std::string& summary_path);

} // namespace ocdr
