#include "ocdr/dsp.hpp"

#include "ocdr/constants.hpp"
#include "ocdr/error.hpp"
#include "ocdr/fft.hpp"
#include "ocdr/kernels.hpp"
#include "ocdr/psf.hpp"
#include "ocdr/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace ocdr {
namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(M_PI * x) / (M_PI * x);
}

double window_value(FilterWindow w, int k, int n_taps) {
  const double t = 2.0 * M_PI * k / (n_taps - 1);
  switch (w) {
    case FilterWindow::hamming:
      return 0.54 - 0.46 * std::cos(t);
    case FilterWindow::blackman:
      return 0.42 - 0.5 * std::cos(t) + 0.08 * std::cos(2.0 * t);
  }
  return 1.0;
}

// Central interval holding the given mass fraction of the density, by
// interpolating the trapezoidal CDF.
std::pair<double, double> central_mass_interval(const SpectralDensity& s, double mass) {
  const double d = s.grid.spacing_hz();
  std::vector<double> cdf(s.values.size(), 0.0);
  for (std::size_t i = 1; i < s.values.size(); ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (s.values[i] + s.values[i - 1]) * d;
  const double total = cdf.back();
  const double q_lo = (1.0 - mass) / 2.0 * total;
  const double q_hi = (1.0 + mass) / 2.0 * total;

  const auto invert = [&](double q) {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), q);
    if (it == cdf.begin()) return s.grid.point(0);
    if (it == cdf.end()) return s.grid.point(s.grid.n_points - 1);
    const auto i = static_cast<int>(it - cdf.begin());
    const double t = (q - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
    return s.grid.point(i - 1) + t * d;
  };
  return {invert(q_lo), invert(q_hi)};
}

double variance_in(std::span<const double> x) {
  const double mean = kernels::sum(x) / static_cast<double>(x.size());
  return kernels::sum_sq_dev(x, mean) / static_cast<double>(x.size() - 1);
}

} // namespace

FilterSpec design_bandpass(const ScanConfig& config, const SpectralDensity& system_spectrum,
                           double margin, FilterWindow window, int n_taps_override) {
  require(margin >= 1.0, Errc::range_violation, "filter design: margin must be >= 1");
  const double dz = config.bin_spacing_um();
  require(dz > 0.0, Errc::range_violation, "filter design: bad bin spacing");

  const double lambda0_um = system_spectrum.center_wavelength_nm / 1000.0;
  const double center = 2.0 / lambda0_um;  // cycles/um

  const auto [nu_lo, nu_hi] = central_mass_interval(system_spectrum, 0.99);
  double bandwidth = margin * 2.0 * (nu_hi - nu_lo) / constants::speed_of_light_um;
  // Degenerate narrowband sources: never design below two FT bins of the scan.
  const double span_um = config.z_end_um - config.z_start_um;
  require(span_um > 0.0, Errc::range_violation, "filter design: empty scan span");
  bandwidth = std::max(bandwidth, 2.0 / span_um);
  // FilterSpec invariant: 0 < bandwidth < 2 * center.
  bandwidth = std::min(bandwidth, 1.999 * center);

  const double f1 = (center - bandwidth / 2.0) * dz;
  const double f2 = (center + bandwidth / 2.0) * dz;
  require(f2 < 0.5, Errc::nyquist_violation,
          "filter design: passband edge " + text::format_double(f2) +
              " cycles/sample exceeds Nyquist");

  int n_taps = n_taps_override;
  if (n_taps <= 0) {
    // Hamming needs ~3.3/tw taps, Blackman ~5.5/tw, for transition width tw
    // (normalized). Use half the passband width as the transition.
    const double tw = 0.5 * bandwidth * dz;
    const double factor = window == FilterWindow::hamming ? 3.3 : 5.5;
    n_taps = static_cast<int>(std::ceil(factor / tw));
    const int record_cap = config.n_bins() / 3;
    n_taps = std::min({n_taps, 8191, record_cap});
  }
  if (n_taps % 2 == 0) ++n_taps;
  require(n_taps >= 31, Errc::too_short_input,
          "filter design: record too short for a usable filter");

  FilterSpec spec;
  spec.center_spatial_freq = center;
  spec.bandwidth = bandwidth;
  spec.n_taps = n_taps;
  spec.window = window;
  spec.design_bin_spacing_um = dz;

  // Windowed-sinc bandpass as a difference of two lowpasses.
  const int m = (n_taps - 1) / 2;
  spec.taps.resize(n_taps);
  double tap_sum = 0.0;
  double win_sum = 0.0;
  for (int k = 0; k < n_taps; ++k) {
    const int t = k - m;
    const double w = window_value(window, k, n_taps);
    spec.taps[k] = (2.0 * f2 * sinc(2.0 * f2 * t) - 2.0 * f1 * sinc(2.0 * f1 * t)) * w;
    tap_sum += spec.taps[k];
    win_sum += w;
  }
  // Exact DC null: remove the residual mean, weighted by the window so the
  // taper is preserved.
  const double dc_correction = tap_sum / win_sum;
  for (int k = 0; k < n_taps; ++k)
    spec.taps[k] -= dc_correction * window_value(window, k, n_taps);
  // Unit gain at the carrier.
  const double gain = filter_response(spec, center);
  require(gain > 0.0, Errc::range_violation, "filter design: degenerate passband");
  kernels::scale(spec.taps, 1.0 / gain);

  return spec;
}

double filter_response(const FilterSpec& spec, double spatial_freq) {
  const double fn = spatial_freq * spec.design_bin_spacing_um;  // cycles/sample
  const int m = (spec.n_taps - 1) / 2;
  // Linear phase: the response relative to the center tap is real.
  double acc = 0.0;
  for (int k = 0; k < spec.n_taps; ++k)
    acc += spec.taps[k] * std::cos(2.0 * M_PI * fn * (k - m));
  return std::abs(acc);
}

std::vector<double> bandpass_filter(std::span<const double> x, const FilterSpec& spec,
                                    double bin_spacing_um) {
  require(spec.n_taps >= 31 && spec.n_taps % 2 == 1, Errc::range_violation,
          "filter: tap count must be odd and >= 31");
  require(static_cast<int>(spec.taps.size()) == spec.n_taps, Errc::invalid_argument,
          "filter: spec has no designed taps");
  require(std::abs(bin_spacing_um - spec.design_bin_spacing_um) <=
              1e-9 * spec.design_bin_spacing_um,
          Errc::invalid_argument, "filter: bin spacing differs from the design spacing");
  require(x.size() > spec.taps.size(), Errc::too_short_input,
          "filter: input not longer than the filter");

  std::vector<double> out(x.size());
  kernels::fir_same(x, spec.taps, out);
  return out;
}

std::vector<double> demodulate_envelope(std::span<const double> filtered, const FilterSpec& spec,
                                        double bin_spacing_um) {
  require(std::abs(bin_spacing_um - spec.design_bin_spacing_um) <=
              1e-9 * spec.design_bin_spacing_um,
          Errc::invalid_argument, "demodulate: bin spacing differs from the design spacing");
  const std::size_t n = filtered.size();
  require(n >= 4, Errc::too_short_input, "demodulate: input too short");

  const std::size_t p = fft::next_pow2(n);
  auto spec_fd = fft::forward_real(filtered, p);
  // Analytic signal: drop negative frequencies, double the positive ones.
  for (std::size_t k = 1; k < p / 2; ++k) spec_fd[k] *= 2.0;
  for (std::size_t k = p / 2 + 1; k < p; ++k) spec_fd[k] = {0.0, 0.0};
  const auto analytic = fft::inverse(spec_fd);

  std::vector<double> re(n), im(n), env(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = analytic[i].real();
    im[i] = analytic[i].imag();
  }
  kernels::complex_magnitude(re, im, env);
  return env;
}

std::vector<Peak> find_peaks(std::span<const double> envelope, std::span<const double> z,
                             double threshold_fraction, double min_separation_um) {
  require(envelope.size() == z.size(), Errc::invalid_argument, "find_peaks: size mismatch");
  require(threshold_fraction > 0.0 && threshold_fraction < 1.0, Errc::range_violation,
          "find_peaks: threshold fraction must lie in (0,1)");
  require(min_separation_um >= 0.0, Errc::range_violation,
          "find_peaks: negative minimum separation");
  std::vector<Peak> peaks;
  if (envelope.size() < 3) return peaks;

  const double global_max = kernels::max_value(envelope);
  if (global_max <= 0.0) return peaks;
  const double threshold = threshold_fraction * global_max;

  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < envelope.size(); ++i) {
    if (envelope[i] < threshold) continue;
    // strict rise on the left, non-rise on the right; plateaus keep their
    // left edge
    if (envelope[i] > envelope[i - 1] && envelope[i] >= envelope[i + 1]) idx.push_back(i);
  }

  if (min_separation_um > 0.0 && idx.size() > 1) {
    // greedy non-maximum suppression, tallest first
    std::vector<std::size_t> by_height = idx;
    std::sort(by_height.begin(), by_height.end(),
              [&](std::size_t a, std::size_t b) { return envelope[a] > envelope[b]; });
    std::vector<std::size_t> kept;
    for (std::size_t cand : by_height) {
      bool clear = true;
      for (std::size_t k : kept)
        if (std::abs(z[cand] - z[k]) < min_separation_um) {
          clear = false;
          break;
        }
      if (clear) kept.push_back(cand);
    }
    std::sort(kept.begin(), kept.end());
    idx = std::move(kept);
  }

  for (std::size_t p = 0; p < idx.size(); ++p) {
    const std::size_t i = idx[p];
    Peak peak;
    // parabolic refinement through the three samples around the maximum
    const double alpha = envelope[i - 1];
    const double beta = envelope[i];
    const double gamma = envelope[i + 1];
    const double denom = alpha - 2.0 * beta + gamma;
    double delta = 0.0;
    if (denom < 0.0) delta = 0.5 * (alpha - gamma) / denom;
    delta = std::clamp(delta, -0.5, 0.5);
    const double dz = z[i + 1] - z[i];
    peak.position_um = z[i] + delta * dz;
    peak.height = beta - 0.25 * (alpha - gamma) * delta;

    // FWHM on the valley-to-valley region around this peak.
    std::size_t lo = p > 0 ? idx[p - 1] : 0;
    std::size_t hi = p + 1 < idx.size() ? idx[p + 1] : envelope.size() - 1;
    if (p > 0) {
      lo = idx[p - 1];
      for (std::size_t j = idx[p - 1]; j <= i; ++j)
        if (envelope[j] < envelope[lo]) lo = j;
    }
    if (p + 1 < idx.size()) {
      hi = i;
      for (std::size_t j = i; j <= idx[p + 1]; ++j)
        if (envelope[j] < envelope[hi]) hi = j;
    }
    try {
      peak.fwhm_um = measure_fwhm(envelope.subspan(lo, hi - lo + 1), z.subspan(lo, hi - lo + 1));
    } catch (const Error&) {
      peak.fwhm_um = std::numeric_limits<double>::quiet_NaN();
    }
    peaks.push_back(peak);
  }
  return peaks;
}

SnrEstimate estimate_snr(std::span<const double> filtered, std::span<const double> envelope,
                         std::span<const double> z, Interval signal_region,
                         Interval noise_region) {
  require(filtered.size() == envelope.size() && filtered.size() == z.size(),
          Errc::invalid_argument, "estimate_snr: size mismatch");
  require(signal_region.hi_um > signal_region.lo_um && noise_region.hi_um > noise_region.lo_um,
          Errc::empty_region, "estimate_snr: empty region");
  const bool disjoint = signal_region.hi_um <= noise_region.lo_um ||
                        noise_region.hi_um <= signal_region.lo_um;
  require(disjoint, Errc::region_overlap, "estimate_snr: regions overlap");

  const auto index_range = [&](const Interval& r) -> std::pair<std::size_t, std::size_t> {
    std::size_t lo = z.size(), hi = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (z[i] >= r.lo_um && z[i] <= r.hi_um) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
      }
    }
    require(lo < z.size() && hi > lo, Errc::empty_region,
            "estimate_snr: region selects fewer than 2 bins");
    return {lo, hi};
  };

  const auto [s_lo, s_hi] = index_range(signal_region);
  const auto [n_lo, n_hi] = index_range(noise_region);

  const double peak = kernels::max_value(envelope.subspan(s_lo, s_hi - s_lo + 1));
  const double noise_var = variance_in(filtered.subspan(n_lo, n_hi - n_lo + 1));
  require(noise_var > 1e-300, Errc::degenerate_noise,
          "estimate_snr: noise region variance is numerically zero");

  SnrEstimate est;
  est.snr = peak * peak / noise_var;
  est.snr_db = 10.0 * std::log10(est.snr);
  return est;
}

FanoEstimate fano_factor(std::span<const double> counts) {
  require(counts.size() >= 2, Errc::range_violation, "fano: need at least 2 samples");
  const auto n = static_cast<double>(counts.size());
  const double mean = kernels::sum(counts) / n;
  require(mean > 0.0, Errc::zero_mean, "fano: zero-mean counts");
  const double var = kernels::sum_sq_dev(counts, mean) / (n - 1.0);

  FanoEstimate est;
  est.f_hat = var / mean;
  est.n_samples = static_cast<int>(counts.size());
  est.expected_std = std::sqrt(2.0 / n);
  return est;
}

FanoEstimate fano_factor(std::span<const std::uint64_t> counts) {
  std::vector<double> v(counts.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(counts[i]);
  return fano_factor(std::span<const double>(v));
}

EnvelopeResult process_scan(const ScanRecord& record, const FilterSpec& spec,
                            double threshold_fraction, std::optional<Interval> signal_region,
                            std::optional<Interval> noise_region,
                            double min_peak_separation_um) {
  const double dz = record.config.bin_spacing_um();
  std::vector<double> x(record.counts.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(record.counts[i]);

  const auto filtered = bandpass_filter(x, spec, dz);
  const auto envelope = demodulate_envelope(filtered, spec, dz);

  // Discard the filter transient at both ends before any statistics.
  const std::size_t trim = static_cast<std::size_t>(spec.n_taps) / 2;
  require(x.size() > 2 * trim + 8, Errc::too_short_input,
          "process_scan: record shorter than the filter transients");
  const std::size_t n = x.size() - 2 * trim;

  EnvelopeResult result;
  result.z_um.assign(record.positions_um.begin() + trim, record.positions_um.begin() + trim + n);
  result.envelope.assign(envelope.begin() + trim, envelope.begin() + trim + n);
  result.peaks =
      find_peaks(result.envelope, result.z_um, threshold_fraction, min_peak_separation_um);
  result.effective_bandwidth_hz = effective_bandwidth_hz(spec, record.config);

  if (signal_region && noise_region) {
    const std::vector<double> filtered_trimmed(filtered.begin() + trim,
                                               filtered.begin() + trim + n);
    result.snr = estimate_snr(filtered_trimmed, result.envelope, result.z_um, *signal_region,
                              *noise_region);
  }
  return result;
}

double effective_bandwidth_hz(const FilterSpec& spec, const ScanConfig& config) {
  const double counting_limit = 1.0 / (2.0 * config.counting_time_s);
  const double speed_um_s = config.mirror_speed_mm_s * 1000.0;
  // Per quadrature component the filter passes bandwidth/2 in spatial
  // frequency; the mirror speed converts cycles/um to Hz.
  const double filter_limit = spec.bandwidth / 2.0 * speed_um_s;
  return std::min(counting_limit, filter_limit);
}

void write_envelope_result(const EnvelopeResult& r, const std::string& csv_path,
                           const std::string& summary_path) {
  {
    std::ofstream out(csv_path);
    require(out.good(), Errc::io_failure, "cannot open " + csv_path);
    out << "z_um,envelope\n";
    for (std::size_t i = 0; i < r.z_um.size(); ++i)
      out << text::format_double(r.z_um[i]) << "," << text::format_double(r.envelope[i]) << "\n";
    require(out.good(), Errc::io_failure, "write failed: " + csv_path);
  }
  std::ofstream out(summary_path);
  require(out.good(), Errc::io_failure, "cannot open " + summary_path);
  out << "# ocdr envelope summary\n";
  out << "n_peaks = " << r.peaks.size() << "\n";
  for (std::size_t i = 0; i < r.peaks.size(); ++i) {
    out << "peak_" << i << "_position_um = " << text::format_double(r.peaks[i].position_um)
        << "\n";
    out << "peak_" << i << "_height = " << text::format_double(r.peaks[i].height) << "\n";
    out << "peak_" << i << "_fwhm_um = " << text::format_double(r.peaks[i].fwhm_um) << "\n";
  }
  out << "effective_bandwidth_hz = " << text::format_double(r.effective_bandwidth_hz) << "\n";
  if (r.snr) {
    out << "snr = " << text::format_double(r.snr->snr) << "\n";
    out << "snr_db = " << text::format_double(r.snr->snr_db) << "\n";
  }
  require(out.good(), Errc::io_failure, "write failed: " + summary_path);
}

} // namespace ocdr
