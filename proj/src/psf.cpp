#include "ocdr/psf.hpp"

#include "ocdr/constants.hpp"
#include "ocdr/error.hpp"
#include "ocdr/fft.hpp"
#include "ocdr/kernels.hpp"
#include "ocdr/scan.hpp"
#include "ocdr/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ocdr {
namespace {

constexpr double kMaxInternalDzUm = 0.05;

// Count disjoint runs of samples >= level; used to classify missing-crossing
// failures as ambiguous (several above-half regions) or simply peakless.
int regions_above(std::span<const double> v, double level) {
  int regions = 0;
  bool inside = false;
  for (double x : v) {
    const bool above = x >= level;
    if (above && !inside) ++regions;
    inside = above;
  }
  return regions;
}

} // namespace

double Psf::envelope_at(double z) const {
  const double a = std::abs(z);  // even envelope
  require(!z_um.empty(), Errc::invalid_argument, "psf: empty envelope");
  require(a <= z_max_um() * (1.0 + 1e-12), Errc::psf_range,
          "psf: envelope queried at |z| = " + text::format_double(a) + " um beyond range " +
              text::format_double(z_max_um()) + " um");
  const double dz = dz_um();
  // z grid is symmetric about 0: index of z=0 is (n-1)/2
  const double pos = (z - z_um.front()) / dz;
  const auto i = static_cast<std::size_t>(std::clamp(
      pos, 0.0, static_cast<double>(z_um.size() - 2)));
  const double t = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
  return envelope[i] + t * (envelope[i + 1] - envelope[i]);
}

Psf point_spread(const SpectralDensity& spectrum, double z_range_um, int z_points) {
  require(z_range_um > 0.0, Errc::range_violation, "point_spread: z_range must be positive");
  require(z_points >= 256, Errc::range_violation, "point_spread: need at least 256 z samples");
  require(std::abs(spectrum.integral() - 1.0) < 1e-6, Errc::range_violation,
          "point_spread: spectrum must be normalized");

  const double lambda0_um = spectrum.center_wavelength_nm / 1000.0;
  const double dz_out = 2.0 * z_range_um / (z_points - 1);
  require(dz_out <= lambda0_um / 8.0, Errc::undersampled_z,
          "point_spread: z spacing " + text::format_double(dz_out) +
              " um exceeds lambda0/8 = " + text::format_double(lambda0_um / 8.0) + " um");

  const double dnu = spectrum.grid.spacing_hz();
  // Padded length: >= 4x the spectral samples, and fine enough that the
  // internal delay grid lands below kMaxInternalDzUm.
  const auto min_for_dz = static_cast<std::size_t>(
      std::ceil(constants::speed_of_light_um / (2.0 * dnu * kMaxInternalDzUm)));
  const std::size_t n_fft =
      fft::next_pow2(std::max<std::size_t>(4 * spectrum.values.size(), min_for_dz));

  const double dz_fft = constants::speed_of_light_um / (2.0 * static_cast<double>(n_fft) * dnu);
  // Delays are unambiguous only out to 1/(2 dnu).
  const double z_reach = constants::speed_of_light_um / (4.0 * dnu);
  require(z_range_um <= z_reach, Errc::range_violation,
          "point_spread: z_range exceeds the delay reach c/(4 dnu) = " +
              text::format_double(z_reach) + " um of this grid");

  const auto spec = fft::forward_real(spectrum.values, n_fft);

  // One-sided magnitude out to the requested range (plus one bin for interpolation).
  const auto k_max = std::min<std::size_t>(
      n_fft / 2, static_cast<std::size_t>(std::ceil(z_range_um / dz_fft)) + 1);
  std::vector<double> re(k_max + 1), im(k_max + 1), mag(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    re[k] = spec[k].real();
    im[k] = spec[k].imag();
  }
  kernels::complex_magnitude(re, im, mag);
  const double peak = mag[0];  // |FT| of a nonnegative density peaks at zero delay
  require(peak > 0.0, Errc::range_violation, "point_spread: degenerate spectrum");

  // FWHM from the fine internal grid, mirrored to two sides.
  std::vector<double> z2(2 * k_max + 1), e2(2 * k_max + 1);
  for (std::size_t k = 0; k <= 2 * k_max; ++k) {
    const auto dist = static_cast<std::size_t>(
        std::llabs(static_cast<long long>(k) - static_cast<long long>(k_max)));
    z2[k] = (static_cast<double>(k) - static_cast<double>(k_max)) * dz_fft;
    e2[k] = mag[dist] / peak;
  }

  Psf out;
  out.fwhm_um = measure_fwhm(e2, z2);
  out.coherence_length_um = out.fwhm_um;

  // Resample onto the requested symmetric grid.
  out.z_um.resize(z_points);
  out.envelope.resize(z_points);
  for (int i = 0; i < z_points; ++i) {
    const double z = -z_range_um + i * dz_out;
    out.z_um[i] = z;
    const double a = std::abs(z) / dz_fft;
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(a), k_max - 1);
    const double t = a - static_cast<double>(k);
    out.envelope[i] = (mag[k] + t * (mag[k + 1] - mag[k])) / peak;
  }
  const double m = kernels::max_value(out.envelope);
  kernels::scale(out.envelope, 1.0 / m);
  return out;
}

double measure_fwhm(std::span<const double> envelope, std::span<const double> z) {
  require(envelope.size() == z.size(), Errc::invalid_argument, "measure_fwhm: size mismatch");
  require(envelope.size() >= 3, Errc::no_peak, "measure_fwhm: too few samples");

  std::size_t pk = 0;
  for (std::size_t i = 1; i < envelope.size(); ++i)
    if (envelope[i] > envelope[pk]) pk = i;
  const double peak = envelope[pk];
  require(peak > 0.0, Errc::no_peak, "measure_fwhm: no positive peak");
  const double half = 0.5 * peak;

  const auto missing_crossing = [&]() -> void {
    if (regions_above(envelope, half) > 1)
      fail(Errc::ambiguous_peak,
           "measure_fwhm: several regions above half max and the peak's own crossings are "
           "incomplete");
    fail(Errc::no_peak, "measure_fwhm: peak does not drop below half max on both sides");
  };

  std::size_t j = pk;
  while (j > 0 && envelope[j - 1] >= half) --j;
  if (j == 0) missing_crossing();
  const double tl = (half - envelope[j - 1]) / (envelope[j] - envelope[j - 1]);
  const double z_left = z[j - 1] + tl * (z[j] - z[j - 1]);

  std::size_t k = pk;
  while (k + 1 < envelope.size() && envelope[k + 1] >= half) ++k;
  if (k + 1 == envelope.size()) missing_crossing();
  const double tr = (half - envelope[k]) / (envelope[k + 1] - envelope[k]);
  const double z_right = z[k] + tr * (z[k + 1] - z[k]);

  return z_right - z_left;
}

std::vector<double> coherence_interferogram(const SpectralDensity& spectrum,
                                            std::span<const double> z_um) {
  const double dnu = spectrum.grid.spacing_hz();
  const int n = spectrum.grid.n_points;
  std::vector<double> fringe(z_um.size());
  for (std::size_t j = 0; j < z_um.size(); ++j) {
    const double tau = 2.0 * z_um[j] / constants::speed_of_light_um;
    // rotate through the grid: e^{-i 2 pi nu_i tau} by complex recurrence
    const std::complex<double> step{std::cos(2.0 * M_PI * dnu * tau),
                                    -std::sin(2.0 * M_PI * dnu * tau)};
    std::complex<double> rot{std::cos(2.0 * M_PI * spectrum.grid.nu_min_hz * tau),
                             -std::sin(2.0 * M_PI * spectrum.grid.nu_min_hz * tau)};
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      acc += spectrum.values[i] * rot;
      rot *= step;
    }
    fringe[j] = acc.real() * dnu;
  }
  return fringe;
}

SpectralDensity spectrum_from_interferogram(std::span<const double> signal, double bin_spacing_um,
                                            double nu_lo_hz, double nu_hi_hz) {
  require(signal.size() >= 64, Errc::too_short_input,
          "spectrum recovery: need at least 64 samples");
  require(bin_spacing_um > 0.0, Errc::range_violation, "spectrum recovery: bad bin spacing");
  require(nu_hi_hz > nu_lo_hz && nu_lo_hz > 0.0, Errc::range_violation,
          "spectrum recovery: bad frequency band");

  std::vector<double> x(signal.begin(), signal.end());
  const double mean = kernels::sum(x) / static_cast<double>(x.size());
  for (double& v : x) v -= mean;

  const std::size_t n_fft = fft::next_pow2(4 * x.size());
  const auto spec = fft::forward_real(x, n_fft);

  // FT bin k sits at spatial frequency k/(n_fft dz); nu = c f / 2.
  const double dnu =
      constants::speed_of_light_um / (2.0 * static_cast<double>(n_fft) * bin_spacing_um);
  const double nyquist_nu = dnu * static_cast<double>(n_fft / 2);
  require(nu_hi_hz <= nyquist_nu, Errc::undersampled_z,
          "spectrum recovery: requested band exceeds the sampling Nyquist");

  const auto k_lo = static_cast<std::size_t>(std::ceil(nu_lo_hz / dnu));
  const auto k_hi = static_cast<std::size_t>(std::floor(nu_hi_hz / dnu));
  require(k_lo >= 1 && k_hi > k_lo && k_hi - k_lo + 1 >= 16, Errc::range_violation,
          "spectrum recovery: band too narrow for this record");

  const std::size_t count = k_hi - k_lo + 1;
  std::vector<double> re(count), im(count), mag(count);
  for (std::size_t k = 0; k < count; ++k) {
    re[k] = spec[k_lo + k].real();
    im[k] = spec[k_lo + k].imag();
  }
  kernels::complex_magnitude(re, im, mag);

  const FrequencyGrid grid(dnu * static_cast<double>(k_lo), dnu * static_cast<double>(k_hi),
                           static_cast<int>(count));
  return SpectralDensity::from_samples(grid, std::move(mag));
}

SpectralDensity spectrum_from_interferogram(const ScanRecord& record, double nu_lo_hz,
                                            double nu_hi_hz) {
  const double dz = record.config.bin_spacing_um();
  const double lambda0_um = record.config.center_wavelength_nm / 1000.0;
  require(dz < lambda0_um / 4.0, Errc::undersampled_z,
          "spectrum recovery: bin spacing violates carrier Nyquist");

  std::vector<double> x(record.counts.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(record.counts[i]);

  // The fringe envelope must have died out by the scan edges, or the
  // truncation corrupts the recovered shape. Heuristic: fringe swing at the
  // edges small compared to the largest swing anywhere.
  const double mean = kernels::sum(x) / static_cast<double>(x.size());
  std::vector<double> centered(x);
  for (double& v : centered) v -= mean;
  const std::size_t w = std::max<std::size_t>(16, centered.size() / 40);
  require(centered.size() > 4 * w, Errc::too_short_input, "spectrum recovery: record too short");
  double max_abs = 0.0;
  for (double v : centered) max_abs = std::max(max_abs, std::abs(v));
  const double edge_front = std::sqrt(
      kernels::sum_sq_dev(std::span(centered).subspan(0, w), 0.0) / static_cast<double>(w));
  const double edge_back = std::sqrt(
      kernels::sum_sq_dev(std::span(centered).subspan(centered.size() - w, w), 0.0) /
      static_cast<double>(w));
  require(std::max(edge_front, edge_back) <= 0.25 * max_abs, Errc::truncated_envelope,
          "spectrum recovery: envelope not contained within the scan");

  return spectrum_from_interferogram(x, dz, nu_lo_hz, nu_hi_hz);
}

void write_psf(const Psf& p, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), Errc::io_failure, "cannot open " + path);
  out << "# ocdr psf\n";
  out << "# fwhm_um = " << text::format_double(p.fwhm_um) << "\n";
  out << "# coherence_length_um = " << text::format_double(p.coherence_length_um) << "\n";
  out << "z_um,envelope\n";
  for (std::size_t i = 0; i < p.z_um.size(); ++i)
    out << text::format_double(p.z_um[i]) << "," << text::format_double(p.envelope[i]) << "\n";
  require(out.good(), Errc::io_failure, "write failed: " + path);
}

} // namespace ocdr
