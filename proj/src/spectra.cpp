#include "ocdr/spectra.hpp"

#include "ocdr/constants.hpp"
#include "ocdr/error.hpp"
#include "ocdr/kernels.hpp"
#include "ocdr/psf.hpp"
#include "ocdr/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ocdr {
namespace {

double trapezoid(std::span<const double> values, double spacing) {
  if (values.size() < 2) return 0.0;
  return spacing * (kernels::sum(values) - 0.5 * (values.front() + values.back()));
}

double wavelength_nm_of(double nu_hz) { return constants::speed_of_light_nm / nu_hz; }

} // namespace

FrequencyGrid::FrequencyGrid(double nu_min, double nu_max, int n)
    : nu_min_hz(nu_min), nu_max_hz(nu_max), n_points(n) {
  require(nu_min > 0.0, Errc::range_violation, "grid: nu_min must be positive");
  require(nu_max > nu_min, Errc::range_violation, "grid: nu_max must exceed nu_min");
  require(n >= 16, Errc::range_violation, "grid: need at least 16 points");
}

std::vector<double> FrequencyGrid::points() const {
  std::vector<double> p(n_points);
  const double d = spacing_hz();
  for (int i = 0; i < n_points; ++i) p[i] = nu_min_hz + i * d;
  return p;
}

SpectralDensity SpectralDensity::from_samples(const FrequencyGrid& grid,
                                              std::vector<double> values) {
  require(static_cast<int>(values.size()) == grid.n_points, Errc::range_violation,
          "spectral density: sample count does not match grid");
  for (double v : values)
    require(v >= 0.0 && std::isfinite(v), Errc::range_violation,
            "spectral density: values must be finite and nonnegative");

  const double integral = trapezoid(values, grid.spacing_hz());
  require(integral > 0.0, Errc::range_violation, "spectral density: zero total mass");
  kernels::scale(values, 1.0 / integral);

  // Spectral centroid, reported as a wavelength.
  std::vector<double> nu_weighted(values.size());
  const std::vector<double> nu = grid.points();
  kernels::multiply(nu, values, nu_weighted);
  const double centroid_hz = trapezoid(nu_weighted, grid.spacing_hz()) /
                             trapezoid(values, grid.spacing_hz());

  SpectralDensity s;
  s.grid = grid;
  s.values = std::move(values);
  s.center_wavelength_nm = wavelength_nm_of(centroid_hz);
  return s;
}

double SpectralDensity::integral() const { return trapezoid(values, grid.spacing_hz()); }

SpectralDensity make_gaussian_source(double center_wavelength_nm, double fwhm_wavelength_nm,
                                     const FrequencyGrid& grid, double max_clipped_mass) {
  require(center_wavelength_nm > 0.0, Errc::range_violation, "gaussian source: bad center");
  require(fwhm_wavelength_nm > 0.0, Errc::range_violation, "gaussian source: bad fwhm");

  const double nu0 = constants::speed_of_light_nm / center_wavelength_nm;
  // d(nu) = c/lambda^2 d(lambda) at the center wavelength
  const double fwhm_hz = constants::speed_of_light_nm * fwhm_wavelength_nm /
                         (center_wavelength_nm * center_wavelength_nm);
  const double sigma = fwhm_hz / (2.0 * std::sqrt(2.0 * std::log(2.0)));

  const double clipped =
      0.5 * std::erfc((nu0 - grid.nu_min_hz) / (sigma * std::sqrt(2.0))) +
      0.5 * std::erfc((grid.nu_max_hz - nu0) / (sigma * std::sqrt(2.0)));
  require(clipped <= max_clipped_mass, Errc::grid_too_narrow,
          "gaussian source: grid clips " + text::format_double(clipped) + " of the spectrum");

  std::vector<double> v(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double d = (grid.point(i) - nu0) / sigma;
    v[i] = std::exp(-0.5 * d * d);
  }
  return SpectralDensity::from_samples(grid, std::move(v));
}

SpectralDensity make_spdc_source(double pump_wavelength_nm, double bandwidth_hz,
                                 SpdcShape::Value shape, const FrequencyGrid& grid,
                                 double max_clipped_mass) {
  require(pump_wavelength_nm > 0.0, Errc::range_violation, "spdc source: bad pump wavelength");
  require(bandwidth_hz > 0.0, Errc::range_violation, "spdc source: bad bandwidth");

  // Degenerate center: signal and idler symmetric about half the pump frequency.
  const double nu_c = constants::speed_of_light_nm / pump_wavelength_nm / 2.0;
  require(grid.contains(nu_c), Errc::range_violation,
          "spdc source: degenerate center falls outside the grid");

  if (shape == SpdcShape::gaussian) {
    if (max_clipped_mass < 0.0) max_clipped_mass = 1e-6;
    const double sigma = bandwidth_hz / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double clipped =
        0.5 * std::erfc((nu_c - grid.nu_min_hz) / (sigma * std::sqrt(2.0))) +
        0.5 * std::erfc((grid.nu_max_hz - nu_c) / (sigma * std::sqrt(2.0)));
    require(clipped <= max_clipped_mass, Errc::grid_too_narrow,
            "spdc source: grid clips " + text::format_double(clipped) + " of the spectrum");
    std::vector<double> v(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
      const double d = (grid.point(i) - nu_c) / sigma;
      v[i] = std::exp(-0.5 * d * d);
    }
    return SpectralDensity::from_samples(grid, std::move(v));
  }

  // sinc^2 with first zeros at nu_c +- bandwidth. The 1/detuning^2 tails make
  // a gaussian-grade clip tolerance unattainable on any finite grid, so the
  // rule here is: main lobe fully on the grid, and clipped mass (against the
  // analytic total, which is exactly `bandwidth`) under a looser default.
  if (max_clipped_mass < 0.0) max_clipped_mass = 0.05;
  require(grid.contains(nu_c - bandwidth_hz) && grid.contains(nu_c + bandwidth_hz),
          Errc::grid_too_narrow, "spdc source: main lobe clipped by the grid");
  std::vector<double> v(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = M_PI * (grid.point(i) - nu_c) / bandwidth_hz;
    v[i] = std::abs(x) < 1e-8 ? 1.0 : (std::sin(x) / x) * (std::sin(x) / x);
  }
  const double on_grid = trapezoid(v, grid.spacing_hz());
  const double clipped = 1.0 - on_grid / bandwidth_hz;
  require(clipped <= max_clipped_mass, Errc::grid_too_narrow,
          "spdc source: grid clips " + text::format_double(clipped) + " of the spectrum");
  return SpectralDensity::from_samples(grid, std::move(v));
}

DetectorModel make_detector(DetectorKind kind, const FrequencyGrid& grid,
                            const DetectorParams& p) {
  require(p.qe_max > 0.0 && p.qe_max <= 1.0, Errc::range_violation,
          "detector: qe_max must lie in (0,1]");
  require(p.dark_rate_cps >= 0.0, Errc::range_violation, "detector: negative dark rate");
  require(p.dead_time_s >= 0.0, Errc::range_violation, "detector: negative dead time");

  std::vector<double> qe(grid.n_points, 0.0);
  switch (kind) {
    case DetectorKind::ideal_flat:
      std::fill(qe.begin(), qe.end(), p.qe_max);
      break;

    case DetectorKind::spad: {
      require(p.spad_transition_nm > 0.0 && p.spad_transition_nm < p.spad_cutoff_nm,
              Errc::range_violation, "detector: bad spad transition width");
      const double lo = p.spad_cutoff_nm - p.spad_transition_nm;
      for (int i = 0; i < grid.n_points; ++i) {
        const double lambda = wavelength_nm_of(grid.point(i));
        if (lambda >= p.spad_cutoff_nm) {
          qe[i] = 0.0;
        } else if (lambda <= lo) {
          qe[i] = p.qe_max;
        } else {
          qe[i] = p.qe_max * 0.5 * (1.0 + std::cos(M_PI * (lambda - lo) / p.spad_transition_nm));
        }
      }
      break;
    }

    case DetectorKind::sspd: {
      require(p.sspd_qe_ref > 0.0 && p.sspd_qe_ref <= 1.0, Errc::range_violation,
              "detector: sspd qe_ref must lie in (0,1]");
      require(p.sspd_lambda_decay_nm > 0.0, Errc::range_violation,
              "detector: sspd decay length must be positive");
      for (int i = 0; i < grid.n_points; ++i) {
        const double lambda = wavelength_nm_of(grid.point(i));
        qe[i] = std::min(
            1.0, p.sspd_qe_ref *
                     std::exp(-(lambda - p.sspd_lambda_ref_nm) / p.sspd_lambda_decay_nm));
      }
      break;
    }

    case DetectorKind::ingaas: {
      require(p.ingaas_band_hi_nm > p.ingaas_band_lo_nm && p.ingaas_edge_nm > 0.0,
              Errc::range_violation, "detector: bad ingaas band");
      for (int i = 0; i < grid.n_points; ++i) {
        const double lambda = wavelength_nm_of(grid.point(i));
        double g = 0.0;
        if (lambda >= p.ingaas_band_lo_nm && lambda <= p.ingaas_band_hi_nm) {
          g = 1.0;
        } else if (lambda > p.ingaas_band_lo_nm - p.ingaas_edge_nm &&
                   lambda < p.ingaas_band_lo_nm) {
          g = 0.5 * (1.0 + std::cos(M_PI * (p.ingaas_band_lo_nm - lambda) / p.ingaas_edge_nm));
        } else if (lambda > p.ingaas_band_hi_nm &&
                   lambda < p.ingaas_band_hi_nm + p.ingaas_edge_nm) {
          g = 0.5 * (1.0 + std::cos(M_PI * (lambda - p.ingaas_band_hi_nm) / p.ingaas_edge_nm));
        }
        qe[i] = p.qe_max * g;
      }
      break;
    }

    case DetectorKind::custom: {
      if (p.custom_table.empty()) {
        std::fill(qe.begin(), qe.end(), p.qe_max);
        break;
      }
      auto table = p.custom_table;
      std::sort(table.begin(), table.end());
      for (auto& [lambda, q] : table)
        require(q >= 0.0 && q <= 1.0, Errc::range_violation,
                "detector: custom table qe must lie in [0,1]");
      for (int i = 0; i < grid.n_points; ++i) {
        const double lambda = wavelength_nm_of(grid.point(i));
        if (lambda < table.front().first || lambda > table.back().first) {
          qe[i] = 0.0;
          continue;
        }
        auto hi = std::lower_bound(table.begin(), table.end(), std::make_pair(lambda, -1.0));
        if (hi == table.begin()) {
          qe[i] = hi->second;
        } else {
          auto lo = std::prev(hi);
          const double t = (lambda - lo->first) / (hi->first - lo->first);
          qe[i] = lo->second + t * (hi->second - lo->second);
        }
      }
      break;
    }
  }

  DetectorModel model;
  model.response = ResponseCurve{grid, std::move(qe)};
  model.dark_rate_cps = p.dark_rate_cps;
  model.dead_time_s = p.dead_time_s;
  model.kind = kind;
  return model;
}

BiasPoint sspd_bias_point(const SspdBiasLaw& law) {
  require(law.bias_ratio > 0.0 && law.bias_ratio < 1.0, Errc::range_violation,
          "bias law: bias ratio must lie in (0,1)");
  const bool cold = law.temperature_k == 2.0;
  require(cold || law.temperature_k == 4.2, Errc::range_violation,
          "bias law: supported temperatures are 2.0 K and 4.2 K");

  const double eta_max = cold ? law.eta_max_2k : law.eta_max_4k;
  const double dark_scale = cold ? law.dark_scale_2k_cps : law.dark_scale_4k_cps;

  BiasPoint pt;
  pt.eta = eta_max / (1.0 + std::exp(-(law.bias_ratio - law.bias_mid) / law.bias_width));
  pt.dark_rate_cps = dark_scale * std::exp(law.dark_slope * (law.bias_ratio - 1.0));
  return pt;
}

SystemSpectrum system_spectrum(const SpectralDensity& source, const DetectorModel& detector) {
  require(source.grid == detector.response.grid, Errc::grid_mismatch,
          "system spectrum: source and detector grids differ");

  std::vector<double> product(source.values.size());
  kernels::multiply(source.values, detector.response.qe, product);

  const double spacing = source.grid.spacing_hz();
  const double product_mass = trapezoid(product, spacing);
  require(product_mass >= 1e-12, Errc::zero_overlap,
          "system spectrum: source and detector response do not overlap");

  SystemSpectrum out;
  out.effective_eta = product_mass / trapezoid(source.values, spacing);
  out.spectrum = SpectralDensity::from_samples(source.grid, std::move(product));
  return out;
}

WavelengthDensity to_wavelength_density(const SpectralDensity& s) {
  WavelengthDensity w;
  const int n = s.grid.n_points;
  w.wavelength_nm.resize(n);
  w.values.resize(n);
  // nu ascending -> lambda descending; reverse so wavelength ascends.
  for (int i = 0; i < n; ++i) {
    const double nu = s.grid.point(n - 1 - i);
    const double lambda = wavelength_nm_of(nu);
    w.wavelength_nm[i] = lambda;
    w.values[i] = s.values[n - 1 - i] * constants::speed_of_light_nm / (lambda * lambda);
  }
  return w;
}

double mass_fraction_beyond(const SpectralDensity& s, double wavelength_nm) {
  require(wavelength_nm > 0.0, Errc::range_violation, "mass fraction: bad wavelength");
  const double nu_cut = constants::speed_of_light_nm / wavelength_nm;
  const double total = s.integral();
  if (nu_cut <= s.grid.nu_min_hz) return 0.0;
  if (nu_cut >= s.grid.nu_max_hz) return 1.0;

  // Piecewise-linear integral from nu_min up to the cut.
  const double d = s.grid.spacing_hz();
  double below = 0.0;
  for (int i = 0; i + 1 < s.grid.n_points; ++i) {
    const double a = s.grid.point(i);
    const double b = a + d;
    if (b <= nu_cut) {
      below += 0.5 * (s.values[i] + s.values[i + 1]) * d;
    } else if (a < nu_cut) {
      const double t = (nu_cut - a) / d;
      const double v_cut = s.values[i] + t * (s.values[i + 1] - s.values[i]);
      below += 0.5 * (s.values[i] + v_cut) * (nu_cut - a);
      break;
    } else {
      break;
    }
  }
  return below / total;
}

double wavelength_fwhm_nm(const SpectralDensity& s) {
  const WavelengthDensity w = to_wavelength_density(s);
  return measure_fwhm(w.values, w.wavelength_nm);
}

void write_spectrum(const SpectralDensity& s, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), Errc::io_failure, "cannot open " + path);
  out << "# ocdr spectrum\n";
  out << "# n_points = " << s.grid.n_points << "\n";
  out << "# center_wavelength_nm = " << text::format_double(s.center_wavelength_nm) << "\n";
  for (int i = 0; i < s.grid.n_points; ++i)
    out << text::format_double(s.grid.point(i)) << " " << text::format_double(s.values[i])
        << "\n";
  require(out.good(), Errc::io_failure, "write failed: " + path);
}

namespace {

// Shared reader for the two-column `frequency value` format.
void read_two_column(const std::string& path, std::vector<double>& nu, std::vector<double>& val) {
  std::ifstream in(path);
  require(in.good(), Errc::io_failure, "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::size_t split = t.find_first_of(" \t,");
    require(split != std::string_view::npos, Errc::corrupt_file, path + ": malformed row");
    nu.push_back(text::parse_double(t.substr(0, split), path));
    val.push_back(text::parse_double(t.substr(split + 1), path));
  }
  require(nu.size() >= 16, Errc::corrupt_file, path + ": fewer than 16 samples");
  const double d = (nu.back() - nu.front()) / static_cast<double>(nu.size() - 1);
  require(d > 0.0, Errc::corrupt_file, path + ": frequencies must ascend");
  for (std::size_t i = 1; i < nu.size(); ++i)
    require(std::abs(nu[i] - nu[i - 1] - d) <= 1e-6 * d, Errc::corrupt_file,
            path + ": frequency grid is not uniform");
}

} // namespace

SpectralDensity read_spectrum(const std::string& path) {
  std::vector<double> nu, val;
  read_two_column(path, nu, val);
  const FrequencyGrid grid(nu.front(), nu.back(), static_cast<int>(nu.size()));
  return SpectralDensity::from_samples(grid, std::move(val));
}

void write_response(const ResponseCurve& r, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), Errc::io_failure, "cannot open " + path);
  out << "# ocdr response curve\n";
  out << "# n_points = " << r.grid.n_points << "\n";
  for (int i = 0; i < r.grid.n_points; ++i)
    out << text::format_double(r.grid.point(i)) << " " << text::format_double(r.qe[i]) << "\n";
  require(out.good(), Errc::io_failure, "write failed: " + path);
}

ResponseCurve read_response(const std::string& path) {
  std::vector<double> nu, val;
  read_two_column(path, nu, val);
  for (double q : val)
    require(q >= 0.0 && q <= 1.0, Errc::corrupt_file, path + ": qe outside [0,1]");
  const FrequencyGrid grid(nu.front(), nu.back(), static_cast<int>(nu.size()));
  return ResponseCurve{grid, std::move(val)};
}

} // namespace ocdr
