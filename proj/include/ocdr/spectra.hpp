#pragma once

#include <string>
#include <utility>
#include <vector>

// Source spectra and detector spectral responses on a shared uniform
// optical-frequency grid. Densities are kept sampled in frequency; the
// wavelength view is derived with the Jacobian c/lambda^2 when needed.

namespace ocdr {

struct FrequencyGrid {
  double nu_min_hz = 0.0;
  double nu_max_hz = 0.0;
  int n_points = 0;

  FrequencyGrid() = default;
  FrequencyGrid(double nu_min, double nu_max, int n);  // validates

  double spacing_hz() const { return (nu_max_hz - nu_min_hz) / (n_points - 1); }
  double point(int i) const { return nu_min_hz + i * spacing_hz(); }
  std::vector<double> points() const;
  bool contains(double nu_hz) const { return nu_hz >= nu_min_hz && nu_hz <= nu_max_hz; }

  bool operator==(const FrequencyGrid&) const = default;
};

/// Relative spectral density, normalized so the trapezoidal integral over
/// the grid is 1. center_wavelength_nm is c over the spectral centroid.
struct SpectralDensity {
  FrequencyGrid grid;
  std::vector<double> values;
  double center_wavelength_nm = 0.0;

  /// Validates nonnegativity, normalizes, computes the centroid.
  static SpectralDensity from_samples(const FrequencyGrid& grid, std::vector<double> values);

  double integral() const;  // trapezoidal; ~1 after construction
};

struct ResponseCurve {
  FrequencyGrid grid;
  std::vector<double> qe;  // in [0,1] per grid point
};

enum class DetectorKind { sspd, spad, ingaas, ideal_flat, custom };

struct DetectorModel {
  ResponseCurve response;
  double dark_rate_cps = 0.0;
  double dead_time_s = 0.0;
  DetectorKind kind = DetectorKind::ideal_flat;
};

struct DetectorParams {
  double qe_max = 1.0;  // scale for spad/ingaas/ideal_flat/custom; must be in (0,1]

  // spad: flat below, raised-cosine roll-off over the transition band,
  // exactly zero beyond the cutoff
  double spad_cutoff_nm = 1100.0;
  double spad_transition_nm = 60.0;

  // sspd: qe(lambda) = qe_ref * exp(-(lambda - lambda_ref)/lambda_decay),
  // clamped to 1
  double sspd_qe_ref = 0.05;
  double sspd_lambda_ref_nm = 930.0;
  double sspd_lambda_decay_nm = 1000.0;

  // ingaas: flat band with raised-cosine edges
  double ingaas_band_lo_nm = 1000.0;
  double ingaas_band_hi_nm = 1600.0;
  double ingaas_edge_nm = 100.0;

  double dark_rate_cps = 0.0;
  double dead_time_s = 0.0;

  // custom: piecewise-linear (wavelength_nm, qe) table; empty means flat qe_max
  std::vector<std::pair<double, double>> custom_table;
};

/// Phenomenological bias/temperature law for an SSPD operating point.
/// qe scale follows a logistic curve in the normalized bias, the dark rate
/// an exponential; both strictly increasing in bias. Constants are
/// representative defaults, not device data, and fully overridable.
struct SspdBiasLaw {
  double bias_ratio = 0.85;    // I_b / I_c, in (0,1)
  double temperature_k = 4.2;  // supported: 2.0 or 4.2 (operation requires T < T_c)

  double eta_max_4k = 0.10;
  double eta_max_2k = 0.15;
  double bias_mid = 0.85;   // logistic midpoint; the default operating point
  double bias_width = 0.04;

  double dark_scale_4k_cps = 2000.0;
  double dark_scale_2k_cps = 100.0;
  double dark_slope = 15.0;  // dark = scale * exp(slope * (bias - 1))
};

struct BiasPoint {
  double eta;            // dimensionless qe scale
  double dark_rate_cps;
};

struct SpdcShape {
  enum Value { gaussian, sinc2 };
};

/// Pointwise product of a source spectrum with a detector response, plus
/// the band-averaged quantum efficiency (the scalar eta used for counting).
struct SystemSpectrum {
  SpectralDensity spectrum;
  double effective_eta = 0.0;
};

/// Gaussian source defined by its wavelength-domain center and FWHM
/// (converted to frequency at the center, d(lambda) = lambda^2/c d(nu)).
/// Throws grid_too_narrow if more than max_clipped_mass of the analytic
/// mass falls outside the grid.
SpectralDensity make_gaussian_source(double center_wavelength_nm, double fwhm_wavelength_nm,
                                     const FrequencyGrid& grid, double max_clipped_mass = 1e-6);

/// Degenerate collinear downconversion source, symmetric in frequency about
/// half the pump frequency. For the gaussian shape bandwidth_hz is the
/// frequency-domain FWHM; for sinc2 it is the center-to-first-zero distance.
/// sinc2 tails decay only as 1/detuning^2, so for that shape the clip
/// tolerance applies against the analytic total mass with a looser default.
SpectralDensity make_spdc_source(double pump_wavelength_nm, double bandwidth_hz,
                                 SpdcShape::Value shape, const FrequencyGrid& grid,
                                 double max_clipped_mass = -1.0);

DetectorModel make_detector(DetectorKind kind, const FrequencyGrid& grid,
                            const DetectorParams& params = {});

BiasPoint sspd_bias_point(const SspdBiasLaw& law);

SystemSpectrum system_spectrum(const SpectralDensity& source, const DetectorModel& detector);

/// Density per nm with the c/lambda^2 Jacobian applied; wavelength ascending.
struct WavelengthDensity {
  std::vector<double> wavelength_nm;
  std::vector<double> values;
};
WavelengthDensity to_wavelength_density(const SpectralDensity& s);

/// Fraction of spectral mass at wavelengths longer than the given cut.
double mass_fraction_beyond(const SpectralDensity& s, double wavelength_nm);

/// FWHM of the wavelength-domain view of the density, in nm.
double wavelength_fwhm_nm(const SpectralDensity& s);

// Two-column text exchange format: `# key = value` metadata lines followed
// by `frequency_hz value` rows. Parsing is locale-independent.
void write_spectrum(const SpectralDensity& s, const std::string& path);
SpectralDensity read_spectrum(const std::string& path);
void write_response(const ResponseCurve& r, const std::string& path);
ResponseCurve read_response(const std::string& path);

} // namespace ocdr
