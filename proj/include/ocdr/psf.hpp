#pragma once

#include "ocdr/spectra.hpp"

#include <span>
#include <string>
#include <vector>

// Axial point-spread functions: the interferometric envelope as a function
// of reference-mirror displacement is the Fourier-transform magnitude of the
// system spectral density evaluated at the two-way delay 2z/c.

namespace ocdr {

struct ScanRecord;  // scan.hpp

struct Psf {
  std::vector<double> z_um;      // uniform spacing, symmetric about 0
  std::vector<double> envelope;  // peak-normalized, >= 0
  double fwhm_um = 0.0;
  double coherence_length_um = 0.0;  // alias of fwhm under this convention

  double dz_um() const { return z_um.size() > 1 ? z_um[1] - z_um[0] : 0.0; }
  double z_max_um() const { return z_um.empty() ? 0.0 : z_um.back(); }

  /// Linear interpolation of the envelope; throws psf_range outside [-z_max, z_max].
  double envelope_at(double z) const;
};

/// Envelope of |FT{S}| over z in [-z_range_um, +z_range_um], z_points samples.
/// The transform is zero-padded to a power of two at least 4x the spectral
/// sample count (more if needed to keep the internal delay grid below
/// 0.05 um), and the FWHM is measured on that fine internal grid.
Psf point_spread(const SpectralDensity& spectrum, double z_range_um, int z_points);

/// Width between the two half-maximum crossings nearest the global peak,
/// each located by linear interpolation (a crossing landing exactly on a
/// sample is used directly). z must ascend; uniformity is not required.
double measure_fwhm(std::span<const double> envelope, std::span<const double> z);

/// The interference fringe profile a spectrum produces: the real part of
/// its complex coherence function at delay 2z/c. Unlike the envelope-times-
/// cosine counting model, this keeps the spectral phase, so transforming it
/// back recovers asymmetric spectra without folding artifacts.
std::vector<double> coherence_interferogram(const SpectralDensity& spectrum,
                                            std::span<const double> z_um);

/// Recovers the system spectral shape from an interferogram: magnitude of
/// the FT of the mean-subtracted sequence, with spatial frequency f mapped
/// to optical frequency nu = c f / 2, restricted to [nu_lo, nu_hi].
SpectralDensity spectrum_from_interferogram(std::span<const double> signal, double bin_spacing_um,
                                            double nu_lo_hz, double nu_hi_hz);

/// ScanRecord overload; checks carrier sampling against the record's
/// center wavelength and rejects scans whose envelope reaches the edges.
SpectralDensity spectrum_from_interferogram(const ScanRecord& record, double nu_lo_hz,
                                            double nu_hi_hz);

/// CSV export: metadata header (fwhm_um) then z_um,envelope rows.
void write_psf(const Psf& p, const std::string& path);

} // namespace ocdr
