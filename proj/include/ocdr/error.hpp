#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ocdr {

// Every failure mode the library reports, so callers (and tests) can
// distinguish them without string matching.
enum class Errc {
  invalid_argument,
  range_violation,
  grid_mismatch,
  grid_too_narrow,
  zero_overlap,
  undersampled_z,
  psf_range,
  no_peak,
  ambiguous_peak,
  nyquist_violation,
  too_short_input,
  region_overlap,
  empty_region,
  degenerate_noise,
  zero_mean,
  truncated_envelope,
  config_syntax,
  unknown_key,
  version_mismatch,
  corrupt_file,
  io_failure,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::range_violation: return "range violation";
    case Errc::grid_mismatch: return "grid mismatch";
    case Errc::grid_too_narrow: return "grid too narrow";
    case Errc::zero_overlap: return "all-zero overlap";
    case Errc::undersampled_z: return "undersampled z";
    case Errc::psf_range: return "psf range exceeded";
    case Errc::no_peak: return "no peak";
    case Errc::ambiguous_peak: return "ambiguous peak";
    case Errc::nyquist_violation: return "nyquist violation";
    case Errc::too_short_input: return "input too short";
    case Errc::region_overlap: return "regions overlap";
    case Errc::empty_region: return "empty region";
    case Errc::degenerate_noise: return "degenerate noise";
    case Errc::zero_mean: return "zero mean";
    case Errc::truncated_envelope: return "truncated envelope";
    case Errc::config_syntax: return "config syntax error";
    case Errc::unknown_key: return "unknown key";
    case Errc::version_mismatch: return "format version mismatch";
    case Errc::corrupt_file: return "corrupt file";
    case Errc::io_failure: return "i/o failure";
  }
  return "error";
}

} // namespace ocdr
