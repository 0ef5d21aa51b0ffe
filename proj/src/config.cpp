#include "ocdr/config.hpp"

#include "ocdr/error.hpp"
#include "ocdr/text_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ocdr {
namespace {

struct ParseCursor {
  int line_no = 0;

  [[noreturn]] void syntax(const std::string& msg) const {
    fail(Errc::config_syntax, "line " + std::to_string(line_no) + ": " + msg);
  }

  double as_double(std::string_view v) const {
    double out = 0.0;
    const std::string_view t = text::trim(v);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc{} || ptr != t.data() + t.size())
      syntax("expected a number, got '" + std::string(t) + "'");
    return out;
  }

  int as_int(std::string_view v) const {
    int out = 0;
    const std::string_view t = text::trim(v);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc{} || ptr != t.data() + t.size())
      syntax("expected an integer, got '" + std::string(t) + "'");
    return out;
  }

  std::uint64_t as_uint64(std::string_view v) const {
    std::uint64_t out = 0;
    const std::string_view t = text::trim(v);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc{} || ptr != t.data() + t.size())
      syntax("expected an unsigned integer, got '" + std::string(t) + "'");
    return out;
  }

  bool as_bool(std::string_view v) const {
    const std::string_view t = text::trim(v);
    if (t == "true") return true;
    if (t == "false") return false;
    syntax("expected true or false, got '" + std::string(t) + "'");
  }

  std::vector<double> as_double_list(std::string_view v) const {
    std::vector<double> out;
    std::string_view rest = text::trim(v);
    if (rest.empty()) return out;
    while (true) {
      const std::size_t comma = rest.find(',');
      out.push_back(as_double(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }
};

void check(bool ok, const std::string& field, const std::string& what) {
  if (!ok) fail(Errc::range_violation, field + ": " + what);
}

void validate(const ExperimentConfig& c) {
  check(c.grid.nu_min_thz > 0.0, "grid.nu_min_thz", "must be positive");
  check(c.grid.nu_max_thz > c.grid.nu_min_thz, "grid.nu_max_thz", "must exceed nu_min_thz");
  check(c.grid.n_points >= 16, "grid.n_points", "must be at least 16");

  check(c.source.type == "gaussian" || c.source.type == "spdc", "source.type",
        "must be gaussian or spdc");
  check(c.source.center_wavelength_nm > 0.0, "source.center_wavelength_nm", "must be positive");
  check(c.source.fwhm_wavelength_nm > 0.0, "source.fwhm_wavelength_nm", "must be positive");
  check(c.source.pump_wavelength_nm > 0.0, "source.pump_wavelength_nm", "must be positive");
  check(c.source.spdc_shape == "sinc2" || c.source.spdc_shape == "gaussian",
        "source.spdc_shape", "must be sinc2 or gaussian");
  check(c.source.spdc_bandwidth_thz >= 0.0, "source.spdc_bandwidth_thz", "must be nonnegative");
  check(c.source.power_w >= 0.0, "source.power_w", "must be nonnegative");
  check(c.source.sample_attenuation_db >= 0.0, "source.sample_attenuation_db",
        "must be nonnegative");
  check(c.source.bs_factor > 0.0 && c.source.bs_factor <= 1.0, "source.bs_factor",
        "must lie in (0,1]");

  const std::string& kind = c.detector.kind;
  check(kind == "sspd" || kind == "spad" || kind == "ingaas" || kind == "ideal_flat" ||
            kind == "custom",
        "detector.kind", "must be sspd, spad, ingaas, ideal_flat or custom");
  check(c.detector.qe_max > 0.0 && c.detector.qe_max <= 1.0, "detector.qe_max",
        "must lie in (0,1]");
  check(c.detector.spad_cutoff_nm > 0.0, "detector.spad_cutoff_nm", "must be positive");
  check(c.detector.spad_transition_nm > 0.0, "detector.spad_transition_nm", "must be positive");
  check(c.detector.sspd_qe_ref > 0.0 && c.detector.sspd_qe_ref <= 1.0, "detector.sspd_qe_ref",
        "must lie in (0,1]");
  check(c.detector.sspd_lambda_decay_nm > 0.0, "detector.sspd_lambda_decay_nm",
        "must be positive");
  check(c.detector.dark_rate_cps >= 0.0, "detector.dark_rate_cps", "must be nonnegative");
  if (c.detector.dead_time_s)
    check(*c.detector.dead_time_s >= 0.0, "detector.dead_time_s", "must be nonnegative");

  check(c.bias.bias_ratio > 0.0 && c.bias.bias_ratio < 1.0, "bias.bias_ratio",
        "must lie in (0,1)");
  check(c.bias.temperature_k == 2.0 || c.bias.temperature_k == 4.2, "bias.temperature_k",
        "supported values are 2.0 and 4.2");

  check(c.sample.depths_um.size() == c.sample.amplitudes.size(), "sample.amplitudes",
        "must match depths_um in length");
  check(c.sample.phases_rad.empty() || c.sample.phases_rad.size() == c.sample.depths_um.size(),
        "sample.phases_rad", "must be empty or match depths_um in length");
  for (double a : c.sample.amplitudes)
    check(a >= 0.0 && a <= 1.0, "sample.amplitudes", "entries must lie in [0,1]");
  for (std::size_t i = 1; i < c.sample.depths_um.size(); ++i)
    check(c.sample.depths_um[i] > c.sample.depths_um[i - 1], "sample.depths_um",
          "must strictly increase");

  if (c.scan.counting_time_s)
    check(*c.scan.counting_time_s > 0.0, "scan.counting_time_s", "must be positive");
  if (c.scan.mirror_speed_mm_s)
    check(*c.scan.mirror_speed_mm_s > 0.0, "scan.mirror_speed_mm_s", "must be positive");
  if (c.scan.reference_flux_cps)
    check(*c.scan.reference_flux_cps >= 0.0, "scan.reference_flux_cps", "must be nonnegative");
  if (c.scan.sample_flux_peak_cps)
    check(*c.scan.sample_flux_peak_cps >= 0.0, "scan.sample_flux_peak_cps",
          "must be nonnegative");
  if (c.scan.eta) check(*c.scan.eta >= 0.0 && *c.scan.eta <= 1.0, "scan.eta", "must lie in [0,1]");
  check(c.scan.psf_z_points >= 0, "scan.psf_z_points", "must be nonnegative");

  check(c.filter.margin >= 1.0, "filter.margin", "must be at least 1");
  check(c.filter.n_taps >= 0, "filter.n_taps", "must be nonnegative");
  if (c.filter.n_taps > 0)
    check(c.filter.n_taps % 2 == 1 && c.filter.n_taps >= 31, "filter.n_taps",
          "must be odd and at least 31");
  check(c.filter.window == "hamming" || c.filter.window == "blackman", "filter.window",
        "must be hamming or blackman");
  check(c.filter.threshold_fraction > 0.0 && c.filter.threshold_fraction < 1.0,
        "filter.threshold_fraction", "must lie in (0,1)");

  check(c.snr_budget.responsivity_a_w > 0.0, "snr_budget.responsivity_a_w", "must be positive");
  check(c.snr_budget.reference_power_w > 0.0, "snr_budget.reference_power_w",
        "must be positive");
  check(c.snr_budget.sample_power_w > 0.0, "snr_budget.sample_power_w", "must be positive");
  check(c.snr_budget.temperature_k > 0.0, "snr_budget.temperature_k", "must be positive");
  check(c.snr_budget.bandwidth_hz > 0.0, "snr_budget.bandwidth_hz", "must be positive");
  check(c.snr_budget.feedback_resistance_ohm > 0.0, "snr_budget.feedback_resistance_ohm",
        "must be positive");
  check(c.snr_budget.polarization_degree >= 0.0 && c.snr_budget.polarization_degree <= 1.0,
        "snr_budget.polarization_degree", "must lie in [0,1]");
  check(c.snr_budget.source_bandwidth_thz > 0.0, "snr_budget.source_bandwidth_thz",
        "must be positive");
  check(c.snr_budget.sweep_min_w > 0.0 && c.snr_budget.sweep_max_w > c.snr_budget.sweep_min_w,
        "snr_budget.sweep_min_w", "sweep bounds must be positive and ordered");
  check(c.snr_budget.sweep_points >= 2, "snr_budget.sweep_points", "must be at least 2");

  check(c.plan.scan_length_mm >= 0.0, "plan.scan_length_mm", "must be nonnegative");
  check(c.plan.mirror_speed_mm_s > 0.0, "plan.mirror_speed_mm_s", "must be positive");
  check(c.plan.counting_time_s > 0.0, "plan.counting_time_s", "must be positive");
  check(c.plan.count_rate_cps >= 0.0, "plan.count_rate_cps", "must be nonnegative");
  check(c.plan.dead_time_s >= 0.0, "plan.dead_time_s", "must be nonnegative");

  check(c.monte_carlo.n_seeds >= 1, "monte_carlo.n_seeds", "must be at least 1");
  check(c.monte_carlo.n_repeats >= 2, "monte_carlo.n_repeats", "must be at least 2");
  check(c.monte_carlo.n_trials >= 1, "monte_carlo.n_trials", "must be at least 1");
}

} // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::psf: return "psf";
    case Scenario::compare_detectors: return "compare_detectors";
    case Scenario::snr_run: return "snr_run";
    case Scenario::fano_run: return "fano_run";
    case Scenario::silica_scan: return "silica_scan";
    case Scenario::snr_budget: return "snr_budget";
    case Scenario::acq_plan: return "acq_plan";
  }
  return "?";
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "psf") return Scenario::psf;
  if (name == "compare_detectors") return Scenario::compare_detectors;
  if (name == "snr_run") return Scenario::snr_run;
  if (name == "fano_run") return Scenario::fano_run;
  if (name == "silica_scan") return Scenario::silica_scan;
  if (name == "snr_budget") return Scenario::snr_budget;
  if (name == "acq_plan") return Scenario::acq_plan;
  fail(Errc::range_violation, "scenario: unknown scenario '" + name + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  ParseCursor cur;
  std::istringstream in(text);
  std::string line;
  std::string section;  // "" = top level

  while (std::getline(in, line)) {
    ++cur.line_no;
    const std::string_view t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;

    if (t.front() == '[') {
      if (t.back() != ']') cur.syntax("unterminated section header");
      section = std::string(text::trim(t.substr(1, t.size() - 2)));
      static const char* known[] = {"grid",   "source", "detector",   "bias",
                                    "sample", "scan",   "filter",     "snr_budget",
                                    "plan",   "monte_carlo"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok)
        fail(Errc::unknown_key,
             "line " + std::to_string(cur.line_no) + ": unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = t.find('=');
    if (eq == std::string_view::npos) cur.syntax("expected key = value");
    const std::string key{text::trim(t.substr(0, eq))};
    const std::string_view value = text::trim(t.substr(eq + 1));
    if (key.empty()) cur.syntax("empty key");

    bool handled = true;
    if (section.empty()) {
      if (key == "scenario") cfg.scenario = scenario_from_name(std::string(value));
      else if (key == "rng_seed") cfg.rng_seed = cur.as_uint64(value);
      else if (key == "out_dir") cfg.out_dir = std::string(value);
      else handled = false;
    } else if (section == "grid") {
      if (key == "nu_min_thz") cfg.grid.nu_min_thz = cur.as_double(value);
      else if (key == "nu_max_thz") cfg.grid.nu_max_thz = cur.as_double(value);
      else if (key == "n_points") cfg.grid.n_points = cur.as_int(value);
      else handled = false;
    } else if (section == "source") {
      if (key == "type") cfg.source.type = std::string(value);
      else if (key == "center_wavelength_nm") cfg.source.center_wavelength_nm = cur.as_double(value);
      else if (key == "fwhm_wavelength_nm") cfg.source.fwhm_wavelength_nm = cur.as_double(value);
      else if (key == "pump_wavelength_nm") cfg.source.pump_wavelength_nm = cur.as_double(value);
      else if (key == "spdc_shape") cfg.source.spdc_shape = std::string(value);
      else if (key == "spdc_bandwidth_thz") cfg.source.spdc_bandwidth_thz = cur.as_double(value);
      else if (key == "power_w") cfg.source.power_w = cur.as_double(value);
      else if (key == "sample_attenuation_db") cfg.source.sample_attenuation_db = cur.as_double(value);
      else if (key == "bs_factor") cfg.source.bs_factor = cur.as_double(value);
      else handled = false;
    } else if (section == "detector") {
      if (key == "kind") cfg.detector.kind = std::string(value);
      else if (key == "qe_max") cfg.detector.qe_max = cur.as_double(value);
      else if (key == "spad_cutoff_nm") cfg.detector.spad_cutoff_nm = cur.as_double(value);
      else if (key == "spad_transition_nm") cfg.detector.spad_transition_nm = cur.as_double(value);
      else if (key == "sspd_qe_ref") cfg.detector.sspd_qe_ref = cur.as_double(value);
      else if (key == "sspd_lambda_ref_nm") cfg.detector.sspd_lambda_ref_nm = cur.as_double(value);
      else if (key == "sspd_lambda_decay_nm") cfg.detector.sspd_lambda_decay_nm = cur.as_double(value);
      else if (key == "dark_rate_cps") cfg.detector.dark_rate_cps = cur.as_double(value);
      else if (key == "dead_time_s") cfg.detector.dead_time_s = cur.as_double(value);
      else if (key == "custom_response_file") cfg.detector.custom_response_file = std::string(value);
      else handled = false;
    } else if (section == "bias") {
      if (key == "bias_ratio") cfg.bias.bias_ratio = cur.as_double(value);
      else if (key == "temperature_k") cfg.bias.temperature_k = cur.as_double(value);
      else handled = false;
    } else if (section == "sample") {
      if (key == "depths_um") cfg.sample.depths_um = cur.as_double_list(value);
      else if (key == "amplitudes") cfg.sample.amplitudes = cur.as_double_list(value);
      else if (key == "phases_rad") cfg.sample.phases_rad = cur.as_double_list(value);
      else handled = false;
    } else if (section == "scan") {
      if (key == "z_start_um") cfg.scan.z_start_um = cur.as_double(value);
      else if (key == "z_end_um") cfg.scan.z_end_um = cur.as_double(value);
      else if (key == "mirror_speed_mm_s") cfg.scan.mirror_speed_mm_s = cur.as_double(value);
      else if (key == "counting_time_s") cfg.scan.counting_time_s = cur.as_double(value);
      else if (key == "reference_flux_cps") cfg.scan.reference_flux_cps = cur.as_double(value);
      else if (key == "sample_flux_peak_cps") cfg.scan.sample_flux_peak_cps = cur.as_double(value);
      else if (key == "eta") cfg.scan.eta = cur.as_double(value);
      else if (key == "psf_z_points") cfg.scan.psf_z_points = cur.as_int(value);
      else if (key == "store_truth") cfg.scan.store_truth = cur.as_bool(value);
      else handled = false;
    } else if (section == "filter") {
      if (key == "margin") cfg.filter.margin = cur.as_double(value);
      else if (key == "n_taps") cfg.filter.n_taps = cur.as_int(value);
      else if (key == "window") cfg.filter.window = std::string(value);
      else if (key == "threshold_fraction") cfg.filter.threshold_fraction = cur.as_double(value);
      else if (key == "signal_lo_um") cfg.filter.signal_lo_um = cur.as_double(value);
      else if (key == "signal_hi_um") cfg.filter.signal_hi_um = cur.as_double(value);
      else if (key == "noise_lo_um") cfg.filter.noise_lo_um = cur.as_double(value);
      else if (key == "noise_hi_um") cfg.filter.noise_hi_um = cur.as_double(value);
      else handled = false;
    } else if (section == "snr_budget") {
      if (key == "responsivity_a_w") cfg.snr_budget.responsivity_a_w = cur.as_double(value);
      else if (key == "reference_power_w") cfg.snr_budget.reference_power_w = cur.as_double(value);
      else if (key == "sample_power_w") cfg.snr_budget.sample_power_w = cur.as_double(value);
      else if (key == "temperature_k") cfg.snr_budget.temperature_k = cur.as_double(value);
      else if (key == "bandwidth_hz") cfg.snr_budget.bandwidth_hz = cur.as_double(value);
      else if (key == "feedback_resistance_ohm") cfg.snr_budget.feedback_resistance_ohm = cur.as_double(value);
      else if (key == "polarization_degree") cfg.snr_budget.polarization_degree = cur.as_double(value);
      else if (key == "source_bandwidth_thz") cfg.snr_budget.source_bandwidth_thz = cur.as_double(value);
      else if (key == "sweep_min_w") cfg.snr_budget.sweep_min_w = cur.as_double(value);
      else if (key == "sweep_max_w") cfg.snr_budget.sweep_max_w = cur.as_double(value);
      else if (key == "sweep_points") cfg.snr_budget.sweep_points = cur.as_int(value);
      else handled = false;
    } else if (section == "plan") {
      if (key == "scan_length_mm") cfg.plan.scan_length_mm = cur.as_double(value);
      else if (key == "mirror_speed_mm_s") cfg.plan.mirror_speed_mm_s = cur.as_double(value);
      else if (key == "counting_time_s") cfg.plan.counting_time_s = cur.as_double(value);
      else if (key == "count_rate_cps") cfg.plan.count_rate_cps = cur.as_double(value);
      else if (key == "dead_time_s") cfg.plan.dead_time_s = cur.as_double(value);
      else handled = false;
    } else if (section == "monte_carlo") {
      if (key == "n_seeds") cfg.monte_carlo.n_seeds = cur.as_int(value);
      else if (key == "n_repeats") cfg.monte_carlo.n_repeats = cur.as_int(value);
      else if (key == "n_trials") cfg.monte_carlo.n_trials = cur.as_int(value);
      else handled = false;
    }

    if (!handled)
      fail(Errc::unknown_key, "line " + std::to_string(cur.line_no) + ": unknown key '" + key +
                                  "' in section [" + section + "]");
    cfg.explicit_keys.insert(section.empty() ? key : section + "." + key);
  }

  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_failure, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  const auto d = [](double v) { return text::format_double(v); };
  const auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += d(v[i]);
    }
    return s;
  };

  if (c.scenario) out << "scenario = " << scenario_name(*c.scenario) << "\n";
  out << "rng_seed = " << text::format_uint(c.rng_seed) << "\n";
  out << "out_dir = " << c.out_dir << "\n";

  out << "\n[grid]\n";
  out << "nu_min_thz = " << d(c.grid.nu_min_thz) << "\n";
  out << "nu_max_thz = " << d(c.grid.nu_max_thz) << "\n";
  out << "n_points = " << c.grid.n_points << "\n";

  out << "\n[source]\n";
  out << "type = " << c.source.type << "\n";
  out << "center_wavelength_nm = " << d(c.source.center_wavelength_nm) << "\n";
  out << "fwhm_wavelength_nm = " << d(c.source.fwhm_wavelength_nm) << "\n";
  out << "pump_wavelength_nm = " << d(c.source.pump_wavelength_nm) << "\n";
  out << "spdc_shape = " << c.source.spdc_shape << "\n";
  out << "spdc_bandwidth_thz = " << d(c.source.spdc_bandwidth_thz) << "\n";
  out << "power_w = " << d(c.source.power_w) << "\n";
  out << "sample_attenuation_db = " << d(c.source.sample_attenuation_db) << "\n";
  out << "bs_factor = " << d(c.source.bs_factor) << "\n";

  out << "\n[detector]\n";
  out << "kind = " << c.detector.kind << "\n";
  out << "qe_max = " << d(c.detector.qe_max) << "\n";
  out << "spad_cutoff_nm = " << d(c.detector.spad_cutoff_nm) << "\n";
  out << "spad_transition_nm = " << d(c.detector.spad_transition_nm) << "\n";
  out << "sspd_qe_ref = " << d(c.detector.sspd_qe_ref) << "\n";
  out << "sspd_lambda_ref_nm = " << d(c.detector.sspd_lambda_ref_nm) << "\n";
  out << "sspd_lambda_decay_nm = " << d(c.detector.sspd_lambda_decay_nm) << "\n";
  out << "dark_rate_cps = " << d(c.detector.dark_rate_cps) << "\n";
  if (c.detector.dead_time_s) out << "dead_time_s = " << d(*c.detector.dead_time_s) << "\n";
  if (!c.detector.custom_response_file.empty())
    out << "custom_response_file = " << c.detector.custom_response_file << "\n";

  out << "\n[bias]\n";
  out << "bias_ratio = " << d(c.bias.bias_ratio) << "\n";
  out << "temperature_k = " << d(c.bias.temperature_k) << "\n";

  out << "\n[sample]\n";
  out << "depths_um = " << list(c.sample.depths_um) << "\n";
  out << "amplitudes = " << list(c.sample.amplitudes) << "\n";
  out << "phases_rad = " << list(c.sample.phases_rad) << "\n";

  out << "\n[scan]\n";
  if (c.scan.z_start_um) out << "z_start_um = " << d(*c.scan.z_start_um) << "\n";
  if (c.scan.z_end_um) out << "z_end_um = " << d(*c.scan.z_end_um) << "\n";
  if (c.scan.mirror_speed_mm_s)
    out << "mirror_speed_mm_s = " << d(*c.scan.mirror_speed_mm_s) << "\n";
  if (c.scan.counting_time_s) out << "counting_time_s = " << d(*c.scan.counting_time_s) << "\n";
  if (c.scan.reference_flux_cps)
    out << "reference_flux_cps = " << d(*c.scan.reference_flux_cps) << "\n";
  if (c.scan.sample_flux_peak_cps)
    out << "sample_flux_peak_cps = " << d(*c.scan.sample_flux_peak_cps) << "\n";
  if (c.scan.eta) out << "eta = " << d(*c.scan.eta) << "\n";
  out << "psf_z_points = " << c.scan.psf_z_points << "\n";
  out << "store_truth = " << (c.scan.store_truth ? "true" : "false") << "\n";

  out << "\n[filter]\n";
  out << "margin = " << d(c.filter.margin) << "\n";
  out << "n_taps = " << c.filter.n_taps << "\n";
  out << "window = " << c.filter.window << "\n";
  out << "threshold_fraction = " << d(c.filter.threshold_fraction) << "\n";
  if (c.filter.signal_lo_um) out << "signal_lo_um = " << d(*c.filter.signal_lo_um) << "\n";
  if (c.filter.signal_hi_um) out << "signal_hi_um = " << d(*c.filter.signal_hi_um) << "\n";
  if (c.filter.noise_lo_um) out << "noise_lo_um = " << d(*c.filter.noise_lo_um) << "\n";
  if (c.filter.noise_hi_um) out << "noise_hi_um = " << d(*c.filter.noise_hi_um) << "\n";

  out << "\n[snr_budget]\n";
  out << "responsivity_a_w = " << d(c.snr_budget.responsivity_a_w) << "\n";
  out << "reference_power_w = " << d(c.snr_budget.reference_power_w) << "\n";
  out << "sample_power_w = " << d(c.snr_budget.sample_power_w) << "\n";
  out << "temperature_k = " << d(c.snr_budget.temperature_k) << "\n";
  out << "bandwidth_hz = " << d(c.snr_budget.bandwidth_hz) << "\n";
  out << "feedback_resistance_ohm = " << d(c.snr_budget.feedback_resistance_ohm) << "\n";
  out << "polarization_degree = " << d(c.snr_budget.polarization_degree) << "\n";
  out << "source_bandwidth_thz = " << d(c.snr_budget.source_bandwidth_thz) << "\n";
  out << "sweep_min_w = " << d(c.snr_budget.sweep_min_w) << "\n";
  out << "sweep_max_w = " << d(c.snr_budget.sweep_max_w) << "\n";
  out << "sweep_points = " << c.snr_budget.sweep_points << "\n";

  out << "\n[plan]\n";
  out << "scan_length_mm = " << d(c.plan.scan_length_mm) << "\n";
  out << "mirror_speed_mm_s = " << d(c.plan.mirror_speed_mm_s) << "\n";
  out << "counting_time_s = " << d(c.plan.counting_time_s) << "\n";
  out << "count_rate_cps = " << d(c.plan.count_rate_cps) << "\n";
  out << "dead_time_s = " << d(c.plan.dead_time_s) << "\n";

  out << "\n[monte_carlo]\n";
  out << "n_seeds = " << c.monte_carlo.n_seeds << "\n";
  out << "n_repeats = " << c.monte_carlo.n_repeats << "\n";
  out << "n_trials = " << c.monte_carlo.n_trials << "\n";

  return out.str();
}

} // namespace ocdr
