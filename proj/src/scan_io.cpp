#include "ocdr/error.hpp"
#include "ocdr/scan.hpp"
#include "ocdr/text_io.hpp"

#include <fstream>
#include <map>
#include <string>

namespace ocdr {
namespace {

constexpr int kSupportedVersion = 1;

} // namespace

void write_scan_record(const ScanRecord& record, const std::string& path) {
  require(record.positions_um.size() == record.counts.size(), Errc::invalid_argument,
          "scan record: positions/counts size mismatch");
  std::ofstream out(path);
  require(out.good(), Errc::io_failure, "cannot open " + path);

  const ScanConfig& c = record.config;
  out << "# ocdr scan record\n";
  out << "# format_version = " << record.format_version << "\n";
  out << "# n_bins = " << record.counts.size() << "\n";
  out << "# z_start_um = " << text::format_double(c.z_start_um) << "\n";
  out << "# z_end_um = " << text::format_double(c.z_end_um) << "\n";
  out << "# mirror_speed_mm_s = " << text::format_double(c.mirror_speed_mm_s) << "\n";
  out << "# counting_time_s = " << text::format_double(c.counting_time_s) << "\n";
  out << "# reference_flux_cps = " << text::format_double(c.reference_flux_cps) << "\n";
  out << "# sample_flux_peak_cps = " << text::format_double(c.sample_flux_peak_cps) << "\n";
  out << "# eta = " << text::format_double(c.eta) << "\n";
  out << "# dark_rate_cps = " << text::format_double(c.dark_rate_cps) << "\n";
  out << "# dead_time_s = " << text::format_double(c.dead_time_s) << "\n";
  out << "# rng_seed = " << text::format_uint(c.rng_seed) << "\n";
  out << "# center_wavelength_nm = " << text::format_double(c.center_wavelength_nm) << "\n";
  out << "position_um,counts\n";
  for (std::size_t i = 0; i < record.counts.size(); ++i)
    out << text::format_double(record.positions_um[i]) << ","
        << text::format_uint(record.counts[i]) << "\n";
  require(out.good(), Errc::io_failure, "write failed: " + path);
}

ScanRecord read_scan_record(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_failure, "cannot open " + path);

  std::map<std::string, std::string> header;
  std::string line;
  bool saw_column_row = false;
  std::vector<double> positions;
  std::vector<std::uint64_t> counts;

  while (std::getline(in, line)) {
    std::string_view t = text::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      t.remove_prefix(1);
      const std::size_t eq = t.find('=');
      if (eq == std::string_view::npos) continue;  // comment line, e.g. the banner
      const std::string key{text::trim(t.substr(0, eq))};
      header[key] = std::string(text::trim(t.substr(eq + 1)));
      continue;
    }
    if (!saw_column_row) {
      require(t == "position_um,counts", Errc::corrupt_file,
              path + ": missing position_um,counts column row");
      saw_column_row = true;
      continue;
    }
    const std::size_t comma = t.find(',');
    require(comma != std::string_view::npos, Errc::corrupt_file, path + ": malformed row");
    positions.push_back(text::parse_double(t.substr(0, comma), path));
    counts.push_back(text::parse_uint(t.substr(comma + 1), path));
  }

  const auto get = [&](const char* key) -> const std::string& {
    auto it = header.find(key);
    require(it != header.end(), Errc::corrupt_file,
            path + ": missing header field '" + key + "'");
    return it->second;
  };

  const auto version = static_cast<int>(text::parse_int(get("format_version"), path));
  require(version >= 1 && version <= kSupportedVersion, Errc::version_mismatch,
          path + ": format_version " + std::to_string(version) + " not supported (max " +
              std::to_string(kSupportedVersion) + ")");

  const std::uint64_t n_bins = text::parse_uint(get("n_bins"), path);
  require(counts.size() == n_bins, Errc::corrupt_file,
          path + ": header says " + std::to_string(n_bins) + " bins but file has " +
              std::to_string(counts.size()));

  ScanRecord rec;
  rec.format_version = version;
  rec.config.z_start_um = text::parse_double(get("z_start_um"), path);
  rec.config.z_end_um = text::parse_double(get("z_end_um"), path);
  rec.config.mirror_speed_mm_s = text::parse_double(get("mirror_speed_mm_s"), path);
  rec.config.counting_time_s = text::parse_double(get("counting_time_s"), path);
  rec.config.reference_flux_cps = text::parse_double(get("reference_flux_cps"), path);
  rec.config.sample_flux_peak_cps = text::parse_double(get("sample_flux_peak_cps"), path);
  rec.config.eta = text::parse_double(get("eta"), path);
  rec.config.dark_rate_cps = text::parse_double(get("dark_rate_cps"), path);
  rec.config.dead_time_s = text::parse_double(get("dead_time_s"), path);
  rec.config.rng_seed = text::parse_uint(get("rng_seed"), path);
  rec.config.center_wavelength_nm = text::parse_double(get("center_wavelength_nm"), path);
  rec.positions_um = std::move(positions);
  rec.counts = std::move(counts);
  return rec;
}

} // namespace ocdr
