#include "ocdr/config.hpp"
#include "ocdr/error.hpp"
#include "ocdr/kernels.hpp"
#include "ocdr/runner.hpp"
#include "ocdr/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int run_scenario(ocdr::Scenario scenario, const CliOptions& opt) {
  ocdr::ExperimentConfig cfg;
  try {
    if (!opt.config_path.empty()) cfg = ocdr::parse_config_file(opt.config_path);
    if (cfg.scenario && *cfg.scenario != scenario)
      ocdr::fail(ocdr::Errc::range_violation,
                 "scenario: config names '" + ocdr::scenario_name(*cfg.scenario) +
                     "' but the subcommand is '" + ocdr::scenario_name(scenario) + "'");
    cfg.scenario = scenario;
    if (opt.seed_set) cfg.rng_seed = opt.seed;
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.format != "csv")
      ocdr::fail(ocdr::Errc::range_violation, "format: only 'csv' is supported");
  } catch (const ocdr::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    const ocdr::RunReport report = ocdr::run_experiment(cfg);
    const auto resolved = ocdr::resolve_scenario_defaults(cfg);
    const auto report_path = std::filesystem::path(resolved.out_dir) / "report.txt";
    const auto config_path = std::filesystem::path(resolved.out_dir) / "resolved_config.cfg";
    ocdr::write_report(report, report_path.string());
    {
      std::ofstream out(config_path);
      out << report.resolved_config;
    }
    std::cout << ocdr::format_report(report);
    std::cout << "\nreport = " << report_path.string() << "\n";
    return 0;
  } catch (const ocdr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon-counting OCDR simulator and analysis toolkit"};
  app.set_version_flag("--version", std::string(ocdr::toolkit_version));

  CliOptions opt;
  app.add_option("--config", opt.config_path, "experiment config file")->check(CLI::ExistingFile);
  app.add_option("--seed", opt.seed, "override the RNG seed")
      ->each([&](const std::string&) { opt.seed_set = true; });
  app.add_option("--out-dir", opt.out_dir, "output directory (default from config)");
  app.add_option("--format", opt.format, "data file format (csv)");
  app.add_flag_callback("--kernel-info", [] {
    std::cout << "kernel backend: "
              << ocdr::kernels::backend_name(ocdr::kernels::active_backend()) << "\n";
  });

  const std::pair<const char*, ocdr::Scenario> scenarios[] = {
      {"psf", ocdr::Scenario::psf},
      {"compare_detectors", ocdr::Scenario::compare_detectors},
      {"snr_run", ocdr::Scenario::snr_run},
      {"fano_run", ocdr::Scenario::fano_run},
      {"silica_scan", ocdr::Scenario::silica_scan},
      {"snr_budget", ocdr::Scenario::snr_budget},
      {"acq_plan", ocdr::Scenario::acq_plan},
  };

  int exit_code = 0;
  bool ran = false;
  for (const auto& [name, scenario] : scenarios) {
    CLI::App* sub = app.add_subcommand(name, "run the " + std::string(name) + " scenario");
    sub->fallthrough();  // global flags may follow the subcommand
    const ocdr::Scenario s = scenario;
    sub->callback([&, s] {
      exit_code = run_scenario(s, opt);
      ran = true;
    });
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfigError;
  }

  if (!ran && app.get_subcommands().empty() && argc <= 1) {
    std::cout << app.help();
    return 0;
  }
  return exit_code;
}
