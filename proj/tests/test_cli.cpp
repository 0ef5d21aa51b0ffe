#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

// Exit-code contract of the ocdr executable: 0 success, 2 config error,
// 3 runtime/model error. The binary path comes from the build system.

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(OCDR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("successful scenario run exits 0 and writes the report") {
  testsupport::TempDir tmp("cli_ok");
  CHECK(run_cli("acq_plan --out-dir " + tmp.str()) == 0);
  const std::string report = testsupport::slurp(tmp.str("report.txt"));
  CHECK(report.find("# ocdr run report") == 0);
  CHECK(report.find("scenario = acq_plan") != std::string::npos);
  CHECK(!testsupport::slurp(tmp.str("resolved_config.cfg")).empty());
}

TEST_CASE("seed override changes the emitted record") {
  testsupport::TempDir tmp_a("cli_seed_a");
  testsupport::TempDir tmp_b("cli_seed_b");
  // small scan so the test stays quick
  std::ofstream cfg(tmp_a.str("small.cfg"));
  cfg << "[scan]\nz_end_um = 120\n[sample]\ndepths_um = 40\namplitudes = 0.2\n";
  cfg.close();
  CHECK(run_cli("silica_scan --config " + tmp_a.str("small.cfg") + " --seed 1 --out-dir " +
                tmp_a.str()) == 0);
  CHECK(run_cli("silica_scan --config " + tmp_a.str("small.cfg") + " --seed 2 --out-dir " +
                tmp_b.str()) == 0);
  CHECK(testsupport::slurp(tmp_a.str("scan.txt")) != testsupport::slurp(tmp_b.str("scan.txt")));
}

TEST_CASE("config errors exit 2") {
  testsupport::TempDir tmp("cli_cfg");

  SUBCASE("unknown key") {
    std::ofstream cfg(tmp.str("bad.cfg"));
    cfg << "[grid]\nnu_min_tzh = 100\n";
    cfg.close();
    CHECK(run_cli("psf --config " + tmp.str("bad.cfg") + " --out-dir " + tmp.str()) == 2);
  }

  SUBCASE("scenario mismatch between config and subcommand") {
    std::ofstream cfg(tmp.str("mismatch.cfg"));
    cfg << "scenario = psf\n";
    cfg.close();
    CHECK(run_cli("silica_scan --config " + tmp.str("mismatch.cfg") + " --out-dir " +
                  tmp.str()) == 2);
  }

  SUBCASE("unsupported format") {
    CHECK(run_cli("acq_plan --format json --out-dir " + tmp.str()) == 2);
  }
}

TEST_CASE("runtime model errors exit 3") {
  testsupport::TempDir tmp("cli_run");
  std::ofstream cfg(tmp.str("degenerate.cfg"));
  cfg << "[scan]\nz_start_um = 10\nz_end_um = 5\n";
  cfg.close();
  CHECK(run_cli("silica_scan --config " + tmp.str("degenerate.cfg") + " --out-dir " +
                tmp.str()) == 3);
}
