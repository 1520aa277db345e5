// End-to-end checks of the command-line tool: every subcommand must be
// byte-reproducible and the emitted files must parse back.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "qkdcoex/sweep.hpp"

namespace {

std::string env_or_fail(const char* name) {
  const char* v = std::getenv(name);
  REQUIRE_MESSAGE(v != nullptr, "environment variable missing: ", name);
  return v;
}

std::string bin() { return env_or_fail("QKDCOEX_BIN"); }
std::string config_dir() { return env_or_fail("QKDCOEX_CONFIG_DIR"); }

int run(const std::string& args) {
  const std::string cmd = bin() + " " + args + " 2>/dev/null";
  return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot read ", path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("calibrate then simulate: profile feeds back through the config") {
  const std::string conf = config_dir() + "/paper.conf";
  const std::string anchors = config_dir() + "/paper_anchors.csv";

  REQUIRE(run("calibrate --config " + conf + " --anchors " + anchors +
              " --out /tmp/qkdcoex_profile_a.csv") == 0);
  REQUIRE(run("calibrate --config " + conf + " --anchors " + anchors +
              " --out /tmp/qkdcoex_profile_b.csv") == 0);
  CHECK(slurp("/tmp/qkdcoex_profile_a.csv") == slurp("/tmp/qkdcoex_profile_b.csv"));
}

TEST_CASE("sweeps re-run byte-identically") {
  const std::string conf = config_dir() + "/paper.conf";
  REQUIRE(run("sweep-distance --config " + conf + " --out /tmp/qkdcoex_sw_a.csv") == 0);
  REQUIRE(run("sweep-distance --config " + conf + " --out /tmp/qkdcoex_sw_b.csv") == 0);
  const std::string a = slurp("/tmp/qkdcoex_sw_a.csv");
  CHECK(a == slurp("/tmp/qkdcoex_sw_b.csv"));

  // emitted CSV parses back with the pinned header
  std::istringstream in(a);
  const auto rows = qkdcoex::parse_rate_csv(in);
  CHECK(rows.size() == 23);  // 0..110 km in 5 km steps

  // the filter override changes the physics
  REQUIRE(run("sweep-distance --config " + conf +
              " --filter 25ghz --out /tmp/qkdcoex_sw_25.csv") == 0);
  CHECK(slurp("/tmp/qkdcoex_sw_25.csv") != a);
}

TEST_CASE("plan dump carries the pinned columns") {
  const std::string conf = config_dir() + "/paper.conf";
  REQUIRE(run("plan --config " + conf + " --out /tmp/qkdcoex_plan.csv") == 0);
  const std::string text = slurp("/tmp/qkdcoex_plan.csv");
  CHECK(text.rfind("index,frequency_thz,wavelength_nm,role,launch_dbm\n", 0) == 0);
  CHECK(text.find("quantum") != std::string::npos);
}

TEST_CASE("montecarlo respects the seed") {
  const std::string conf = config_dir() + "/paper.conf";
  // a reduced gate count keeps this test quick; still above the 1e5 floor.
  // Inline coefficients replace the profile reference, which is relative to
  // the original config directory.
  std::ofstream small("/tmp/qkdcoex_small.conf");
  small << slurp(conf) << "\n[raman]\nrho = 1529.55nm : 2.4e-9\nrho = 1529.94nm : 2.4e-9\n"
        << "e_det = 0.041\n\n[montecarlo]\nnum_gates = 1000000\n";
  small.close();
  REQUIRE(run("montecarlo --config /tmp/qkdcoex_small.conf --seed 5"
              " --out /tmp/qkdcoex_mc_a.csv") == 0);
  REQUIRE(run("montecarlo --config /tmp/qkdcoex_small.conf --seed 5"
              " --out /tmp/qkdcoex_mc_b.csv") == 0);
  CHECK(slurp("/tmp/qkdcoex_mc_a.csv") == slurp("/tmp/qkdcoex_mc_b.csv"));
  REQUIRE(run("montecarlo --config /tmp/qkdcoex_small.conf --seed 6"
              " --out /tmp/qkdcoex_mc_c.csv") == 0);
  CHECK(slurp("/tmp/qkdcoex_mc_a.csv") != slurp("/tmp/qkdcoex_mc_c.csv"));
}

TEST_CASE("keyflow consumes a rate csv") {
  const std::string conf = config_dir() + "/paper.conf";
  REQUIRE(run("simulate --config " + conf + " --out /tmp/qkdcoex_point.csv") == 0);
  REQUIRE(run("keyflow --rates-csv /tmp/qkdcoex_point.csv --cards 2 --duration 0.5"
              " --out /tmp/qkdcoex_kf.csv") == 0);
  const std::string trace = slurp("/tmp/qkdcoex_kf.csv");
  CHECK(trace.rfind("t,event,level\n", 0) == 0);
  CHECK(trace.find("refresh") != std::string::npos);
}

TEST_CASE("errors surface as nonzero exits") {
  CHECK(run("simulate --config /nonexistent.conf") != 0);
  CHECK(run("nonsense-subcommand") != 0);
}

TEST_SUITE_END();
