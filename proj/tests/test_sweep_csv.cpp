#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qkdcoex/sweep.hpp"

using namespace qkdcoex;

namespace {

LinkScenario fitted(FilterKind filter = FilterKind::ghz100) {
  LinkScenario s = default_scenario(filter, 2);
  for (auto& e : s.raman.entries) e.rho = 2.4e-9;
  s.e_det = 0.041;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("sweep_csv");

TEST_CASE("distance sweep emits one row per step and matches single points") {
  LinkScenario s = fitted();
  SweepSpec spec{SweepAxis::distance_km, 0.0, 110.0, 5.0};
  const auto result = sweep_distance(s, spec);
  REQUIRE(result.rows.size() == 23);
  CHECK(result.rows.front().distance_km == 0.0);
  CHECK(result.rows.back().distance_km == 110.0);

  // sweep rows equal independently evaluated points (order independence)
  for (std::size_t i : {std::size_t{3}, std::size_t{10}, std::size_t{20}}) {
    LinkScenario pt = s;
    pt.span.length_km = result.rows[i].distance_km;
    const auto single = secure_rate(pt);
    CHECK(single.secure_bps == result.rows[i].secure_bps);
    CHECK(single.qber == result.rows[i].qber);
  }
}

TEST_CASE("zero-length sweep gives a single row") {
  LinkScenario s = fitted();
  SweepSpec spec{SweepAxis::distance_km, 50.0, 50.0, 5.0};
  const auto result = sweep_distance(s, spec);
  CHECK(result.rows.size() == 1);
  CHECK(result.rows.front().distance_km == 50.0);
}

TEST_CASE("bandwidth sweep scales launch power per channel-equivalent") {
  LinkScenario s = fitted();
  SweepSpec spec{SweepAxis::bandwidth_gbps, 100.0, 2000.0, 100.0};
  const auto result = sweep_bandwidth(s, spec);
  REQUIRE(result.rows.size() == 20);
  CHECK(result.rows.front().bandwidth_gbps == 100.0);
  // raman power is proportional to the bandwidth axis
  const double per_gbps = result.rows.front().raman_w / 100.0;
  for (const auto& row : result.rows) {
    CHECK(row.raman_w == doctest::Approx(per_gbps * row.bandwidth_gbps).epsilon(1e-9));
  }
  CHECK(result.warnings.empty());  // -25.5 dBm per 100G stays far under 0 dBm
}

TEST_CASE("cap violations are flagged as warnings and the sweep continues") {
  LinkScenario s = fitted();
  s.power_cap_dbm = -20.0;  // absurdly low cap to trip the check
  SweepSpec spec{SweepAxis::bandwidth_gbps, 100.0, 1000.0, 100.0};
  const auto result = sweep_bandwidth(s, spec);
  CHECK(result.rows.size() == 10);
  CHECK(!result.warnings.empty());
}

TEST_CASE("csv header and shape are pinned") {
  LinkScenario s = fitted();
  const auto result = sweep_distance(s, {SweepAxis::distance_km, 0.0, 110.0, 5.0});
  std::ostringstream out;
  write_rate_csv(result.rows, out);
  const std::string text = out.str();

  std::istringstream lines(text);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "distance_km,loss_db,bandwidth_gbps,raman_w,y0,sifted_bps,qber,secure_bps");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 23);

  // byte determinism of the emitter
  std::ostringstream again;
  write_rate_csv(sweep_distance(s, {SweepAxis::distance_km, 0.0, 110.0, 5.0}).rows, again);
  CHECK(again.str() == text);

  CHECK_THROWS_AS(write_rate_csv({}, out), std::invalid_argument);
}

TEST_CASE("rate csv parses back") {
  LinkScenario s = fitted();
  const auto result = sweep_distance(s, {SweepAxis::distance_km, 0.0, 50.0, 10.0});
  std::ostringstream out;
  write_rate_csv(result.rows, out);
  std::istringstream in(out.str());
  const auto parsed = parse_rate_csv(in);
  REQUIRE(parsed.size() == result.rows.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].secure_bps == result.rows[i].secure_bps);  // %.17g is lossless
    CHECK(parsed[i].qber == result.rows[i].qber);
  }
}

TEST_CASE("launch sweep overrides per-channel powers and more power means more noise") {
  LinkScenario s = fitted();
  const auto result = run_sweep(s, {SweepAxis::launch_dbm, -30.0, -10.0, 5.0});
  REQUIRE(result.rows.size() == 5);
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    CHECK(result.rows[i].raman_w > result.rows[i - 1].raman_w);
    CHECK(result.rows[i].secure_bps <= result.rows[i - 1].secure_bps);
  }
}

TEST_CASE("single-point scenario helpers reject nonsense") {
  LinkScenario s = fitted();
  CHECK_THROWS_AS(static_cast<void>(scenario_at_bandwidth(s, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(scenario_at_bandwidth(s, -100.0)), std::invalid_argument);
}

TEST_SUITE_END();
