#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qkdcoex/montecarlo.hpp"

using namespace qkdcoex;

namespace {

LinkScenario fitted(FilterKind filter = FilterKind::ghz100) {
  LinkScenario s = default_scenario(filter, 2);
  for (auto& e : s.raman.entries) e.rho = 2.4e-9;
  s.e_det = 0.041;
  return s;
}

double zscore(double empirical, double analytic, double sigma) {
  return sigma > 0.0 ? (empirical - analytic) / sigma : 0.0;
}

}  // namespace

TEST_SUITE_BEGIN("montecarlo");

TEST_CASE("identical seed and gate count reproduce the trial bit for bit") {
  LinkScenario s = fitted();
  TrialConfig cfg;
  cfg.num_gates = (1u << 20) + 12345;  // straddles a shard boundary
  cfg.seed = 99;
  const auto a = run_trial(s, cfg);
  const auto b = run_trial(s, cfg);
  CHECK(a.mu.gates == b.mu.gates);
  CHECK(a.mu.clicks == b.mu.clicks);
  CHECK(a.mu.errors == b.mu.errors);
  CHECK(a.nu1.clicks == b.nu1.clicks);
  CHECK(a.nu2.clicks == b.nu2.clicks);
  CHECK(a.vacuum_clicks == b.vacuum_clicks);
  CHECK(a.single_clicks == b.single_clicks);
  CHECK(a.single_errors == b.single_errors);

  TrialConfig other = cfg;
  other.seed = 100;
  const auto c = run_trial(s, other);
  CHECK(a.mu.clicks != c.mu.clicks);  // different stream
}

TEST_CASE("dark counts only: empirical y0 within 4 sigma of 9e-6") {
  LinkScenario s = fitted();
  s.span.length_km = 500.0;  // 95 dB of fibre: photons never arrive
  s.power_scale = 1e-12;     // lasers effectively off
  TrialConfig cfg{10'000'000, 21};
  const auto r = run_trial(s, cfg);
  CHECK(std::abs(zscore(r.y0_hat(), 9e-6, r.y0_sigma())) <= 4.0);
}

TEST_CASE("noiseless channel with e_det = 0 never errs") {
  LinkScenario s = fitted();
  s.e_det = 0.0;
  s.detector.dark_count_prob = 0.0;
  s.power_scale = 1e-12;
  TrialConfig cfg{1'000'000, 5};
  const auto r = run_trial(s, cfg);
  CHECK(r.mu.errors == 0);
  CHECK(r.nu1.errors == 0);
  CHECK(r.nu2.errors == 0);
  CHECK(r.mu.clicks > 0);  // plenty of signal clicks at 50 km
}

TEST_CASE("analytic gains and qbers agree with the trial within 4 sigma") {
  LinkScenario s = fitted();
  TrialConfig cfg{10'000'000, 1};
  const auto r = run_trial(s, cfg);
  const auto g = scenario_gains(s);
  CHECK(std::abs(zscore(r.mu.gain(), g.q_mu, r.mu.gain_sigma())) <= 4.0);
  CHECK(std::abs(zscore(r.mu.qber(), g.e_mu, r.mu.qber_sigma())) <= 4.0);
  CHECK(std::abs(zscore(r.nu1.gain(), g.q_nu1, r.nu1.gain_sigma())) <= 4.0);
  CHECK(std::abs(zscore(r.nu1.qber(), g.e_nu1, r.nu1.qber_sigma())) <= 4.0);
  CHECK(std::abs(zscore(r.nu2.gain(), g.q_nu2, r.nu2.gain_sigma())) <= 4.0);
  CHECK(std::abs(zscore(r.nu2.qber(), g.e_nu2, r.nu2.qber_sigma())) <= 4.0);
  CHECK(std::abs(zscore(r.y0_hat(), g.y0, r.y0_sigma())) <= 4.0);
}

TEST_CASE("doubling the data-laser power doubles the raman click rate within 4 sigma") {
  LinkScenario s = fitted();
  s.detector.dark_count_prob = 0.0;  // isolate the raman clicks
  s.power_scale = 25.0;              // strong enough to measure quickly
  TrialConfig cfg{10'000'000, 31};
  const auto r1 = run_trial(s, cfg);

  LinkScenario s2 = s;
  s2.power_scale = 50.0;
  const auto r2 = run_trial(s2, cfg);

  const double p1 = r1.y0_hat(), p2 = r2.y0_hat();
  const double sig = std::sqrt(r2.y0_sigma() * r2.y0_sigma() +
                               4.0 * r1.y0_sigma() * r1.y0_sigma());
  CHECK(p1 > 0.0);
  CHECK(std::abs(p2 - 2.0 * p1) <= 4.0 * sig);
}

TEST_CASE("decoy bounds hold against the oracle's single-photon tallies") {
  LinkScenario s = fitted();
  TrialConfig cfg{10'000'000, 1};
  const auto r = run_trial(s, cfg);
  const auto rep = verify_decoy_bounds(s, r);
  CHECK(rep.y1_holds_4sigma);
  CHECK(rep.e1_holds_4sigma);
  CHECK(rep.y1_hat > 0.0);
  CHECK(rep.bounds.y1_lower > 0.0);

  // opaque channel: the bound degenerates to zero and holds trivially
  LinkScenario opaque = s;
  opaque.span.length_km = 500.0;
  opaque.power_scale = 1e-12;
  const auto r0 = run_trial(opaque, TrialConfig{1'000'000, 3});
  const auto rep0 = verify_decoy_bounds(opaque, r0);
  CHECK(rep0.bounds.y1_lower == 0.0);
  CHECK(rep0.y1_holds);
}

TEST_CASE("across 20 seeds the analytic values sit inside 4 sigma in at least 19") {
  LinkScenario s = fitted();
  const auto g = scenario_gains(s);
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = run_trial(s, TrialConfig{1'000'000, seed});
    const bool ok = std::abs(zscore(r.mu.gain(), g.q_mu, r.mu.gain_sigma())) <= 4.0 &&
                    std::abs(zscore(r.mu.qber(), g.e_mu, r.mu.qber_sigma())) <= 4.0 &&
                    std::abs(zscore(r.y0_hat(), g.y0, r.y0_sigma())) <= 4.0;
    if (ok) ++inside;
  }
  CHECK(inside >= 19);
}

TEST_CASE("degenerate decoy intensities are rejected before running") {
  LinkScenario s = fitted();
  s.protocol.nu1 = s.protocol.nu2 = 0.05;
  TrialConfig cfg{100'000, 1};
  CHECK_THROWS_AS(static_cast<void>(run_trial(s, cfg)), std::invalid_argument);
}

TEST_CASE("too few gates rejected") {
  TrialConfig cfg{99'999, 1};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  LinkScenario s = fitted();
  CHECK_THROWS_AS(static_cast<void>(run_trial(s, cfg)), std::invalid_argument);
}

TEST_CASE("bound check requires all intensity classes populated") {
  LinkScenario s = fitted();
  TrialResult empty;
  CHECK_THROWS_AS(static_cast<void>(verify_decoy_bounds(s, empty)), std::invalid_argument);
}

TEST_SUITE_END();
