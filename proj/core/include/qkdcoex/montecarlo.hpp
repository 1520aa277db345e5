#pragma once

#include <cstdint>

#include "qkdcoex/qkd_rate.hpp"
#include "qkdcoex/scenario.hpp"

namespace qkdcoex {

struct TrialConfig {
  std::uint64_t num_gates = 100000;
  std::uint64_t seed = 0;

  void validate() const;  // num_gates >= 1e5
};

struct ClassTally {
  std::uint64_t gates = 0;
  std::uint64_t clicks = 0;
  std::uint64_t errors = 0;

  double gain() const;
  double qber() const;  // conditional on clicks
  double gain_sigma() const;
  double qber_sigma() const;
};

/// Per-gate simulation tallies. Photon-number bookkeeping (vacuum_* and
/// single_*) is oracle-only information a real receiver lacks.
struct TrialResult {
  ClassTally mu, nu1, nu2;
  std::uint64_t vacuum_gates = 0;   // gates with zero photons emitted
  std::uint64_t vacuum_clicks = 0;
  std::uint64_t single_gates = 0;   // gates with exactly one photon emitted
  std::uint64_t single_clicks = 0;
  std::uint64_t single_errors = 0;

  double y0_hat() const;
  double y0_sigma() const;
  double y1_hat() const;
  double y1_sigma() const;
  double e1_hat() const;
  double e1_sigma() const;

  GainStats empirical_gains() const;
};

/// Stochastic per-gate detection trial. Deterministic in (seed, num_gates):
/// every gate derives its own counter-based random stream, so the result is
/// independent of sharding and thread count.
TrialResult run_trial(const LinkScenario& scenario, const TrialConfig& config);

struct DecoyBoundReport {
  DecoyBounds bounds;
  double y1_hat = 0.0, y1_sigma = 0.0;
  double e1_hat = 0.0, e1_sigma = 0.0;
  // sampling noise of the bounds themselves: they are computed from the
  // empirical gains, whose binomial noise the bound formulas amplify
  double y1_bound_sigma = 0.0;
  double e1_bound_sigma = 0.0;
  bool y1_holds = false;          // y1_lower <= empirical y1, raw
  bool e1_holds = false;          // e1_upper >= empirical e1, raw
  bool y1_holds_4sigma = false;   // within 4 sigma of the combined noise
  bool e1_holds_4sigma = false;
};

/// Feeds the empirical gains into decoy_bounds and checks the bounds against
/// the oracle's true single-photon tallies.
DecoyBoundReport verify_decoy_bounds(const LinkScenario& scenario, const TrialResult& result);

}  // namespace qkdcoex
