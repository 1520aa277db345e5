#pragma once

#include <vector>

#include "qkdcoex/channel_plan.hpp"

namespace qkdcoex {

struct FiberSpan {
  double length_km = 0.0;
  double attenuation_db_per_km = 0.19;

  void validate() const;  // length >= 0, 0 < attenuation < 1
};

double fiber_loss_db(const FiberSpan& span);

struct LaunchPlan {
  std::vector<double> channel_powers_dbm;
  double cap_dbm = 0.0;
};

struct AggregatePower {
  double total_dbm = 0.0;
  double total_watts = 0.0;
  bool exceeds_cap = false;
};

/// Linear sum of the per-channel powers; flags (does not clamp) cap violations.
AggregatePower total_launch_power(const LaunchPlan& plan);

/// End-to-end loss seen by the quantum signal: fibre plus every mux element on
/// its path (the data-only DWDM mux is skipped). A completely bare plan (no
/// mux elements at all) is accepted as a 0 dB chain; otherwise a plan without
/// exactly one rx spectral filter is rejected.
double quantum_path_loss_db(const ChannelPlan& plan, const FiberSpan& span);

}  // namespace qkdcoex
