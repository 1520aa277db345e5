#pragma once

#include <vector>

#include "qkdcoex/channel_plan.hpp"
#include "qkdcoex/link_budget.hpp"
#include "qkdcoex/noise_model.hpp"

namespace qkdcoex {

struct ProtocolParams {
  double mu = 0.4;
  double nu1 = 0.1;
  double nu2 = 7e-3;
  double p_basis_major = 31.0 / 32.0;
  double p_signal = 0.9;
  double p_nu1 = 0.05;
  double p_nu2 = 0.05;
  double f_ec = 1.16;
  double clock_rate_hz = 1e9;

  // keys are distilled from the majority basis only
  double sift_factor() const { return p_basis_major * p_basis_major; }
  bool operator==(const ProtocolParams&) const = default;
  void validate() const;
};

enum class LaunchMode {
  fixed,     // per-channel powers as configured
  rx_floor,  // launch = floor + fibre loss, keeping received power constant
};

/// Full input to one simulation point.
struct LinkScenario {
  PlanConfig plan_config;  // source description; plan is built from it
  ChannelPlan plan;
  FiberSpan span;
  DetectorParams detector;
  ProtocolParams protocol;
  RamanProfile raman;
  double e_det = 0.0;  // intrinsic signal error rate, calibration-determined

  LaunchMode launch_mode = LaunchMode::rx_floor;
  double rx_floor_dbm = -35.0;
  double fixed_launch_dbm = -25.5;  // default for channels without explicit power
  double power_cap_dbm = 0.0;
  double power_scale = 1.0;  // linear multiplier on every data channel (bandwidth axis)

  void validate() const;

  /// Rebuilds the plan with a different rx spectral filter.
  void set_filter(FilterKind filter);

  /// Resolved per-data-channel launch powers, dBm, in plan order.
  std::vector<double> channel_launch_dbm() const;
  std::vector<double> channel_launch_w() const;
  LaunchPlan launch_plan() const;

  /// Nominal aggregate data bandwidth: 100 Gb/s per channel-equivalent of
  /// launch power (the coexistence experiments' accounting convention).
  double nominal_bandwidth_gbps() const;
};

/// The experiment's default coexistence scenario: quantum channel 37, data
/// lasers on the 50 GHz grid from channel 60 downward in frequency.
LinkScenario default_scenario(FilterKind filter = FilterKind::ghz100, int num_data_channels = 2);

}  // namespace qkdcoex
