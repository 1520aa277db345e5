#pragma once

#include "qkdcoex/scenario.hpp"

namespace qkdcoex {

struct GainStats {
  double q_mu = 0.0, e_mu = 0.0;
  double q_nu1 = 0.0, e_nu1 = 0.0;
  double q_nu2 = 0.0, e_nu2 = 0.0;
  double y0 = 0.0;

  void validate() const;
};

struct GainQber {
  double gain = 0.0;
  double qber = 0.0;
};

/// Poissonian-source detection model:
///   Q = y0 + 1 - exp(-intensity * t_sys)
///   E * Q = e0 * y0 + e_det * (1 - exp(-intensity * t_sys))
GainQber gain_and_qber(double intensity, double t_sys, double y0, double e_det,
                       double e0 = 0.5);

struct DecoyBounds {
  double y0_lower = 0.0;
  double y1_lower = 0.0;
  double e1_upper = 0.5;
};

/// Standard two-decoy asymptotic bounds on the background yield, the
/// single-photon yield and the single-photon error rate.
DecoyBounds decoy_bounds(const GainStats& stats, const ProtocolParams& params);

struct RatePoint {
  double distance_km = 0.0;
  double loss_db = 0.0;
  double bandwidth_gbps = 0.0;
  double raman_w = 0.0;
  double y0 = 0.0;
  double sifted_bps = 0.0;
  double qber = 0.0;
  double secure_bps = 0.0;
};

/// Transmittance of the full quantum path including detector efficiency.
double system_transmittance(const LinkScenario& scenario);

/// Gains and error rates for the three intensity classes of a scenario.
GainStats scenario_gains(const LinkScenario& scenario);

/// Assembles noise, gains and decoy bounds into one RatePoint. The secure
/// rate is clamped at zero.
RatePoint secure_rate(const LinkScenario& scenario);

}  // namespace qkdcoex
