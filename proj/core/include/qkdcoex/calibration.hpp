#pragma once

#include <string>
#include <vector>

#include "qkdcoex/scenario.hpp"

namespace qkdcoex {

struct CalibrationAnchor {
  double distance_km = 0.0;
  FilterKind filter = FilterKind::ghz100;
  double bandwidth_gbps = 200.0;
  double observed_secure_bps = 0.0;
};

struct FitParams {
  bool rho = true;
  bool e_det = true;

  int count() const { return (rho ? 1 : 0) + (e_det ? 1 : 0); }
};

struct CalibrationResult {
  RamanProfile profile;
  double e_det = 0.0;
  std::vector<double> log_residuals;  // ln(model / observed), anchor order
  double objective = 0.0;             // sum of squared log residuals
  double max_abs_residual = 0.0;
  bool within_threshold = true;
};

/// Deterministic least-squares fit of the Raman coefficient (shared across
/// the plan's pumps) and/or the intrinsic error rate against observed secure
/// rates, minimising sum of squared log-ratios. Coarse grid search followed
/// by coordinate golden-section refinement; identical inputs give identical
/// results. Throws when anchors are fewer than the free parameters.
CalibrationResult calibrate_raman(const LinkScenario& base,
                                  const std::vector<CalibrationAnchor>& anchors,
                                  const FitParams& fit = {},
                                  double failure_threshold = 1.5);

/// Applies an anchor's operating point (distance, filter, bandwidth) to a
/// copy of the base scenario. Also used by the sweep drivers.
LinkScenario scenario_for_anchor(const LinkScenario& base, const CalibrationAnchor& anchor);

std::vector<CalibrationAnchor> parse_anchors_csv(const std::string& text);
std::vector<CalibrationAnchor> load_anchors_csv(const std::string& path);

}  // namespace qkdcoex
