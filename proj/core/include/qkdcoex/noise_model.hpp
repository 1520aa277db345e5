#pragma once

#include <vector>

#include "qkdcoex/channel_plan.hpp"
#include "qkdcoex/link_budget.hpp"

namespace qkdcoex {

struct RamanEntry {
  double pump_nm = 0.0;
  double rho = 0.0;  // W per (W * km * nm), referred to the detector input

  bool operator==(const RamanEntry&) const = default;
};

struct RamanProfile {
  double quantum_wavelength_nm = 1547.72;
  std::vector<RamanEntry> entries;

  /// Coefficient for the nearest tabulated pump wavelength.
  double rho_for_pump(double pump_nm) const;
  void validate() const;
};

struct DetectorParams {
  double efficiency = 0.225;
  double dark_count_prob = 4.5e-6;  // per gate, per detector
  double gate_rate_hz = 1e9;
  double effective_on_time_s = 125e-12;
  int num_detectors = 2;
  double afterpulse_prob = 0.0;  // folded additively into dark counts

  bool operator==(const DetectorParams&) const = default;
  void validate() const;
};

/// Effective rectangular noise bandwidth of a spectral filter, as a wavelength
/// width at the quantum wavelength. Uses the measured FWHM when present,
/// otherwise the nominal passband.
double filter_noise_bandwidth_nm(const MuxElement& filter, double quantum_wavelength_nm);

/// Co-propagating spontaneous Raman power scattered into the quantum channel
/// by one pump: P_R = P * rho * dlambda * L * 10^(-alpha L / 10).
double forward_raman_power_w(double launch_power_w, double rho, const FiberSpan& span,
                             double delta_lambda_nm);

/// Sum of forward_raman_power_w over the plan's data channels, each with its
/// own coefficient, using the given per-channel launch powers (watts).
double total_forward_raman_w(const ChannelPlan& plan, const std::vector<double>& launch_w,
                             const RamanProfile& profile, const FiberSpan& span,
                             double delta_lambda_nm);

/// Distance maximising L * 10^(-alpha L / 10): L* = 10 / (alpha * ln 10).
double raman_peak_distance_km(double attenuation_db_per_km);

struct BackgroundClick {
  double photon_rate_hz = 0.0;     // Raman photons at the detector input
  double p_raman_per_gate = 0.0;   // per detector
  double y0 = 0.0;                 // total background yield per gate
};

/// Per-gate background click probability from Raman power plus dark counts,
/// in the small-probability union approximation.
BackgroundClick background_click_prob(double raman_power_w, const DetectorParams& det,
                                      double quantum_wavelength_nm);

}  // namespace qkdcoex
