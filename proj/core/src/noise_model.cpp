#include "qkdcoex/noise_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qkdcoex/units.hpp"

namespace qkdcoex {

double RamanProfile::rho_for_pump(double pump_nm) const {
  if (entries.empty()) {
    throw std::logic_error("Raman profile has no entries");
  }
  const RamanEntry* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) {
    const double d = std::abs(e.pump_nm - pump_nm);
    if (d < best_d) {
      best_d = d;
      best = &e;
    }
  }
  return best->rho;
}

void RamanProfile::validate() const {
  if (!(quantum_wavelength_nm > 0.0)) {
    throw std::invalid_argument("Raman profile needs a positive quantum wavelength");
  }
  if (entries.empty()) {
    throw std::invalid_argument("Raman profile has no entries");
  }
  double min_pump = std::numeric_limits<double>::infinity();
  double rho_at_min = 0.0;
  double rho_max = 0.0;
  for (const auto& e : entries) {
    if (!(e.rho > 0.0)) {
      throw std::invalid_argument("Raman coefficient must be positive at pump " +
                                  std::to_string(e.pump_nm) + " nm");
    }
    if (e.pump_nm < min_pump) {
      min_pump = e.pump_nm;
      rho_at_min = e.rho;
    }
    rho_max = std::max(rho_max, e.rho);
  }
  // the short-wavelength end of the C-band scatters the hardest
  if (rho_at_min < rho_max) {
    throw std::invalid_argument(
        "Raman profile: coefficient at the shortest pump wavelength must be maximal");
  }
}

void DetectorParams::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("detector efficiency must lie in (0, 1]");
  }
  if (!(dark_count_prob >= 0.0 && dark_count_prob <= 1.0)) {
    throw std::invalid_argument("dark count probability outside [0, 1]");
  }
  if (!(afterpulse_prob >= 0.0 && afterpulse_prob <= 1.0)) {
    throw std::invalid_argument("afterpulse probability outside [0, 1]");
  }
  if (!(gate_rate_hz > 0.0)) {
    throw std::invalid_argument("gate rate must be positive");
  }
  if (!(effective_on_time_s > 0.0) || effective_on_time_s > 1.0 / gate_rate_hz) {
    throw std::invalid_argument("effective on-time must lie in (0, 1/gate_rate]");
  }
  if (num_detectors < 1) {
    throw std::invalid_argument("need at least one detector");
  }
}

double filter_noise_bandwidth_nm(const MuxElement& filter, double quantum_wavelength_nm) {
  if (!filter.passband_ghz) {
    throw std::invalid_argument("spectral filter has no passband");
  }
  const double df_ghz = filter.fwhm_ghz ? *filter.fwhm_ghz : *filter.passband_ghz;
  // dlambda = lambda^2 * df / c
  return quantum_wavelength_nm * quantum_wavelength_nm * (df_ghz * 1e-3) / kSpeedOfLightNmThz;
}

double forward_raman_power_w(double launch_power_w, double rho, const FiberSpan& span,
                             double delta_lambda_nm) {
  if (launch_power_w < 0.0 || rho < 0.0 || delta_lambda_nm < 0.0) {
    throw std::invalid_argument("forward_raman_power_w: negative input");
  }
  span.validate();
  const double l = span.length_km;
  return launch_power_w * rho * delta_lambda_nm * l *
         std::pow(10.0, -span.attenuation_db_per_km * l / 10.0);
}

double total_forward_raman_w(const ChannelPlan& plan, const std::vector<double>& launch_w,
                             const RamanProfile& profile, const FiberSpan& span,
                             double delta_lambda_nm) {
  const auto data = plan.data_channels();
  if (data.size() != launch_w.size()) {
    throw std::invalid_argument("launch power count does not match the plan's data channels");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double rho = profile.rho_for_pump(data[i]->wavelength_nm);
    total += forward_raman_power_w(launch_w[i], rho, span, delta_lambda_nm);
  }
  return total;
}

double raman_peak_distance_km(double attenuation_db_per_km) {
  if (!(attenuation_db_per_km > 0.0)) {
    throw std::invalid_argument("attenuation must be positive");
  }
  return 10.0 / (attenuation_db_per_km * std::log(10.0));
}

BackgroundClick background_click_prob(double raman_power_w, const DetectorParams& det,
                                      double quantum_wavelength_nm) {
  det.validate();
  if (raman_power_w < 0.0) {
    throw std::invalid_argument("Raman power must be non-negative");
  }
  BackgroundClick out;
  out.photon_rate_hz = raman_power_w * (quantum_wavelength_nm * 1e-9) / kPlanckTimesLightJm;
  out.p_raman_per_gate = out.photon_rate_hz * det.efficiency * det.effective_on_time_s;
  out.y0 = det.num_detectors *
           (det.dark_count_prob + det.afterpulse_prob + out.p_raman_per_gate);
  return out;
}

}  // namespace qkdcoex
