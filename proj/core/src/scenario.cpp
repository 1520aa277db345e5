#include "qkdcoex/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qkdcoex/units.hpp"

namespace qkdcoex {

void ProtocolParams::validate() const {
  if (!(mu > nu1 && nu1 > nu2 && nu2 >= 0.0)) {
    throw std::invalid_argument("decoy intensities must satisfy mu > nu1 > nu2 >= 0");
  }
  if (!(nu1 + nu2 < mu)) {
    throw std::invalid_argument("two-decoy bound needs nu1 + nu2 < mu");
  }
  if (std::abs(p_signal + p_nu1 + p_nu2 - 1.0) > 1e-9) {
    throw std::invalid_argument("state emission probabilities must sum to 1");
  }
  if (!(p_signal > 0.0 && p_nu1 > 0.0 && p_nu2 > 0.0)) {
    throw std::invalid_argument("state emission probabilities must be positive");
  }
  if (!(p_basis_major > 0.5 && p_basis_major < 1.0)) {
    throw std::invalid_argument("majority basis probability must lie in (1/2, 1)");
  }
  if (!(f_ec >= 1.0)) {
    throw std::invalid_argument("error-correction inefficiency must be >= 1");
  }
  if (!(clock_rate_hz > 0.0)) {
    throw std::invalid_argument("clock rate must be positive");
  }
}

void LinkScenario::validate() const {
  validate_plan(plan);
  span.validate();
  detector.validate();
  protocol.validate();
  raman.validate();
  if (!(e_det >= 0.0 && e_det <= 0.5)) {
    throw std::invalid_argument("intrinsic error rate outside [0, 0.5]");
  }
  if (!(power_scale > 0.0)) {
    throw std::invalid_argument("power scale must be positive");
  }
}

void LinkScenario::set_filter(FilterKind filter) {
  plan_config.rx_filter = filter;
  plan = build_plan(plan_config);
}

std::vector<double> LinkScenario::channel_launch_dbm() const {
  const double scale_db = 10.0 * std::log10(power_scale);
  std::vector<double> out;
  for (const auto* ch : plan.data_channels()) {
    double dbm;
    if (launch_mode == LaunchMode::rx_floor) {
      dbm = rx_floor_dbm + fiber_loss_db(span);
    } else {
      dbm = ch->launch_power_dbm.value_or(fixed_launch_dbm);
    }
    out.push_back(dbm + scale_db);
  }
  return out;
}

std::vector<double> LinkScenario::channel_launch_w() const {
  std::vector<double> out;
  for (double dbm : channel_launch_dbm()) {
    out.push_back(dbm_to_watts(dbm));
  }
  return out;
}

LaunchPlan LinkScenario::launch_plan() const {
  return LaunchPlan{channel_launch_dbm(), power_cap_dbm};
}

double LinkScenario::nominal_bandwidth_gbps() const {
  return 100.0 * static_cast<double>(plan.data_channels().size()) * power_scale;
}

LinkScenario default_scenario(FilterKind filter, int num_data_channels) {
  if (num_data_channels < 1 || num_data_channels > 44) {
    throw std::invalid_argument("data channel count must lie in [1, 44]");
  }
  PlanConfig pc;
  pc.rx_filter = filter;
  pc.channels.push_back({37.0, {}, ChannelRole::quantum, {}});
  // data lasers walk down the 50 GHz grid from channel 60 (1529.55 nm)
  for (int i = 0; i < num_data_channels; ++i) {
    pc.channels.push_back({60.0 - 0.5 * i, {}, ChannelRole::data, {}});
  }

  LinkScenario s;
  s.plan_config = pc;
  s.plan = build_plan(pc);
  s.span = FiberSpan{50.0, 0.19};
  s.raman.quantum_wavelength_nm = s.plan.quantum_channel().wavelength_nm;
  for (const auto* d : s.plan.data_channels()) {
    s.raman.entries.push_back({d->wavelength_nm, 2.4e-9});  // placeholder until calibrated
  }
  return s;
}

}  // namespace qkdcoex
