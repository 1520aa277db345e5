#include "qkdcoex/link_budget.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qkdcoex/units.hpp"

namespace qkdcoex {

void FiberSpan::validate() const {
  if (length_km < 0.0) {
    throw std::invalid_argument("fibre length must be non-negative, got " +
                                std::to_string(length_km));
  }
  if (!(attenuation_db_per_km > 0.0 && attenuation_db_per_km < 1.0)) {
    throw std::invalid_argument("fibre attenuation must lie in (0, 1) dB/km, got " +
                                std::to_string(attenuation_db_per_km));
  }
}

double fiber_loss_db(const FiberSpan& span) {
  span.validate();
  return span.length_km * span.attenuation_db_per_km;
}

AggregatePower total_launch_power(const LaunchPlan& plan) {
  if (plan.channel_powers_dbm.empty()) {
    throw std::invalid_argument("launch plan has no channels");
  }
  double total_w = 0.0;
  for (double dbm : plan.channel_powers_dbm) {
    total_w += dbm_to_watts(dbm);
  }
  AggregatePower out;
  out.total_watts = total_w;
  out.total_dbm = watts_to_dbm(total_w);
  out.exceeds_cap = out.total_dbm > plan.cap_dbm;
  return out;
}

double quantum_path_loss_db(const ChannelPlan& plan, const FiberSpan& span) {
  double loss = fiber_loss_db(span);
  if (plan.tx_chain.empty() && plan.rx_chain.empty()) {
    return loss;  // degenerate bare bench: fibre only
  }
  if (plan.rx_spectral_filter() == nullptr) {
    throw std::invalid_argument("plan lacks an rx spectral filter on the quantum path");
  }
  for (const auto& el : plan.tx_chain) {
    if (el.kind == MuxKind::dwdm96) continue;  // data-only mux stage
    loss += el.insertion_loss_db;
  }
  for (const auto& el : plan.rx_chain) {
    loss += el.insertion_loss_db;
  }
  return loss;
}

}  // namespace qkdcoex
