#include "qkdcoex/keyflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qkdcoex {

void EncryptorFleet::validate() const {
  if (num_line_cards < 1) {
    throw std::invalid_argument("fleet needs at least one line card");
  }
  if (bits_per_key <= 0 || bits_per_push != 2 * bits_per_key) {
    throw std::invalid_argument("one key push must carry exactly two card keys");
  }
}

double min_refresh_interval_s(double secure_rate_bps, int num_cards) {
  if (num_cards < 1) {
    throw std::invalid_argument("need at least one line card");
  }
  if (!(secure_rate_bps > 0.0)) {
    throw std::invalid_argument("no refresh possible: secure rate is zero");
  }
  return 256.0 * num_cards / secure_rate_bps;
}

BufferTrace simulate_buffer(double fill_rate_bps, const EncryptorFleet& fleet,
                            double duration_s, double policy_interval_s,
                            double capacity_bits) {
  fleet.validate();
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!(policy_interval_s > 0.0)) throw std::invalid_argument("policy interval must be positive");
  if (fill_rate_bps < 0.0) throw std::invalid_argument("fill rate must be non-negative");
  if (!(capacity_bits >= fleet.bits_per_push)) {
    throw std::invalid_argument("capacity below one push");
  }

  const double push_bits = fleet.bits_per_push;
  // ceil: an odd card count still consumes a full 512-bit push for its pair slot
  const double demand_bits = push_bits * std::ceil(fleet.num_line_cards / 2.0);
  const double push_period_s =
      fill_rate_bps > 0.0 ? push_bits / fill_rate_bps : std::numeric_limits<double>::infinity();

  BufferTrace trace;
  trace.steady_state_margin_bps = fill_rate_bps - demand_bits / policy_interval_s;

  double level = 0.0;
  std::uint64_t push_index = 1;
  std::uint64_t refresh_index = 1;
  for (;;) {
    const double t_push = push_period_s * static_cast<double>(push_index);
    const double t_refresh = policy_interval_s * static_cast<double>(refresh_index);
    const double t_next = std::min(t_push, t_refresh);
    if (t_next > duration_s) break;

    // pushes process before refreshes at equal timestamps
    if (t_push <= t_refresh) {
      trace.filled_bits += push_bits;
      level += push_bits;
      if (level > capacity_bits) {
        trace.discarded_bits += level - capacity_bits;
        level = capacity_bits;
      }
      trace.events.push_back({t_push, BufferEventKind::push, level});
      ++push_index;
    } else {
      ++trace.refreshes;
      if (level >= demand_bits) {
        level -= demand_bits;
        trace.drained_bits += demand_bits;
        trace.events.push_back({t_refresh, BufferEventKind::refresh, level});
      } else {
        ++trace.stalls;
        trace.events.push_back({t_refresh, BufferEventKind::stall, level});
      }
      ++refresh_index;
    }
  }
  trace.final_level_bits = level;
  return trace;
}

FecVerdict fec_margin(double pre_fec_ber) {
  if (!(pre_fec_ber >= 0.0 && pre_fec_ber <= 0.5)) {
    throw std::domain_error("pre-FEC BER outside [0, 0.5]: " + std::to_string(pre_fec_ber));
  }
  FecVerdict v;
  v.pass = pre_fec_ber <= kFecThreshold;  // "does not exceed": boundary inclusive
  v.margin_ratio = pre_fec_ber > 0.0 ? kFecThreshold / pre_fec_ber
                                     : std::numeric_limits<double>::infinity();
  return v;
}

}  // namespace qkdcoex
