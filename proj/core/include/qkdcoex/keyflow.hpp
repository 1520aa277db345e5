#pragma once

#include <cstdint>
#include <vector>

namespace qkdcoex {

struct EncryptorFleet {
  int num_line_cards = 2;
  int bits_per_key = 256;   // AES-256 key per line card
  int bits_per_push = 512;  // one push feeds two cards

  void validate() const;  // bits_per_push == 2 * bits_per_key
};

/// Shortest interval at which every card can receive a fresh key:
/// T = bits_per_key * num_cards / secure_rate. Throws on non-positive rate.
double min_refresh_interval_s(double secure_rate_bps, int num_cards);

enum class BufferEventKind { push, refresh, stall };

struct BufferEvent {
  double t_s = 0.0;
  BufferEventKind kind = BufferEventKind::push;
  double level_bits = 0.0;  // after the event
};

struct BufferTrace {
  std::vector<BufferEvent> events;
  std::uint64_t stalls = 0;
  std::uint64_t refreshes = 0;
  double discarded_bits = 0.0;   // overflow beyond capacity
  double filled_bits = 0.0;      // total pushed (before overflow)
  double drained_bits = 0.0;
  double final_level_bits = 0.0;
  double steady_state_margin_bps = 0.0;  // fill rate minus refresh demand
};

/// Discrete-event key-buffer simulation. Key material arrives in 512-bit
/// pushes at the fill rate; every policy_interval each card pair demands one
/// push worth of key. A refresh finding too little key is a stall (the
/// demand is skipped, not queued). Pushes process before refreshes at equal
/// timestamps. Overflow past capacity is discarded and counted.
BufferTrace simulate_buffer(double fill_rate_bps, const EncryptorFleet& fleet,
                            double duration_s, double policy_interval_s,
                            double capacity_bits = 1e6);

struct FecVerdict {
  bool pass = false;
  double margin_ratio = 0.0;  // threshold / ber
};

/// Pre-FEC BER sanity check against the 1.9e-2 correctable threshold
/// (boundary inclusive). BER domain [0, 0.5].
FecVerdict fec_margin(double pre_fec_ber);

inline constexpr double kFecThreshold = 1.9e-2;

}  // namespace qkdcoex
