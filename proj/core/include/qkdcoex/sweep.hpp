#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qkdcoex/config.hpp"
#include "qkdcoex/qkd_rate.hpp"
#include "qkdcoex/scenario.hpp"

namespace qkdcoex {

struct SweepResult {
  std::vector<RatePoint> rows;
  std::vector<std::string> warnings;  // e.g. launch-power cap violations
};

/// One RatePoint per distance step; launch powers follow the scenario's mode.
SweepResult sweep_distance(const LinkScenario& base, const SweepSpec& spec);

/// Fixed distance; bandwidth B maps onto total launch power via the
/// 100 Gb/s-per-channel-equivalent convention. Cap violations are flagged in
/// warnings and the sweep continues.
SweepResult sweep_bandwidth(const LinkScenario& base, const SweepSpec& spec);

/// Fixed distance; every data channel set to the swept launch power.
SweepResult sweep_launch(const LinkScenario& base, const SweepSpec& spec);

/// Scales a scenario to a nominal aggregate bandwidth by adjusting the
/// per-channel power multiplier.
LinkScenario scenario_at_bandwidth(const LinkScenario& base, double bandwidth_gbps);

/// Dispatches on the spec's axis.
SweepResult run_sweep(const LinkScenario& base, const SweepSpec& spec);

void write_rate_csv(const std::vector<RatePoint>& rows, std::ostream& out);
void write_rate_csv_file(const std::vector<RatePoint>& rows, const std::string& path);
std::vector<RatePoint> parse_rate_csv(std::istream& in);

/// Full-precision decimal formatting shared by every CSV writer, so
/// identical runs emit byte-identical files.
std::string format_csv_number(double v);

inline constexpr const char* kRateCsvHeader =
    "distance_km,loss_db,bandwidth_gbps,raman_w,y0,sifted_bps,qber,secure_bps";

}  // namespace qkdcoex
