#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qkdcoex/scenario.hpp"

namespace qkdcoex {

enum class SweepAxis { distance_km, bandwidth_gbps, launch_dbm };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepSpec {
  SweepAxis axis = SweepAxis::distance_km;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  bool operator==(const SweepSpec&) const = default;
  void validate() const;  // start <= stop, step > 0
  std::vector<double> points() const;
};

struct ChannelEntry {
  double itu_index = 0.0;
  std::optional<double> wavelength_nm;
  std::optional<double> launch_dbm;

  bool operator==(const ChannelEntry&) const = default;
};

/// Typed view of a scenario config file. Every model parameter is
/// addressable; unknown sections or keys are rejected at parse time.
struct ScenarioConfig {
  // [fiber]
  double length_km = 50.0;
  double attenuation_db_per_km = 0.19;
  // [quantum]
  double quantum_itu_channel = 37.0;
  std::optional<double> quantum_wavelength_nm;
  // [classical]
  std::vector<ChannelEntry> data_channels;  // defaults to channels 60 and 59.5
  LaunchMode launch_mode = LaunchMode::rx_floor;
  double rx_floor_dbm = -35.0;
  double fixed_launch_dbm = -25.5;
  double power_cap_dbm = 0.0;
  std::optional<double> sync_itu_channel;
  std::optional<double> reconciliation_itu_channel;
  // [filters]
  FilterKind rx_filter = FilterKind::ghz100;
  double cwdm_insertion_db = 1.0;
  double dwdm_insertion_db = 5.0;
  double filter_100ghz_insertion_db = 0.9;
  double filter_25ghz_insertion_db = 2.0;
  double filter_25ghz_fwhm_ghz = 15.0;
  // [detector]
  DetectorParams detector;
  // [protocol]
  ProtocolParams protocol;
  // [raman]
  std::vector<RamanEntry> raman_entries;  // explicit coefficients
  std::optional<double> e_det;            // overrides a loaded profile's value
  std::optional<std::string> raman_profile_path;  // CSV written by `calibrate`
  // [sweep]
  std::optional<SweepSpec> sweep;
  // [montecarlo]
  std::uint64_t mc_num_gates = 100000000;
  std::uint64_t mc_seed = 1;

  bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Canonical dump; parse(dump(parse(text))) == parse(text).
std::string dump_config(const ScenarioConfig& config);

/// Materialises the scenario: builds the plan, resolves the Raman profile
/// (explicit entries or a loaded calibration profile) and validates.
/// Paths in the config are resolved relative to base_dir when given. With
/// require_raman false a missing profile becomes a flat placeholder (used by
/// the calibration driver, which overwrites it anyway).
LinkScenario build_scenario(const ScenarioConfig& config, const std::string& base_dir = "",
                            bool require_raman = true);

PlanConfig build_plan_config(const ScenarioConfig& config);

/// Calibration profile file io (CSV: pump_nm,rho,units + fitted e_det row).
struct RamanProfileFile {
  RamanProfile profile;
  double e_det = 0.0;
};
void save_profile(const RamanProfileFile& data, std::ostream& out);
RamanProfileFile load_profile(std::istream& in);
RamanProfileFile load_profile_file(const std::string& path);

}  // namespace qkdcoex
