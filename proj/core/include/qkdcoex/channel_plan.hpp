#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qkdcoex {

enum class ChannelRole { quantum, data, sync, reconciliation };

enum class FilterKind { ghz100, ghz25 };

std::string to_string(ChannelRole role);
ChannelRole channel_role_from_string(const std::string& s);
std::string to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& s);

// f = 190.0 + 0.1 * n THz; n may be half-integer, C-band vicinity only.
double itu_channel_to_frequency_thz(double itu_index);
double frequency_to_wavelength_nm(double frequency_thz);
double wavelength_to_frequency_thz(double wavelength_nm);

// 20 nm CWDM banding around the 1531 nm band centre; bands are ~18 nm usable.
double cwdm_band_center_nm(double wavelength_nm);

/// Number of DWDM channels of the given spacing fitting in the 18 nm usable
/// width of the band centred at band_center_nm.
long cwdm_band_capacity(double band_center_nm, double channel_spacing_ghz);

struct OpticalChannel {
  double itu_index = 0.0;
  double center_frequency_thz = 0.0;
  double wavelength_nm = 0.0;
  ChannelRole role = ChannelRole::data;
  std::optional<double> launch_power_dbm;  // absent for the quantum channel
};

enum class MuxKind { cwdm, dwdm96, spectral_filter_100ghz, spectral_filter_25ghz };

struct MuxElement {
  MuxKind kind = MuxKind::cwdm;
  double insertion_loss_db = 0.0;
  std::optional<double> passband_ghz;  // filters only
  std::optional<double> fwhm_ghz;      // filters only

  bool is_spectral_filter() const {
    return kind == MuxKind::spectral_filter_100ghz || kind == MuxKind::spectral_filter_25ghz;
  }
};

struct ChannelPlan {
  std::vector<OpticalChannel> channels;
  std::vector<MuxElement> tx_chain;  // data-side DWDM mux, then the CWDM combiner
  std::vector<MuxElement> rx_chain;  // quantum path: CWDM split, then the spectral filter

  const OpticalChannel& quantum_channel() const;
  std::vector<const OpticalChannel*> data_channels() const;
  const MuxElement* rx_spectral_filter() const;  // nullptr when absent
};

struct PlanChannelSpec {
  double itu_index = 0.0;
  std::optional<double> wavelength_nm;  // override; frequency becomes c/lambda
  ChannelRole role = ChannelRole::data;
  std::optional<double> launch_power_dbm;
};

struct PlanConfig {
  std::vector<PlanChannelSpec> channels;
  FilterKind rx_filter = FilterKind::ghz100;
  double cwdm_insertion_db = 1.0;
  double dwdm_insertion_db = 5.0;
  double filter_100ghz_insertion_db = 0.9;
  double filter_25ghz_insertion_db = 2.0;
  double filter_25ghz_fwhm_ghz = 15.0;
};

/// Builds and validates a coexistence plan. Throws std::invalid_argument on
/// duplicate frequencies, missing/extra quantum channels, band collisions,
/// sub-50 GHz spacing, and frequency/wavelength mismatches.
ChannelPlan build_plan(const PlanConfig& config);

/// Re-checks the ChannelPlan invariants on an already-built plan.
void validate_plan(const ChannelPlan& plan);

}  // namespace qkdcoex
