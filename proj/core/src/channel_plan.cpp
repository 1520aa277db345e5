#include "qkdcoex/channel_plan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qkdcoex/units.hpp"

namespace qkdcoex {

namespace {

constexpr double kGridBaseThz = 190.0;
constexpr double kGridStepThz = 0.1;
constexpr double kItuIndexMin = -40.0;
constexpr double kItuIndexMax = 80.0;
constexpr double kMinSpacingThz = 0.05;        // 50 GHz grid floor
constexpr double kLambdaTolNm = 0.01;          // wavelength/frequency consistency
// two wavelengths printed to 0.01 nm can each sit ~1.3 GHz off their grid
// slot, so the spacing check allows that much slack against print rounding
constexpr double kSpacingSlackThz = 0.0026;
constexpr double kCwdmBandHalfWidthNm = 9.0;   // 18 nm usable band

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

std::string to_string(ChannelRole role) {
  switch (role) {
    case ChannelRole::quantum: return "quantum";
    case ChannelRole::data: return "data";
    case ChannelRole::sync: return "sync";
    case ChannelRole::reconciliation: return "reconciliation";
  }
  return "?";
}

ChannelRole channel_role_from_string(const std::string& s) {
  if (s == "quantum") return ChannelRole::quantum;
  if (s == "data") return ChannelRole::data;
  if (s == "sync") return ChannelRole::sync;
  if (s == "reconciliation") return ChannelRole::reconciliation;
  fail("unknown channel role '" + s + "'");
}

std::string to_string(FilterKind kind) {
  return kind == FilterKind::ghz100 ? "100ghz" : "25ghz";
}

FilterKind filter_kind_from_string(const std::string& s) {
  if (s == "100ghz") return FilterKind::ghz100;
  if (s == "25ghz") return FilterKind::ghz25;
  fail("unknown filter kind '" + s + "' (expected 100ghz or 25ghz)");
}

double itu_channel_to_frequency_thz(double itu_index) {
  if (!(itu_index >= kItuIndexMin && itu_index <= kItuIndexMax)) {
    std::ostringstream os;
    os << "ITU grid index " << itu_index << " outside supported range [" << kItuIndexMin
       << ", " << kItuIndexMax << "]";
    fail(os.str());
  }
  return kGridBaseThz + kGridStepThz * itu_index;
}

double frequency_to_wavelength_nm(double frequency_thz) {
  if (!(frequency_thz > 0.0)) {
    fail("frequency must be positive, got " + std::to_string(frequency_thz) + " THz");
  }
  return kSpeedOfLightNmThz / frequency_thz;
}

double wavelength_to_frequency_thz(double wavelength_nm) {
  if (!(wavelength_nm > 0.0)) {
    fail("wavelength must be positive, got " + std::to_string(wavelength_nm) + " nm");
  }
  return kSpeedOfLightNmThz / wavelength_nm;
}

double cwdm_band_center_nm(double wavelength_nm) {
  // 20 nm band grid anchored on the 1531 nm band.
  return 1531.0 + 20.0 * std::round((wavelength_nm - 1531.0) / 20.0);
}

long cwdm_band_capacity(double band_center_nm, double channel_spacing_ghz) {
  if (!(channel_spacing_ghz > 0.0)) {
    fail("channel spacing must be positive");
  }
  const double f_high = wavelength_to_frequency_thz(band_center_nm - kCwdmBandHalfWidthNm);
  const double f_low = wavelength_to_frequency_thz(band_center_nm + kCwdmBandHalfWidthNm);
  return static_cast<long>(std::floor((f_high - f_low) * 1000.0 / channel_spacing_ghz));
}

const OpticalChannel& ChannelPlan::quantum_channel() const {
  for (const auto& ch : channels) {
    if (ch.role == ChannelRole::quantum) return ch;
  }
  throw std::logic_error("plan has no quantum channel");
}

std::vector<const OpticalChannel*> ChannelPlan::data_channels() const {
  std::vector<const OpticalChannel*> out;
  for (const auto& ch : channels) {
    if (ch.role == ChannelRole::data) out.push_back(&ch);
  }
  return out;
}

const MuxElement* ChannelPlan::rx_spectral_filter() const {
  for (const auto& el : rx_chain) {
    if (el.is_spectral_filter()) return &el;
  }
  return nullptr;
}

namespace {

OpticalChannel make_channel(const PlanChannelSpec& spec) {
  OpticalChannel ch;
  ch.itu_index = spec.itu_index;
  ch.role = spec.role;
  if (spec.wavelength_nm) {
    // Printed-wavelength override: the frequency follows the wavelength so
    // the lambda = c/f invariant holds; the grid index stays as a label.
    ch.wavelength_nm = *spec.wavelength_nm;
    ch.center_frequency_thz = wavelength_to_frequency_thz(ch.wavelength_nm);
  } else {
    ch.center_frequency_thz = itu_channel_to_frequency_thz(spec.itu_index);
    ch.wavelength_nm = frequency_to_wavelength_nm(ch.center_frequency_thz);
  }
  if (spec.launch_power_dbm) {
    if (spec.role == ChannelRole::quantum) {
      fail("quantum channel carries no classical launch power");
    }
    ch.launch_power_dbm = spec.launch_power_dbm;
  }
  return ch;
}

}  // namespace

ChannelPlan build_plan(const PlanConfig& config) {
  ChannelPlan plan;
  plan.channels.reserve(config.channels.size());
  for (const auto& spec : config.channels) {
    plan.channels.push_back(make_channel(spec));
  }

  const bool has_data = std::any_of(plan.channels.begin(), plan.channels.end(),
                                    [](const auto& c) { return c.role == ChannelRole::data; });
  if (has_data) {
    plan.tx_chain.push_back({MuxKind::dwdm96, config.dwdm_insertion_db, {}, {}});
  }
  plan.tx_chain.push_back({MuxKind::cwdm, config.cwdm_insertion_db, {}, {}});
  plan.rx_chain.push_back({MuxKind::cwdm, config.cwdm_insertion_db, {}, {}});
  if (config.rx_filter == FilterKind::ghz100) {
    plan.rx_chain.push_back(
        {MuxKind::spectral_filter_100ghz, config.filter_100ghz_insertion_db, 100.0, {}});
  } else {
    plan.rx_chain.push_back({MuxKind::spectral_filter_25ghz, config.filter_25ghz_insertion_db,
                             25.0, config.filter_25ghz_fwhm_ghz});
  }

  validate_plan(plan);
  return plan;
}

void validate_plan(const ChannelPlan& plan) {
  int quantum_count = 0;
  for (const auto& ch : plan.channels) {
    if (ch.role == ChannelRole::quantum) ++quantum_count;
    if (!(ch.itu_index >= kItuIndexMin && ch.itu_index <= kItuIndexMax)) {
      fail("channel index " + std::to_string(ch.itu_index) + " outside the supported grid");
    }
    const double expected_nm = frequency_to_wavelength_nm(ch.center_frequency_thz);
    if (std::abs(expected_nm - ch.wavelength_nm) > kLambdaTolNm) {
      std::ostringstream os;
      os << "channel " << ch.itu_index << ": wavelength " << ch.wavelength_nm
         << " nm inconsistent with " << ch.center_frequency_thz << " THz";
      fail(os.str());
    }
    if (ch.role == ChannelRole::quantum && ch.launch_power_dbm) {
      fail("quantum channel carries no classical launch power");
    }
  }
  if (quantum_count != 1) {
    fail("plan must contain exactly one quantum channel, found " +
         std::to_string(quantum_count));
  }

  for (std::size_t i = 0; i < plan.channels.size(); ++i) {
    for (std::size_t j = i + 1; j < plan.channels.size(); ++j) {
      const double df =
          std::abs(plan.channels[i].center_frequency_thz - plan.channels[j].center_frequency_thz);
      if (df < 1e-9) {
        std::ostringstream os;
        os << "duplicate channel frequency " << plan.channels[i].center_frequency_thz << " THz";
        fail(os.str());
      }
      if (df < kMinSpacingThz - kSpacingSlackThz) {
        std::ostringstream os;
        os << "channel spacing " << df * 1000.0 << " GHz below the 50 GHz grid floor";
        fail(os.str());
      }
    }
  }

  const auto& q = plan.quantum_channel();
  const double q_band = cwdm_band_center_nm(q.wavelength_nm);
  for (const auto* d : plan.data_channels()) {
    if (cwdm_band_center_nm(d->wavelength_nm) == q_band) {
      std::ostringstream os;
      os << "data channel at " << d->wavelength_nm
         << " nm shares the quantum channel's CWDM band (" << q_band << " nm)";
      fail(os.str());
    }
  }

  for (const auto& el : plan.tx_chain) {
    if (el.insertion_loss_db < 0.0) fail("negative insertion loss in tx chain");
  }
  int rx_filters = 0;
  for (const auto& el : plan.rx_chain) {
    if (el.insertion_loss_db < 0.0) fail("negative insertion loss in rx chain");
    if (el.is_spectral_filter()) ++rx_filters;
    if (el.passband_ghz && el.fwhm_ghz && *el.fwhm_ghz > *el.passband_ghz) {
      fail("filter FWHM exceeds its passband");
    }
  }
  if (!plan.rx_chain.empty() && rx_filters != 1) {
    fail("rx chain must end in exactly one spectral filter, found " +
         std::to_string(rx_filters));
  }
  if (!plan.rx_chain.empty() && !plan.rx_chain.back().is_spectral_filter()) {
    fail("rx chain must end in the spectral filter");
  }
}

}  // namespace qkdcoex
