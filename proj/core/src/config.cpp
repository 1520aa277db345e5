#include "qkdcoex/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qkdcoex/sweep.hpp"

namespace qkdcoex {

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& msg) {
  throw std::runtime_error("config: " + where + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

enum class Unit { none, seconds, hertz, km, nm, dbm, db };

// value -> base unit of the key (seconds, Hz, km, nm, dBm, dB or bare)
double parse_quantity(const std::string& raw, Unit unit, const std::string& where) {
  const std::string text = trim(raw);
  if (text.empty()) parse_fail(where, "empty value");
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    parse_fail(where, "not a number: '" + text + "'");
  }
  const std::string suffix = lower(trim(text.substr(pos)));
  if (suffix.empty()) return value;

  static const std::map<std::string, double> seconds{
      {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}};
  static const std::map<std::string, double> hertz{
      {"hz", 1.0}, {"khz", 1e3}, {"mhz", 1e6}, {"ghz", 1e9}, {"thz", 1e12}};
  static const std::map<std::string, double> km{{"km", 1.0}, {"m", 1e-3}};
  switch (unit) {
    case Unit::seconds:
      if (auto it = seconds.find(suffix); it != seconds.end()) return value * it->second;
      break;
    case Unit::hertz:
      if (auto it = hertz.find(suffix); it != hertz.end()) return value * it->second;
      break;
    case Unit::km:
      if (auto it = km.find(suffix); it != km.end()) return value * it->second;
      break;
    case Unit::nm:
      if (suffix == "nm") return value;
      break;
    case Unit::dbm:
      if (suffix == "dbm") return value;
      break;
    case Unit::db:
      if (suffix == "db") return value;
      break;
    case Unit::none:
      break;
  }
  parse_fail(where, "unit suffix '" + suffix + "' not valid here");
}

std::uint64_t parse_count(const std::string& raw, const std::string& where) {
  const double v = parse_quantity(raw, Unit::none, where);
  if (!(v >= 0.0) || v != std::floor(v)) parse_fail(where, "expected a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

// "60", "60:1529.55nm", "60@-25.5dBm", "60:1529.55nm@-25.5dBm"
ChannelEntry parse_channel_entry(const std::string& raw, const std::string& where) {
  ChannelEntry entry;
  std::string body = raw;
  if (auto at = body.find('@'); at != std::string::npos) {
    entry.launch_dbm = parse_quantity(body.substr(at + 1), Unit::dbm, where);
    body = body.substr(0, at);
  }
  if (auto colon = body.find(':'); colon != std::string::npos) {
    entry.wavelength_nm = parse_quantity(body.substr(colon + 1), Unit::nm, where);
    body = body.substr(0, colon);
  }
  entry.itu_index = parse_quantity(body, Unit::none, where);
  return entry;
}

RamanEntry parse_rho_entry(const std::string& raw, const std::string& where) {
  const auto colon = raw.find(':');
  if (colon == std::string::npos) {
    parse_fail(where, "expected 'pump_wavelength : coefficient'");
  }
  RamanEntry e;
  e.pump_nm = parse_quantity(raw.substr(0, colon), Unit::nm, where);
  e.rho = parse_quantity(raw.substr(colon + 1), Unit::none, where);
  return e;
}

std::string fmt(double v) { return format_csv_number(v); }

}  // namespace

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::distance_km: return "distance_km";
    case SweepAxis::bandwidth_gbps: return "bandwidth_gbps";
    case SweepAxis::launch_dbm: return "launch_dbm";
  }
  return "?";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "distance_km") return SweepAxis::distance_km;
  if (s == "bandwidth_gbps") return SweepAxis::bandwidth_gbps;
  if (s == "launch_dbm") return SweepAxis::launch_dbm;
  throw std::runtime_error("unknown sweep axis '" + s + "'");
}

void SweepSpec::validate() const {
  if (!(start <= stop)) throw std::invalid_argument("sweep start must not exceed stop");
  if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
}

std::vector<double> SweepSpec::points() const {
  validate();
  std::vector<double> out;
  // half-step slack so stop lands on the grid despite rounding
  for (double v = start; v <= stop + step * 0.5; v += step) {
    out.push_back(std::min(v, stop));
  }
  if (!out.empty() && out.back() < stop - step * 0.5) out.push_back(stop);
  return out;
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  bool channels_given = false;

  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(where, "unterminated section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      static const char* known[] = {"fiber", "quantum", "classical", "filters",
                                    "detector", "protocol", "raman", "sweep", "montecarlo"};
      if (std::find_if(std::begin(known), std::end(known),
                       [&](const char* k) { return section == k; }) == std::end(known)) {
        parse_fail(where, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(where, "expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    const std::string ctx = where + " [" + section + "] " + key;

    if (section == "fiber") {
      if (key == "length_km") cfg.length_km = parse_quantity(value, Unit::km, ctx);
      else if (key == "attenuation_db_per_km") cfg.attenuation_db_per_km = parse_quantity(value, Unit::none, ctx);
      else parse_fail(ctx, "unknown key");
    } else if (section == "quantum") {
      if (key == "itu_channel") cfg.quantum_itu_channel = parse_quantity(value, Unit::none, ctx);
      else if (key == "wavelength_nm") cfg.quantum_wavelength_nm = parse_quantity(value, Unit::nm, ctx);
      else parse_fail(ctx, "unknown key");
    } else if (section == "classical") {
      if (key == "channel") {
        cfg.data_channels.push_back(parse_channel_entry(value, ctx));
        channels_given = true;
      } else if (key == "launch_mode") {
        const std::string m = lower(value);
        if (m == "fixed") cfg.launch_mode = LaunchMode::fixed;
        else if (m == "rx_floor") cfg.launch_mode = LaunchMode::rx_floor;
        else parse_fail(ctx, "expected fixed or rx_floor");
      } else if (key == "rx_floor_dbm") cfg.rx_floor_dbm = parse_quantity(value, Unit::dbm, ctx);
      else if (key == "launch_dbm") cfg.fixed_launch_dbm = parse_quantity(value, Unit::dbm, ctx);
      else if (key == "power_cap_dbm") cfg.power_cap_dbm = parse_quantity(value, Unit::dbm, ctx);
      else if (key == "sync_channel") cfg.sync_itu_channel = parse_quantity(value, Unit::none, ctx);
      else if (key == "reconciliation_channel") cfg.reconciliation_itu_channel = parse_quantity(value, Unit::none, ctx);
      else parse_fail(ctx, "unknown key");
    } else if (section == "filters") {
      if (key == "rx_filter") cfg.rx_filter = filter_kind_from_string(lower(value));
      else if (key == "cwdm_insertion_db") cfg.cwdm_insertion_db = parse_quantity(value, Unit::db, ctx);
      else if (key == "dwdm_insertion_db") cfg.dwdm_insertion_db = parse_quantity(value, Unit::db, ctx);
      else if (key == "filter_100ghz_insertion_db") cfg.filter_100ghz_insertion_db = parse_quantity(value, Unit::db, ctx);
      else if (key == "filter_25ghz_insertion_db") cfg.filter_25ghz_insertion_db = parse_quantity(value, Unit::db, ctx);
      else if (key == "filter_25ghz_fwhm_ghz") cfg.filter_25ghz_fwhm_ghz = parse_quantity(value, Unit::none, ctx);
      else parse_fail(ctx, "unknown key");
    } else if (section == "detector") {
      if (key == "efficiency") cfg.detector.efficiency = parse_quantity(value, Unit::none, ctx);
      else if (key == "dark_count_prob") cfg.detector.dark_count_prob = parse_quantity(value, Unit::none, ctx);
      else if (key == "gate_rate") cfg.detector.gate_rate_hz = parse_quantity(value, Unit::hertz, ctx);
      else if (key == "effective_on_time") cfg.detector.effective_on_time_s = parse_quantity(value, Unit::seconds, ctx);
      else if (key == "num_detectors") cfg.detector.num_detectors = static_cast<int>(parse_count(value, ctx));
      else if (key == "afterpulse_prob") cfg.detector.afterpulse_prob = parse_quantity(value, Unit::none, ctx);
      else parse_fail(ctx, "unknown key");
    } else if (section == "protocol") {
      if (key == "mu") cfg.protocol.mu = parse_quantity(value, Unit::none, ctx);
      else if (key == "nu1") cfg.protocol.nu1 = parse_quantity(value, Unit::none, ctx);
      else if (key == "nu2") cfg.protocol.nu2 = parse_quantity(value, Unit::none, ctx);
      else if (key == "p_basis_major") cfg.protocol.p_basis_major = parse_quantity(value, Unit::none, ctx);
      else if (key == "p_signal") cfg.protocol.p_signal = parse_quantity(value, Unit::none, ctx);
      else if (key == "p_nu1") cfg.protocol.p_nu1 = parse_quantity(value, Unit::none, ctx);
      else if (key == "p_nu2") cfg.protocol.p_nu2 = parse_quantity(value, Unit::none, ctx);
      else if (key == "f_ec") cfg.protocol.f_ec = parse_quantity(value, Unit::none, ctx);
      else if (key == "clock_rate") cfg.protocol.clock_rate_hz = parse_quantity(value, Unit::hertz, ctx);
      else parse_fail(ctx, "unknown key");
    } else if (section == "raman") {
      if (key == "rho") cfg.raman_entries.push_back(parse_rho_entry(value, ctx));
      else if (key == "e_det") cfg.e_det = parse_quantity(value, Unit::none, ctx);
      else if (key == "profile") cfg.raman_profile_path = value;
      else parse_fail(ctx, "unknown key");
    } else if (section == "sweep") {
      if (!cfg.sweep) cfg.sweep = SweepSpec{};
      if (key == "axis") cfg.sweep->axis = sweep_axis_from_string(lower(value));
      else if (key == "start") cfg.sweep->start = parse_quantity(value, Unit::none, ctx);
      else if (key == "stop") cfg.sweep->stop = parse_quantity(value, Unit::none, ctx);
      else if (key == "step") cfg.sweep->step = parse_quantity(value, Unit::none, ctx);
      else parse_fail(ctx, "unknown key");
    } else if (section == "montecarlo") {
      if (key == "num_gates") cfg.mc_num_gates = parse_count(value, ctx);
      else if (key == "seed") cfg.mc_seed = parse_count(value, ctx);
      else parse_fail(ctx, "unknown key");
    } else {
      parse_fail(where, "key outside any section");
    }
  }

  if (!channels_given && cfg.data_channels.empty()) {
    cfg.data_channels = {{60.0, {}, {}}, {59.5, {}, {}}};  // the experiment's two 100G lasers
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "[fiber]\n";
  os << "length_km = " << fmt(c.length_km) << "\n";
  os << "attenuation_db_per_km = " << fmt(c.attenuation_db_per_km) << "\n";
  os << "\n[quantum]\n";
  os << "itu_channel = " << fmt(c.quantum_itu_channel) << "\n";
  if (c.quantum_wavelength_nm) os << "wavelength_nm = " << fmt(*c.quantum_wavelength_nm) << "\n";
  os << "\n[classical]\n";
  for (const auto& ch : c.data_channels) {
    os << "channel = " << fmt(ch.itu_index);
    if (ch.wavelength_nm) os << ":" << fmt(*ch.wavelength_nm) << "nm";
    if (ch.launch_dbm) os << "@" << fmt(*ch.launch_dbm) << "dBm";
    os << "\n";
  }
  os << "launch_mode = " << (c.launch_mode == LaunchMode::fixed ? "fixed" : "rx_floor") << "\n";
  os << "rx_floor_dbm = " << fmt(c.rx_floor_dbm) << "\n";
  os << "launch_dbm = " << fmt(c.fixed_launch_dbm) << "\n";
  os << "power_cap_dbm = " << fmt(c.power_cap_dbm) << "\n";
  if (c.sync_itu_channel) os << "sync_channel = " << fmt(*c.sync_itu_channel) << "\n";
  if (c.reconciliation_itu_channel)
    os << "reconciliation_channel = " << fmt(*c.reconciliation_itu_channel) << "\n";
  os << "\n[filters]\n";
  os << "rx_filter = " << to_string(c.rx_filter) << "\n";
  os << "cwdm_insertion_db = " << fmt(c.cwdm_insertion_db) << "\n";
  os << "dwdm_insertion_db = " << fmt(c.dwdm_insertion_db) << "\n";
  os << "filter_100ghz_insertion_db = " << fmt(c.filter_100ghz_insertion_db) << "\n";
  os << "filter_25ghz_insertion_db = " << fmt(c.filter_25ghz_insertion_db) << "\n";
  os << "filter_25ghz_fwhm_ghz = " << fmt(c.filter_25ghz_fwhm_ghz) << "\n";
  os << "\n[detector]\n";
  os << "efficiency = " << fmt(c.detector.efficiency) << "\n";
  os << "dark_count_prob = " << fmt(c.detector.dark_count_prob) << "\n";
  os << "gate_rate = " << fmt(c.detector.gate_rate_hz) << "\n";
  os << "effective_on_time = " << fmt(c.detector.effective_on_time_s) << "\n";
  os << "num_detectors = " << c.detector.num_detectors << "\n";
  os << "afterpulse_prob = " << fmt(c.detector.afterpulse_prob) << "\n";
  os << "\n[protocol]\n";
  os << "mu = " << fmt(c.protocol.mu) << "\n";
  os << "nu1 = " << fmt(c.protocol.nu1) << "\n";
  os << "nu2 = " << fmt(c.protocol.nu2) << "\n";
  os << "p_basis_major = " << fmt(c.protocol.p_basis_major) << "\n";
  os << "p_signal = " << fmt(c.protocol.p_signal) << "\n";
  os << "p_nu1 = " << fmt(c.protocol.p_nu1) << "\n";
  os << "p_nu2 = " << fmt(c.protocol.p_nu2) << "\n";
  os << "f_ec = " << fmt(c.protocol.f_ec) << "\n";
  os << "clock_rate = " << fmt(c.protocol.clock_rate_hz) << "\n";
  os << "\n[raman]\n";
  for (const auto& e : c.raman_entries) {
    os << "rho = " << fmt(e.pump_nm) << "nm : " << fmt(e.rho) << "\n";
  }
  if (c.e_det) os << "e_det = " << fmt(*c.e_det) << "\n";
  if (c.raman_profile_path) os << "profile = " << *c.raman_profile_path << "\n";
  if (c.sweep) {
    os << "\n[sweep]\n";
    os << "axis = " << to_string(c.sweep->axis) << "\n";
    os << "start = " << fmt(c.sweep->start) << "\n";
    os << "stop = " << fmt(c.sweep->stop) << "\n";
    os << "step = " << fmt(c.sweep->step) << "\n";
  }
  os << "\n[montecarlo]\n";
  os << "num_gates = " << c.mc_num_gates << "\n";
  os << "seed = " << c.mc_seed << "\n";
  return os.str();
}

PlanConfig build_plan_config(const ScenarioConfig& c) {
  PlanConfig pc;
  pc.rx_filter = c.rx_filter;
  pc.cwdm_insertion_db = c.cwdm_insertion_db;
  pc.dwdm_insertion_db = c.dwdm_insertion_db;
  pc.filter_100ghz_insertion_db = c.filter_100ghz_insertion_db;
  pc.filter_25ghz_insertion_db = c.filter_25ghz_insertion_db;
  pc.filter_25ghz_fwhm_ghz = c.filter_25ghz_fwhm_ghz;
  pc.channels.push_back(
      {c.quantum_itu_channel, c.quantum_wavelength_nm, ChannelRole::quantum, {}});
  for (const auto& ch : c.data_channels) {
    pc.channels.push_back({ch.itu_index, ch.wavelength_nm, ChannelRole::data, ch.launch_dbm});
  }
  if (c.sync_itu_channel) {
    pc.channels.push_back({*c.sync_itu_channel, {}, ChannelRole::sync, {}});
  }
  if (c.reconciliation_itu_channel) {
    pc.channels.push_back({*c.reconciliation_itu_channel, {}, ChannelRole::reconciliation, {}});
  }
  return pc;
}

LinkScenario build_scenario(const ScenarioConfig& c, const std::string& base_dir,
                            bool require_raman) {
  LinkScenario s;
  s.plan_config = build_plan_config(c);
  s.plan = build_plan(s.plan_config);
  s.span = FiberSpan{c.length_km, c.attenuation_db_per_km};
  s.detector = c.detector;
  s.protocol = c.protocol;
  s.launch_mode = c.launch_mode;
  s.rx_floor_dbm = c.rx_floor_dbm;
  s.fixed_launch_dbm = c.fixed_launch_dbm;
  s.power_cap_dbm = c.power_cap_dbm;

  s.raman.quantum_wavelength_nm = s.plan.quantum_channel().wavelength_nm;
  double profile_e_det = 0.0;
  bool resolved = false;
  if (!c.raman_entries.empty()) {
    s.raman.entries = c.raman_entries;
    resolved = true;
  } else if (c.raman_profile_path) {
    std::filesystem::path p(*c.raman_profile_path);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    if (require_raman || std::filesystem::exists(p)) {
      const auto file = load_profile_file(p.string());
      s.raman.entries = file.profile.entries;
      profile_e_det = file.e_det;
      resolved = true;
    }
  } else if (require_raman) {
    throw std::runtime_error(
        "no Raman calibration: set [raman] rho entries or profile, or run `calibrate`");
  }
  if (!resolved) {
    // calibration driver path: values get fitted and replaced
    for (const auto* d : s.plan.data_channels()) {
      s.raman.entries.push_back({d->wavelength_nm, 1e-9});
    }
  }
  s.e_det = c.e_det.value_or(profile_e_det);
  s.validate();
  return s;
}

void save_profile(const RamanProfileFile& data, std::ostream& out) {
  out << "pump_nm,rho,units\n";
  out << "quantum," << fmt(data.profile.quantum_wavelength_nm) << ",nm\n";
  for (const auto& e : data.profile.entries) {
    out << fmt(e.pump_nm) << "," << fmt(e.rho) << ",w_per_w_km_nm\n";
  }
  out << "e_det," << fmt(data.e_det) << ",fraction\n";
}

RamanProfileFile load_profile(std::istream& in) {
  RamanProfileFile data;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "pump_nm,rho,units") {
        throw std::runtime_error("profile CSV: unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ',')) {
      throw std::runtime_error("profile CSV: malformed row '" + line + "'");
    }
    if (a == "quantum") {
      data.profile.quantum_wavelength_nm = std::stod(b);
    } else if (a == "e_det") {
      data.e_det = std::stod(b);
    } else {
      data.profile.entries.push_back({std::stod(a), std::stod(b)});
    }
  }
  if (!header_seen || data.profile.entries.empty()) {
    throw std::runtime_error("profile CSV: no coefficient rows");
  }
  return data;
}

RamanProfileFile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile file '" + path + "'");
  return load_profile(in);
}

}  // namespace qkdcoex
