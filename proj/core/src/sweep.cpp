#include "qkdcoex/sweep.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qkdcoex {

std::string format_csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

LinkScenario scenario_at_bandwidth(const LinkScenario& base, double bandwidth_gbps) {
  if (!(bandwidth_gbps > 0.0)) {
    throw std::invalid_argument("bandwidth must be positive");
  }
  LinkScenario s = base;
  const double n_data = static_cast<double>(s.plan.data_channels().size());
  if (n_data < 1.0) {
    throw std::invalid_argument("bandwidth sweep needs data channels in the plan");
  }
  s.power_scale = bandwidth_gbps / (100.0 * n_data);
  return s;
}

namespace {

void check_cap(const LinkScenario& s, double axis_value, const char* axis_name,
               std::vector<std::string>& warnings) {
  const auto agg = total_launch_power(s.launch_plan());
  if (agg.exceeds_cap) {
    std::ostringstream os;
    os << axis_name << " " << format_csv_number(axis_value) << ": total launch power "
       << format_csv_number(agg.total_dbm) << " dBm exceeds the "
       << format_csv_number(s.power_cap_dbm) << " dBm cap";
    warnings.push_back(os.str());
  }
}

}  // namespace

SweepResult sweep_distance(const LinkScenario& base, const SweepSpec& spec) {
  spec.validate();
  SweepResult out;
  for (double L : spec.points()) {
    LinkScenario s = base;
    s.span.length_km = L;
    if (!s.plan.data_channels().empty()) {
      check_cap(s, L, "distance_km", out.warnings);
    }
    out.rows.push_back(secure_rate(s));
  }
  return out;
}

SweepResult sweep_bandwidth(const LinkScenario& base, const SweepSpec& spec) {
  spec.validate();
  SweepResult out;
  for (double b : spec.points()) {
    LinkScenario s = scenario_at_bandwidth(base, b);
    check_cap(s, b, "bandwidth_gbps", out.warnings);
    RatePoint pt = secure_rate(s);
    pt.bandwidth_gbps = b;
    out.rows.push_back(pt);
  }
  return out;
}

SweepResult sweep_launch(const LinkScenario& base, const SweepSpec& spec) {
  spec.validate();
  SweepResult out;
  for (double dbm : spec.points()) {
    LinkScenario s = base;
    s.launch_mode = LaunchMode::fixed;
    s.fixed_launch_dbm = dbm;
    s.power_scale = 1.0;
    for (auto& ch : s.plan.channels) {
      if (ch.role == ChannelRole::data) ch.launch_power_dbm.reset();
    }
    check_cap(s, dbm, "launch_dbm", out.warnings);
    out.rows.push_back(secure_rate(s));
  }
  return out;
}

SweepResult run_sweep(const LinkScenario& base, const SweepSpec& spec) {
  switch (spec.axis) {
    case SweepAxis::distance_km: return sweep_distance(base, spec);
    case SweepAxis::bandwidth_gbps: return sweep_bandwidth(base, spec);
    case SweepAxis::launch_dbm: return sweep_launch(base, spec);
  }
  throw std::logic_error("unhandled sweep axis");
}

void write_rate_csv(const std::vector<RatePoint>& rows, std::ostream& out) {
  if (rows.empty()) {
    throw std::invalid_argument("refusing to emit an empty result set");
  }
  out << kRateCsvHeader << "\n";
  for (const auto& r : rows) {
    out << format_csv_number(r.distance_km) << ',' << format_csv_number(r.loss_db) << ','
        << format_csv_number(r.bandwidth_gbps) << ',' << format_csv_number(r.raman_w) << ','
        << format_csv_number(r.y0) << ',' << format_csv_number(r.sifted_bps) << ','
        << format_csv_number(r.qber) << ',' << format_csv_number(r.secure_bps) << "\n";
  }
}

void write_rate_csv_file(const std::vector<RatePoint>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical across platforms
  if (!out) {
    throw std::runtime_error("cannot write to '" + path + "'");
  }
  write_rate_csv(rows, out);
}

std::vector<RatePoint> parse_rate_csv(std::istream& in) {
  std::vector<RatePoint> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kRateCsvHeader) {
        throw std::runtime_error("rate CSV: unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string f[8];
    for (int i = 0; i < 8; ++i) {
      if (!std::getline(row, f[i], ',')) {
        throw std::runtime_error("rate CSV: malformed row '" + line + "'");
      }
    }
    RatePoint pt;
    pt.distance_km = std::stod(f[0]);
    pt.loss_db = std::stod(f[1]);
    pt.bandwidth_gbps = std::stod(f[2]);
    pt.raman_w = std::stod(f[3]);
    pt.y0 = std::stod(f[4]);
    pt.sifted_bps = std::stod(f[5]);
    pt.qber = std::stod(f[6]);
    pt.secure_bps = std::stod(f[7]);
    rows.push_back(pt);
  }
  if (!header_seen) throw std::runtime_error("rate CSV: empty input");
  return rows;
}

}  // namespace qkdcoex
