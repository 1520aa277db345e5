#include "qkdcoex/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "qkdcoex/qkd_rate.hpp"

namespace qkdcoex {

namespace {

// fit box: two decades beyond the published C-band SRS coefficient range
constexpr double kLogRhoMin = -11.0;
constexpr double kLogRhoMax = -7.0;
constexpr int kRhoGridPoints = 61;
constexpr double kEdetMin = 0.0;
constexpr double kEdetMax = 0.10;
constexpr int kEdetGridPoints = 51;
constexpr int kRefineRounds = 14;
constexpr int kGoldenIters = 64;
constexpr double kRhoRefineHalfWidth = 0.2;   // decades
constexpr double kEdetRefineHalfWidth = 0.008;

double golden_minimize(const std::function<double(double)>& f, double lo, double hi) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < kGoldenIters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

void apply_params(LinkScenario& s, double rho, double e_det) {
  for (auto& e : s.raman.entries) e.rho = rho;
  s.e_det = e_det;
}

}  // namespace

LinkScenario scenario_for_anchor(const LinkScenario& base, const CalibrationAnchor& anchor) {
  LinkScenario s = base;
  s.span.length_km = anchor.distance_km;
  if (base.plan_config.rx_filter != anchor.filter) {
    s.set_filter(anchor.filter);
  }
  const double n_data = static_cast<double>(s.plan.data_channels().size());
  if (n_data < 1.0) {
    throw std::invalid_argument("anchor scenario has no data channels");
  }
  if (!(anchor.bandwidth_gbps > 0.0)) {
    throw std::invalid_argument("anchor bandwidth must be positive");
  }
  s.power_scale = anchor.bandwidth_gbps / (100.0 * n_data);
  return s;
}

CalibrationResult calibrate_raman(const LinkScenario& base,
                                  const std::vector<CalibrationAnchor>& anchors,
                                  const FitParams& fit, double failure_threshold) {
  if (fit.count() == 0) {
    throw std::invalid_argument("calibration needs at least one free parameter");
  }
  if (anchors.empty()) {
    throw std::invalid_argument("calibration needs at least one anchor");
  }
  if (static_cast<int>(anchors.size()) < fit.count()) {
    std::ostringstream os;
    os << "underdetermined fit: " << anchors.size() << " anchor(s) for " << fit.count()
       << " free parameter(s)";
    throw std::invalid_argument(os.str());
  }
  for (const auto& a : anchors) {
    if (!(a.observed_secure_bps > 0.0)) {
      throw std::invalid_argument("anchor secure rates must be positive");
    }
  }

  // pre-build one scenario per anchor; the fit only touches (rho, e_det)
  std::vector<LinkScenario> points;
  points.reserve(anchors.size());
  for (const auto& a : anchors) {
    points.push_back(scenario_for_anchor(base, a));
  }

  auto objective = [&](double rho, double e_det) {
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      apply_params(points[i], rho, e_det);
      const double rate = secure_rate(points[i]).secure_bps;
      const double res = std::log(std::max(rate, 1e-12) / anchors[i].observed_secure_bps);
      sum += res * res;
    }
    return sum;
  };

  // starting values when a parameter is held fixed
  double log_rho = std::log10(base.raman.entries.empty() ? 1e-9 : base.raman.entries[0].rho);
  double e_det = base.e_det;

  double best = 0.0;
  bool have_best = false;
  double best_lr = log_rho, best_ed = e_det;
  const int n_lr = fit.rho ? kRhoGridPoints : 1;
  const int n_ed = fit.e_det ? kEdetGridPoints : 1;
  for (int i = 0; i < n_lr; ++i) {
    const double lr = fit.rho
                          ? kLogRhoMin + (kLogRhoMax - kLogRhoMin) * i / (kRhoGridPoints - 1)
                          : log_rho;
    for (int j = 0; j < n_ed; ++j) {
      const double ed =
          fit.e_det ? kEdetMin + (kEdetMax - kEdetMin) * j / (kEdetGridPoints - 1) : e_det;
      const double v = objective(std::pow(10.0, lr), ed);
      if (!have_best || v < best) {
        best = v;
        best_lr = lr;
        best_ed = ed;
        have_best = true;
      }
    }
  }

  for (int round = 0; round < kRefineRounds; ++round) {
    if (fit.rho) {
      best_lr = golden_minimize(
          [&](double lr) { return objective(std::pow(10.0, lr), best_ed); },
          best_lr - kRhoRefineHalfWidth, best_lr + kRhoRefineHalfWidth);
    }
    if (fit.e_det) {
      best_ed = golden_minimize(
          [&](double ed) { return objective(std::pow(10.0, best_lr), std::max(0.0, ed)); },
          std::max(0.0, best_ed - kEdetRefineHalfWidth), best_ed + kEdetRefineHalfWidth);
      best_ed = std::max(0.0, best_ed);
    }
  }

  CalibrationResult result;
  result.profile.quantum_wavelength_nm = base.raman.quantum_wavelength_nm;
  const double rho_hat = std::pow(10.0, best_lr);
  for (const auto* ch : base.plan.data_channels()) {
    result.profile.entries.push_back({ch->wavelength_nm, rho_hat});
  }
  result.e_det = best_ed;
  result.objective = objective(rho_hat, best_ed);
  for (std::size_t i = 0; i < points.size(); ++i) {
    apply_params(points[i], rho_hat, best_ed);
    const double rate = secure_rate(points[i]).secure_bps;
    const double res = std::log(std::max(rate, 1e-12) / anchors[i].observed_secure_bps);
    result.log_residuals.push_back(res);
    result.max_abs_residual = std::max(result.max_abs_residual, std::abs(res));
  }
  result.within_threshold = result.max_abs_residual <= failure_threshold;
  return result;
}

std::vector<CalibrationAnchor> parse_anchors_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<CalibrationAnchor> anchors;
  bool header_seen = false;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "distance_km,filter,bandwidth_gbps,observed_secure_bps") {
        throw std::runtime_error("anchors CSV: unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string d, f, b, r;
    if (!std::getline(row, d, ',') || !std::getline(row, f, ',') ||
        !std::getline(row, b, ',') || !std::getline(row, r, ',')) {
      throw std::runtime_error("anchors CSV: malformed row '" + line + "'");
    }
    CalibrationAnchor a;
    a.distance_km = std::stod(d);
    a.filter = filter_kind_from_string(f);
    a.bandwidth_gbps = std::stod(b);
    a.observed_secure_bps = std::stod(r);
    anchors.push_back(a);
  }
  if (!header_seen) {
    throw std::runtime_error("anchors CSV: empty file");
  }
  if (anchors.empty()) {
    throw std::runtime_error("anchors CSV: no anchor rows");
  }
  return anchors;
}

std::vector<CalibrationAnchor> load_anchors_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open anchors file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_anchors_csv(buf.str());
}

}  // namespace qkdcoex
