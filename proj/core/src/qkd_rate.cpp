#include "qkdcoex/qkd_rate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkdcoex/units.hpp"

namespace qkdcoex {

void GainStats::validate() const {
  for (double q : {q_mu, q_nu1, q_nu2}) {
    if (!(q > 0.0 && q <= 1.0)) {
      throw std::invalid_argument("gains must lie in (0, 1]");
    }
  }
  for (double e : {e_mu, e_nu1, e_nu2}) {
    if (!(e >= 0.0 && e <= 0.5)) {
      throw std::invalid_argument("QBERs must lie in [0, 0.5]");
    }
  }
  if (!(y0 >= 0.0 && y0 <= 1.0)) {
    throw std::invalid_argument("background yield outside [0, 1]");
  }
}

GainQber gain_and_qber(double intensity, double t_sys, double y0, double e_det, double e0) {
  if (intensity < 0.0) throw std::invalid_argument("intensity must be non-negative");
  if (!(t_sys >= 0.0 && t_sys <= 1.0)) throw std::invalid_argument("t_sys outside [0, 1]");
  if (!(y0 >= 0.0 && y0 <= 0.5)) throw std::invalid_argument("y0 outside [0, 0.5]");
  if (!(e_det >= 0.0 && e_det <= 0.5)) throw std::invalid_argument("e_det outside [0, 0.5]");

  const double s = 1.0 - std::exp(-intensity * t_sys);
  GainQber out;
  out.gain = y0 + s;
  out.qber = out.gain > 0.0 ? (e0 * y0 + e_det * s) / out.gain : e0;
  return out;
}

DecoyBounds decoy_bounds(const GainStats& stats, const ProtocolParams& params) {
  params.validate();
  const double mu = params.mu, nu1 = params.nu1, nu2 = params.nu2;
  const double denom = mu * (nu1 - nu2) - (nu1 * nu1 - nu2 * nu2);
  if (!(denom > 0.0)) {
    throw std::invalid_argument("decoy bound denominator mu(nu1-nu2)-(nu1^2-nu2^2) not positive");
  }

  const double g_mu = stats.q_mu * std::exp(mu);
  const double g_nu1 = stats.q_nu1 * std::exp(nu1);
  const double g_nu2 = stats.q_nu2 * std::exp(nu2);

  DecoyBounds out;
  out.y0_lower = std::max(0.0, (nu1 * g_nu2 - nu2 * g_nu1) / (nu1 - nu2));
  const double y1 = (mu / denom) *
                    (g_nu1 - g_nu2 - ((nu1 * nu1 - nu2 * nu2) / (mu * mu)) * (g_mu - out.y0_lower));
  out.y1_lower = std::max(0.0, y1);
  if (out.y1_lower > 0.0) {
    const double num = stats.e_nu1 * g_nu1 - stats.e_nu2 * g_nu2;
    out.e1_upper = std::min(0.5, num / ((nu1 - nu2) * out.y1_lower));
  } else {
    out.e1_upper = 0.5;
  }
  return out;
}

double system_transmittance(const LinkScenario& scenario) {
  const double loss = quantum_path_loss_db(scenario.plan, scenario.span);
  return transmittance_from_db(loss) * scenario.detector.efficiency;
}

namespace {

double scenario_y0(const LinkScenario& scenario, double* raman_w_out) {
  const MuxElement* filter = scenario.plan.rx_spectral_filter();
  double raman_w = 0.0;
  if (filter != nullptr && !scenario.plan.data_channels().empty()) {
    const double dlambda =
        filter_noise_bandwidth_nm(*filter, scenario.plan.quantum_channel().wavelength_nm);
    raman_w = total_forward_raman_w(scenario.plan, scenario.channel_launch_w(), scenario.raman,
                                    scenario.span, dlambda);
  }
  if (raman_w_out != nullptr) *raman_w_out = raman_w;
  return background_click_prob(raman_w, scenario.detector,
                               scenario.plan.quantum_channel().wavelength_nm)
      .y0;
}

}  // namespace

GainStats scenario_gains(const LinkScenario& scenario) {
  const double t_sys = system_transmittance(scenario);
  const double y0 = scenario_y0(scenario, nullptr);
  GainStats g;
  g.y0 = y0;
  const auto mu = gain_and_qber(scenario.protocol.mu, t_sys, y0, scenario.e_det);
  const auto n1 = gain_and_qber(scenario.protocol.nu1, t_sys, y0, scenario.e_det);
  const auto n2 = gain_and_qber(scenario.protocol.nu2, t_sys, y0, scenario.e_det);
  g.q_mu = mu.gain;
  g.e_mu = mu.qber;
  g.q_nu1 = n1.gain;
  g.e_nu1 = n1.qber;
  g.q_nu2 = n2.gain;
  g.e_nu2 = n2.qber;
  return g;
}

RatePoint secure_rate(const LinkScenario& scenario) {
  scenario.validate();
  const auto& proto = scenario.protocol;

  double raman_w = 0.0;
  const double y0 = scenario_y0(scenario, &raman_w);
  const double t_sys = system_transmittance(scenario);

  GainStats g;
  g.y0 = y0;
  {
    const auto mu = gain_and_qber(proto.mu, t_sys, y0, scenario.e_det);
    const auto n1 = gain_and_qber(proto.nu1, t_sys, y0, scenario.e_det);
    const auto n2 = gain_and_qber(proto.nu2, t_sys, y0, scenario.e_det);
    g.q_mu = mu.gain;
    g.e_mu = mu.qber;
    g.q_nu1 = n1.gain;
    g.e_nu1 = n1.qber;
    g.q_nu2 = n2.gain;
    g.e_nu2 = n2.qber;
  }

  const auto bounds = decoy_bounds(g, proto);
  const double q1 = bounds.y1_lower * proto.mu * std::exp(-proto.mu);
  const double sift = proto.sift_factor();

  RatePoint pt;
  pt.distance_km = scenario.span.length_km;
  pt.loss_db = quantum_path_loss_db(scenario.plan, scenario.span);
  pt.bandwidth_gbps = scenario.nominal_bandwidth_gbps();
  pt.raman_w = raman_w;
  pt.y0 = y0;
  pt.qber = g.e_mu;
  pt.sifted_bps = proto.clock_rate_hz * proto.p_signal * g.q_mu * sift;
  const double r = q1 * (1.0 - binary_entropy(bounds.e1_upper)) -
                   proto.f_ec * g.q_mu * binary_entropy(g.e_mu);
  pt.secure_bps = std::max(0.0, proto.clock_rate_hz * proto.p_signal * sift * r);
  return pt;
}

}  // namespace qkdcoex
