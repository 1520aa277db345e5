// Scenario-driven coexistence simulator CLI: channel planning, secure-rate
// sweeps, Raman calibration, Monte Carlo checks and key-delivery accounting.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qkdcoex/calibration.hpp"
#include "qkdcoex/config.hpp"
#include "qkdcoex/keyflow.hpp"
#include "qkdcoex/montecarlo.hpp"
#include "qkdcoex/qkd_rate.hpp"
#include "qkdcoex/sweep.hpp"
#include "qkdcoex/units.hpp"

namespace {

using namespace qkdcoex;

std::string g_config_path;
std::string g_out_path = "-";
std::optional<std::uint64_t> g_seed;
std::string g_filter_override;

std::string parent_dir(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash);
}

ScenarioConfig load_cfg() {
  if (g_config_path.empty()) {
    throw std::runtime_error("--config is required for this subcommand");
  }
  return load_config(g_config_path);
}

LinkScenario load_scenario(bool require_raman = true) {
  auto cfg = load_cfg();
  LinkScenario s = build_scenario(cfg, parent_dir(g_config_path), require_raman);
  if (!g_filter_override.empty()) {
    s.set_filter(filter_kind_from_string(g_filter_override));
  }
  return s;
}

// every emitter funnels through here so identical runs give identical bytes
void write_output(const std::string& content) {
  if (g_out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(g_out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write to '" + g_out_path + "'");
  out << content;
}

std::string rate_csv_string(const std::vector<RatePoint>& rows) {
  std::ostringstream os;
  write_rate_csv(rows, os);
  return os.str();
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) {
    std::cerr << "warning: " << w << "\n";
  }
}

int cmd_plan() {
  auto cfg = load_cfg();
  if (!g_filter_override.empty()) {
    cfg.rx_filter = filter_kind_from_string(g_filter_override);
  }
  LinkScenario s = build_scenario(cfg, parent_dir(g_config_path), /*require_raman=*/false);

  const auto launches = s.channel_launch_dbm();
  std::size_t data_i = 0;

  std::ostringstream table;
  table << "role            itu     freq_thz     wavelength_nm  band_nm  launch_dbm\n";
  std::ostringstream csv;
  csv << "index,frequency_thz,wavelength_nm,role,launch_dbm\n";
  for (const auto& ch : s.plan.channels) {
    std::string launch;
    if (ch.role == ChannelRole::data) {
      launch = format_csv_number(launches[data_i++]);
    }
    char row[160];
    std::snprintf(row, sizeof(row), "%-15s %-7g %-12.6f %-14.4f %-8g %s\n",
                  to_string(ch.role).c_str(), ch.itu_index, ch.center_frequency_thz,
                  ch.wavelength_nm, cwdm_band_center_nm(ch.wavelength_nm),
                  launch.empty() ? "-" : launch.c_str());
    table << row;
    csv << format_csv_number(ch.itu_index) << ',' << format_csv_number(ch.center_frequency_thz)
        << ',' << format_csv_number(ch.wavelength_nm) << ',' << to_string(ch.role) << ','
        << launch << "\n";
  }
  table << "rx quantum-path insertion: "
        << format_csv_number(quantum_path_loss_db(s.plan, FiberSpan{0.0, s.span.attenuation_db_per_km}))
        << " dB\n";

  std::cerr << table.str();
  write_output(csv.str());
  return 0;
}

int cmd_simulate() {
  LinkScenario s = load_scenario();
  const auto pt = secure_rate(s);
  write_output(rate_csv_string({pt}));
  return 0;
}

int cmd_sweep(SweepAxis axis) {
  LinkScenario s = load_scenario();
  auto cfg = load_cfg();
  SweepSpec spec;
  if (cfg.sweep && cfg.sweep->axis == axis) {
    spec = *cfg.sweep;
  } else if (axis == SweepAxis::distance_km) {
    spec = SweepSpec{axis, 0.0, 110.0, 5.0};
  } else {
    spec = SweepSpec{axis, 100.0, 10000.0, 100.0};
  }
  SweepResult result = axis == SweepAxis::distance_km ? sweep_distance(s, spec)
                                                      : sweep_bandwidth(s, spec);
  print_warnings(result.warnings);
  write_output(rate_csv_string(result.rows));
  return 0;
}

int cmd_calibrate(const std::string& anchors_path, const std::string& fit_spec) {
  LinkScenario s = load_scenario(/*require_raman=*/false);
  const auto anchors = load_anchors_csv(anchors_path);

  FitParams fit;
  fit.rho = fit_spec.find("rho") != std::string::npos;
  fit.e_det = fit_spec.find("e_det") != std::string::npos;
  const auto result = calibrate_raman(s, anchors, fit);

  std::ostringstream profile;
  save_profile({result.profile, result.e_det}, profile);
  write_output(profile.str());

  std::cerr << "fit: rho = " << format_csv_number(result.profile.entries.front().rho)
            << " /(km*nm), e_det = " << format_csv_number(result.e_det) << "\n";
  std::cerr << "anchor residuals (ln model/observed):\n";
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    std::fprintf(stderr, "  %6.1f km  %-6s  %8.5g Gb/s  obs %.4g bps  residual %+.4f\n",
                 anchors[i].distance_km, to_string(anchors[i].filter).c_str(),
                 anchors[i].bandwidth_gbps, anchors[i].observed_secure_bps,
                 result.log_residuals[i]);
  }
  std::cerr << "objective (sum sq log residuals): " << format_csv_number(result.objective)
            << "\n";
  if (!result.within_threshold) {
    std::cerr << "calibration FAILED: max |log residual| " << result.max_abs_residual
              << " above threshold\n";
    return 2;
  }
  return 0;
}

int cmd_montecarlo() {
  LinkScenario s = load_scenario();
  auto cfg = load_cfg();
  TrialConfig trial;
  trial.num_gates = cfg.mc_num_gates;
  trial.seed = g_seed.value_or(cfg.mc_seed);

  const auto result = run_trial(s, trial);
  const auto analytic = scenario_gains(s);
  const auto report = verify_decoy_bounds(s, result);

  std::ostringstream os;
  os << "quantity,analytic,empirical,sigma,z\n";
  auto row = [&os](const char* name, double a, double e, double sig) {
    const double z = sig > 0.0 ? (e - a) / sig : 0.0;
    os << name << ',' << format_csv_number(a) << ',' << format_csv_number(e) << ','
       << format_csv_number(sig) << ',' << format_csv_number(z) << "\n";
  };
  row("q_mu", analytic.q_mu, result.mu.gain(), result.mu.gain_sigma());
  row("e_mu", analytic.e_mu, result.mu.qber(), result.mu.qber_sigma());
  row("q_nu1", analytic.q_nu1, result.nu1.gain(), result.nu1.gain_sigma());
  row("e_nu1", analytic.e_nu1, result.nu1.qber(), result.nu1.qber_sigma());
  row("q_nu2", analytic.q_nu2, result.nu2.gain(), result.nu2.gain_sigma());
  row("e_nu2", analytic.e_nu2, result.nu2.qber(), result.nu2.qber_sigma());
  row("y0", analytic.y0, result.y0_hat(), result.y0_sigma());
  row("y1_lower_bound", report.bounds.y1_lower, report.y1_hat, report.y1_sigma);
  row("e1_upper_bound", report.bounds.e1_upper, report.e1_hat, report.e1_sigma);
  write_output(os.str());

  std::cerr << "decoy bounds: y1_lower " << (report.y1_holds ? "holds" : "VIOLATED")
            << ", e1_upper " << (report.e1_holds ? "holds" : "VIOLATED") << "\n";
  return report.y1_holds_4sigma && report.e1_holds_4sigma ? 0 : 2;
}

int cmd_keyflow(double rate_bps, const std::string& rates_csv, int cards,
                double policy_interval_s, double duration_s, double capacity_bits) {
  double rate = rate_bps;
  if (!rates_csv.empty()) {
    std::ifstream in(rates_csv);
    if (!in) throw std::runtime_error("cannot open rates CSV '" + rates_csv + "'");
    const auto rows = parse_rate_csv(in);
    rate = rows.front().secure_bps;  // first point of the sweep
  }
  if (!(rate > 0.0)) {
    throw std::runtime_error("no refresh possible: secure rate is zero");
  }

  EncryptorFleet fleet;
  fleet.num_line_cards = cards;
  const double min_interval = min_refresh_interval_s(rate, cards);
  double policy = policy_interval_s > 0.0 ? policy_interval_s : min_interval * 1.05;

  const auto trace = simulate_buffer(rate, fleet, duration_s, policy, capacity_bits);

  std::ostringstream os;
  os << "t,event,level\n";
  for (const auto& ev : trace.events) {
    const char* kind = ev.kind == BufferEventKind::push
                           ? "push"
                           : (ev.kind == BufferEventKind::refresh ? "refresh" : "stall");
    os << format_csv_number(ev.t_s) << ',' << kind << ',' << format_csv_number(ev.level_bits)
       << "\n";
  }
  write_output(os.str());

  std::cerr << "secure rate: " << format_csv_number(rate) << " bps\n"
            << "min refresh interval (" << cards << " cards): "
            << format_csv_number(min_interval) << " s\n"
            << "policy interval: " << format_csv_number(policy) << " s\n"
            << "refreshes: " << trace.refreshes << ", stalls: " << trace.stalls
            << ", discarded bits: " << format_csv_number(trace.discarded_bits) << "\n"
            << "steady-state margin: " << format_csv_number(trace.steady_state_margin_bps)
            << " bps\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QKD / DWDM coexistence planner and simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name

  app.add_option("--config", g_config_path, "scenario config file");
  app.add_option("--out", g_out_path, "output path ('-' for stdout)");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Monte Carlo seed override");
  app.add_option("--filter", g_filter_override, "rx filter override (100ghz or 25ghz)")
      ->check(CLI::IsMember({"100ghz", "25ghz"}));

  auto* plan = app.add_subcommand("plan", "validate the channel plan and dump it as CSV");
  auto* simulate = app.add_subcommand("simulate", "secure rate at the configured distance");
  auto* sweep_d = app.add_subcommand("sweep-distance", "secure rate vs fibre distance");
  auto* sweep_b = app.add_subcommand("sweep-bandwidth", "secure rate vs aggregate data bandwidth");

  auto* calibrate = app.add_subcommand("calibrate", "fit Raman coefficients to observed rates");
  std::string anchors_path;
  std::string fit_spec = "rho,e_det";
  calibrate->add_option("--anchors", anchors_path,
                        "anchors CSV (distance_km,filter,bandwidth_gbps,observed_secure_bps)")
      ->required();
  calibrate->add_option("--fit", fit_spec, "free parameters: rho, e_det or rho,e_det");

  auto* mc = app.add_subcommand("montecarlo", "per-gate stochastic check of the analytic model");

  auto* keyflow = app.add_subcommand("keyflow", "AES key buffer / refresh-interval accounting");
  double kf_rate = 0.0, kf_policy = 0.0, kf_duration = 60.0, kf_capacity = 1e6;
  int kf_cards = 2;
  std::string kf_csv;
  keyflow->add_option("--rate", kf_rate, "secure key rate, bit/s");
  keyflow->add_option("--rates-csv", kf_csv, "rate CSV; the first row's secure_bps is used");
  keyflow->add_option("--cards", kf_cards, "number of 100G line cards");
  keyflow->add_option("--interval", kf_policy, "refresh policy interval, s (default: 1.05x minimum)");
  keyflow->add_option("--duration", kf_duration, "simulated duration, s");
  keyflow->add_option("--capacity", kf_capacity, "buffer capacity, bits");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) g_seed = seed_value;

  try {
    if (plan->parsed()) return cmd_plan();
    if (simulate->parsed()) return cmd_simulate();
    if (sweep_d->parsed()) return cmd_sweep(SweepAxis::distance_km);
    if (sweep_b->parsed()) return cmd_sweep(SweepAxis::bandwidth_gbps);
    if (calibrate->parsed()) return cmd_calibrate(anchors_path, fit_spec);
    if (mc->parsed()) return cmd_montecarlo();
    if (keyflow->parsed())
      return cmd_keyflow(kf_rate, kf_csv, kf_cards, kf_policy, kf_duration, kf_capacity);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
