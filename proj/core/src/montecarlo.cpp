#include "qkdcoex/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qkdcoex {

namespace {

// Counter-based per-gate stream: every gate seeds its own SplitMix64 sequence
// from (seed, gate index), so tallies are independent of sharding and thread
// scheduling. Draw order within a gate is part of the reproducibility
// contract; keep it in sync with simulate_gate below.
struct GateRng {
  std::uint64_t state;

  GateRng(std::uint64_t seed, std::uint64_t gate) {
    state = mix(seed ^ mix(gate * 0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL));
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    state += 0x9E3779B97F4A7C15ULL;
    return mix(state);
  }

  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Inversion by sequential search; exact for the small means used here.
  int next_poisson(double mean, double exp_neg_mean) {
    const double u = next_unit();
    double p = exp_neg_mean;
    double cum = p;
    int k = 0;
    while (u > cum && k < 1024) {
      ++k;
      p *= mean / k;
      cum += p;
    }
    return k;
  }
};

struct GateModel {
  double p_signal, p_nu1;           // class thresholds
  double intensity[3];              // mu, nu1, nu2
  double exp_neg[3];
  double t_sys;
  double e_det;
  double p_bg;                      // per-detector background click prob
};

struct Tallies {
  ClassTally cls[3];
  std::uint64_t vacuum_gates = 0, vacuum_clicks = 0;
  std::uint64_t single_gates = 0, single_clicks = 0, single_errors = 0;

  void add(const Tallies& o) {
    for (int i = 0; i < 3; ++i) {
      cls[i].gates += o.cls[i].gates;
      cls[i].clicks += o.cls[i].clicks;
      cls[i].errors += o.cls[i].errors;
    }
    vacuum_gates += o.vacuum_gates;
    vacuum_clicks += o.vacuum_clicks;
    single_gates += o.single_gates;
    single_clicks += o.single_clicks;
    single_errors += o.single_errors;
  }
};

void simulate_gate(const GateModel& m, GateRng& rng, Tallies& t) {
  // 1. intensity class
  const double uc = rng.next_unit();
  const int cls = uc < m.p_signal ? 0 : (uc < m.p_signal + m.p_nu1 ? 1 : 2);
  // 2. encoded bit
  const int bit = rng.next_unit() < 0.5 ? 0 : 1;
  // 3. photon number
  const int n = rng.next_poisson(m.intensity[cls], m.exp_neg[cls]);
  // 4. survival + detector routing per photon
  bool click[2] = {false, false};
  for (int i = 0; i < n; ++i) {
    if (rng.next_unit() < m.t_sys) {
      const bool flip = rng.next_unit() < m.e_det;
      click[flip ? bit ^ 1 : bit] = true;
    }
  }
  // 5. background per detector
  if (rng.next_unit() < m.p_bg) click[0] = true;
  if (rng.next_unit() < m.p_bg) click[1] = true;
  // 6. squash double clicks to a fair random bit
  int resolved = -1;
  if (click[0] && click[1]) {
    resolved = rng.next_unit() < 0.5 ? 0 : 1;
  } else if (click[0]) {
    resolved = 0;
  } else if (click[1]) {
    resolved = 1;
  }

  const bool clicked = resolved >= 0;
  const bool error = clicked && resolved != bit;
  t.cls[cls].gates++;
  if (clicked) t.cls[cls].clicks++;
  if (error) t.cls[cls].errors++;
  if (n == 0) {
    t.vacuum_gates++;
    if (clicked) t.vacuum_clicks++;
  } else if (n == 1) {
    t.single_gates++;
    if (clicked) t.single_clicks++;
    if (error) t.single_errors++;
  }
}

double binomial_sigma(double p, double n) {
  if (n <= 0.0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
}

}  // namespace

void TrialConfig::validate() const {
  if (num_gates < 100000) {
    throw std::invalid_argument("trials need at least 1e5 gates for statistical checks");
  }
}

double ClassTally::gain() const {
  return gates ? static_cast<double>(clicks) / static_cast<double>(gates) : 0.0;
}
double ClassTally::qber() const {
  return clicks ? static_cast<double>(errors) / static_cast<double>(clicks) : 0.0;
}
double ClassTally::gain_sigma() const {
  return binomial_sigma(gain(), static_cast<double>(gates));
}
double ClassTally::qber_sigma() const {
  return binomial_sigma(qber(), static_cast<double>(clicks));
}

double TrialResult::y0_hat() const {
  return vacuum_gates ? static_cast<double>(vacuum_clicks) / static_cast<double>(vacuum_gates)
                      : 0.0;
}
double TrialResult::y0_sigma() const {
  return binomial_sigma(y0_hat(), static_cast<double>(vacuum_gates));
}
double TrialResult::y1_hat() const {
  return single_gates ? static_cast<double>(single_clicks) / static_cast<double>(single_gates)
                      : 0.0;
}
double TrialResult::y1_sigma() const {
  return binomial_sigma(y1_hat(), static_cast<double>(single_gates));
}
double TrialResult::e1_hat() const {
  return single_clicks ? static_cast<double>(single_errors) / static_cast<double>(single_clicks)
                       : 0.0;
}
double TrialResult::e1_sigma() const {
  return binomial_sigma(e1_hat(), static_cast<double>(single_clicks));
}

GainStats TrialResult::empirical_gains() const {
  GainStats g;
  g.q_mu = mu.gain();
  g.e_mu = mu.qber();
  g.q_nu1 = nu1.gain();
  g.e_nu1 = nu1.qber();
  g.q_nu2 = nu2.gain();
  g.e_nu2 = nu2.qber();
  g.y0 = y0_hat();
  return g;
}

TrialResult run_trial(const LinkScenario& scenario, const TrialConfig& config) {
  config.validate();
  scenario.validate();

  GateModel m;
  m.p_signal = scenario.protocol.p_signal;
  m.p_nu1 = scenario.protocol.p_nu1;
  m.intensity[0] = scenario.protocol.mu;
  m.intensity[1] = scenario.protocol.nu1;
  m.intensity[2] = scenario.protocol.nu2;
  for (int i = 0; i < 3; ++i) m.exp_neg[i] = std::exp(-m.intensity[i]);
  m.t_sys = system_transmittance(scenario);
  m.e_det = scenario.e_det;
  const GainStats analytic = scenario_gains(scenario);
  m.p_bg = analytic.y0 / scenario.detector.num_detectors;

  // fixed shard geometry; worker threads only affect who runs which shard
  constexpr std::uint64_t kShardGates = 1 << 20;
  const std::uint64_t num_shards = (config.num_gates + kShardGates - 1) / kShardGates;
  std::vector<Tallies> shard_tallies(num_shards);

  std::atomic<std::uint64_t> next_shard{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t s = next_shard.fetch_add(1);
      if (s >= num_shards) break;
      const std::uint64_t begin = s * kShardGates;
      const std::uint64_t end = std::min(begin + kShardGates, config.num_gates);
      Tallies local;
      for (std::uint64_t gate = begin; gate < end; ++gate) {
        GateRng rng(config.seed, gate);
        simulate_gate(m, rng, local);
      }
      shard_tallies[s] = local;
    }
  };

  unsigned n_threads = std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 4;
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(num_shards));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  Tallies total;
  for (const auto& t : shard_tallies) total.add(t);

  TrialResult out;
  out.mu = total.cls[0];
  out.nu1 = total.cls[1];
  out.nu2 = total.cls[2];
  out.vacuum_gates = total.vacuum_gates;
  out.vacuum_clicks = total.vacuum_clicks;
  out.single_gates = total.single_gates;
  out.single_clicks = total.single_clicks;
  out.single_errors = total.single_errors;
  return out;
}

DecoyBoundReport verify_decoy_bounds(const LinkScenario& scenario, const TrialResult& result) {
  if (result.mu.gates == 0 || result.nu1.gates == 0 || result.nu2.gates == 0) {
    throw std::invalid_argument("decoy bound check needs all three intensity classes populated");
  }
  DecoyBoundReport rep;
  rep.bounds = decoy_bounds(result.empirical_gains(), scenario.protocol);
  rep.y1_hat = result.y1_hat();
  rep.y1_sigma = result.y1_sigma();
  rep.e1_hat = result.e1_hat();
  rep.e1_sigma = result.e1_sigma();

  // linear propagation of the gains' binomial noise through the bound
  // formulas (unclamped partials; correlations dropped, fine for a 4 sigma
  // guard band)
  const auto& p = scenario.protocol;
  const double mu = p.mu, nu1 = p.nu1, nu2 = p.nu2;
  const double denom = mu * (nu1 - nu2) - (nu1 * nu1 - nu2 * nu2);
  const double a = mu / denom;
  const double b = (nu1 * nu1 - nu2 * nu2) / (mu * mu);
  const double d_qmu = -a * b * std::exp(mu);
  const double d_qn1 = a * std::exp(nu1) * (1.0 + b * nu2 / (nu1 - nu2));
  const double d_qn2 = a * std::exp(nu2) * (-1.0 + b * nu1 / (nu1 - nu2));
  const double var_y1 = d_qmu * d_qmu * result.mu.gain_sigma() * result.mu.gain_sigma() +
                        d_qn1 * d_qn1 * result.nu1.gain_sigma() * result.nu1.gain_sigma() +
                        d_qn2 * d_qn2 * result.nu2.gain_sigma() * result.nu2.gain_sigma();
  rep.y1_bound_sigma = std::sqrt(var_y1);

  if (rep.bounds.y1_lower > 0.0) {
    auto eq_sigma = [](const ClassTally& t) {
      if (t.gates == 0) return 0.0;
      const double f = static_cast<double>(t.errors) / static_cast<double>(t.gates);
      return binomial_sigma(f, static_cast<double>(t.gates));
    };
    const double y1l = rep.bounds.y1_lower;
    const double d_f1 = std::exp(nu1) / ((nu1 - nu2) * y1l);
    const double d_f2 = -std::exp(nu2) / ((nu1 - nu2) * y1l);
    const double d_y1 = -rep.bounds.e1_upper / y1l;
    const double var_e1 = d_f1 * d_f1 * eq_sigma(result.nu1) * eq_sigma(result.nu1) +
                          d_f2 * d_f2 * eq_sigma(result.nu2) * eq_sigma(result.nu2) +
                          d_y1 * d_y1 * var_y1;
    rep.e1_bound_sigma = std::sqrt(var_e1);
  }

  const double y1_noise = std::sqrt(rep.y1_sigma * rep.y1_sigma + var_y1);
  const double e1_noise =
      std::sqrt(rep.e1_sigma * rep.e1_sigma + rep.e1_bound_sigma * rep.e1_bound_sigma);
  rep.y1_holds = rep.bounds.y1_lower <= rep.y1_hat;
  rep.e1_holds = rep.bounds.e1_upper >= rep.e1_hat;
  rep.y1_holds_4sigma = rep.bounds.y1_lower <= rep.y1_hat + 4.0 * y1_noise;
  rep.e1_holds_4sigma = rep.bounds.e1_upper >= rep.e1_hat - 4.0 * e1_noise;
  return rep;
}

}  // namespace qkdcoex
