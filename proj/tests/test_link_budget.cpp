#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qkdcoex/link_budget.hpp"
#include "qkdcoex/units.hpp"

using namespace qkdcoex;

namespace {

ChannelPlan two_laser_plan(FilterKind filter) {
  PlanConfig pc;
  pc.rx_filter = filter;
  pc.channels.push_back({37.0, {}, ChannelRole::quantum, {}});
  pc.channels.push_back({60.0, {}, ChannelRole::data, {}});
  pc.channels.push_back({59.5, {}, ChannelRole::data, {}});
  return build_plan(pc);
}

}  // namespace

TEST_SUITE_BEGIN("link_budget");

TEST_CASE("fiber loss") {
  CHECK(fiber_loss_db({35.5, 0.1915}) == doctest::Approx(6.80).epsilon(1e-3));
  CHECK(fiber_loss_db({101.0, 0.19}) == doctest::Approx(19.19).epsilon(1e-12));
  CHECK(fiber_loss_db({0.0, 0.19}) == 0.0);
}

TEST_CASE("fiber loss is linear in length") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> len(0.0, 120.0);
  for (int i = 0; i < 200; ++i) {
    const double a = len(rng), b = len(rng);
    const double alpha = 0.19;
    const double lhs = fiber_loss_db({a + b, alpha});
    const double rhs = fiber_loss_db({a, alpha}) + fiber_loss_db({b, alpha});
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("span validation") {
  CHECK_THROWS_AS(fiber_loss_db({-1.0, 0.19}), std::invalid_argument);
  CHECK_THROWS_AS(fiber_loss_db({10.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(fiber_loss_db({10.0, 1.0}), std::invalid_argument);
}

TEST_CASE("total launch power") {
  LaunchPlan hundred;
  hundred.channel_powers_dbm.assign(100, -25.5);
  const auto agg = total_launch_power(hundred);
  CHECK(agg.total_dbm == doctest::Approx(-5.5).epsilon(1e-9));
  CHECK_FALSE(agg.exceeds_cap);

  LaunchPlan one;
  one.channel_powers_dbm = {-25.5};
  CHECK(total_launch_power(one).total_dbm == doctest::Approx(-25.5).epsilon(1e-9));

  LaunchPlan hot;
  hot.channel_powers_dbm = {-3.0, -3.0};
  const auto agg2 = total_launch_power(hot);
  CHECK(agg2.total_dbm == doctest::Approx(0.0103).epsilon(1e-2));
  CHECK(agg2.exceeds_cap);  // flagged, not clamped
  CHECK(agg2.total_watts == doctest::Approx(2.0 * dbm_to_watts(-3.0)).epsilon(1e-12));

  CHECK_THROWS_AS(total_launch_power(LaunchPlan{}), std::invalid_argument);
}

TEST_CASE("quantum path loss composition") {
  // 50.5 km at the measured 9.6 dB: fibre + 1.0 + 1.0 + 0.9 = 12.5 dB
  const FiberSpan span{50.5, 9.6 / 50.5};
  const auto plan100 = two_laser_plan(FilterKind::ghz100);
  CHECK(quantum_path_loss_db(plan100, span) == doctest::Approx(12.5).epsilon(1e-9));

  // 25 GHz filter swap adds exactly 2.0 - 0.9 = 1.1 dB
  const auto plan25 = two_laser_plan(FilterKind::ghz25);
  CHECK(quantum_path_loss_db(plan25, span) - quantum_path_loss_db(plan100, span) ==
        doctest::Approx(1.1).epsilon(1e-9));

  // degenerate bare bench: no mux elements at all
  ChannelPlan bare;
  bare.channels = plan100.channels;
  CHECK(quantum_path_loss_db(bare, {0.0, 0.19}) == 0.0);

  // a chain without its spectral filter is an error
  ChannelPlan broken = plan100;
  broken.rx_chain.pop_back();
  CHECK_THROWS_AS(quantum_path_loss_db(broken, span), std::invalid_argument);

  // the DWDM mux stage applies to data only, never the quantum path
  CHECK(quantum_path_loss_db(plan100, {0.0, 0.19}) == doctest::Approx(2.9).epsilon(1e-12));
}

TEST_CASE("quantum path loss is monotone in span length and insertion losses") {
  const auto plan = two_laser_plan(FilterKind::ghz100);
  double prev = -1.0;
  for (double l = 0.0; l <= 100.0; l += 10.0) {
    const double loss = quantum_path_loss_db(plan, {l, 0.19});
    CHECK(loss >= prev);
    prev = loss;
  }
  PlanConfig pc;
  pc.rx_filter = FilterKind::ghz100;
  pc.channels.push_back({37.0, {}, ChannelRole::quantum, {}});
  pc.channels.push_back({60.0, {}, ChannelRole::data, {}});
  pc.cwdm_insertion_db = 1.5;  // raise one insertion loss
  CHECK(quantum_path_loss_db(build_plan(pc), {10.0, 0.19}) >
        quantum_path_loss_db(plan, {10.0, 0.19}));
}

TEST_SUITE_END();
