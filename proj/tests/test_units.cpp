#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qkdcoex/units.hpp"

using namespace qkdcoex;

TEST_SUITE_BEGIN("units");

TEST_CASE("dbm/watts anchor points") {
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(dbm_to_watts(-25.5) == doctest::Approx(2.818383e-6).epsilon(1e-6));
  CHECK(watts_to_dbm(2.818383e-6) == doctest::Approx(-25.5).epsilon(1e-6));
  CHECK(watts_to_dbm(1e-3) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("dbm/watts are strict inverses on positive powers") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dbm(-80.0, 30.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = dbm(rng);
    const double rt = watts_to_dbm(dbm_to_watts(p));
    CHECK(std::abs(rt - p) <= 1e-9 * std::max(1.0, std::abs(p)));
  }
}

TEST_CASE("non-positive watts rejected") {
  CHECK_THROWS_AS(watts_to_dbm(0.0), std::domain_error);
  CHECK_THROWS_AS(watts_to_dbm(-1.0), std::domain_error);
}

TEST_CASE("transmittance") {
  CHECK(transmittance_from_db(0.0) == 1.0);
  CHECK(transmittance_from_db(10.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(transmittance_from_db(9.6) == doctest::Approx(0.10964782).epsilon(1e-6));
  CHECK_THROWS_AS(transmittance_from_db(-0.1), std::domain_error);
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binary_entropy(0.11) == doctest::Approx(0.499916).epsilon(1e-5));
  CHECK(binary_entropy(0.3) == binary_entropy(0.7));  // symmetry
  CHECK_THROWS_AS(binary_entropy(-0.01), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(1.01), std::domain_error);
}

TEST_SUITE_END();
