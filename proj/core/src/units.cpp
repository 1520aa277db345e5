#include "qkdcoex/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qkdcoex {

double dbm_to_watts(double power_dbm) noexcept {
  return 1e-3 * std::pow(10.0, power_dbm / 10.0);
}

double watts_to_dbm(double power_w) {
  if (!(power_w > 0.0)) {
    throw std::domain_error("watts_to_dbm: power must be positive, got " +
                            std::to_string(power_w));
  }
  return 10.0 * std::log10(power_w / 1e-3);
}

double transmittance_from_db(double loss_db) {
  if (loss_db < 0.0) {
    throw std::domain_error("transmittance_from_db: negative loss " + std::to_string(loss_db));
  }
  return std::pow(10.0, -loss_db / 10.0);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("binary_entropy: argument outside [0,1]: " + std::to_string(x));
  }
  if (x == 0.0 || x == 1.0) {
    return 0.0;
  }
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace qkdcoex
