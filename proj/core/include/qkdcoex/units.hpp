#pragma once

namespace qkdcoex {

// c expressed in nm*THz so that wavelength[nm] = kSpeedOfLight / frequency[THz].
inline constexpr double kSpeedOfLightNmThz = 299792.458;

// h*c in J*m, for photon-energy arithmetic.
inline constexpr double kPlanckTimesLightJm = 1.98645e-25;

double dbm_to_watts(double power_dbm) noexcept;

/// Inverse of dbm_to_watts; rejects non-positive powers.
double watts_to_dbm(double power_w);

/// 10^(-loss/10), in (0, 1] for loss >= 0. Negative loss is rejected.
double transmittance_from_db(double loss_db);

/// Binary entropy in bits, with h2(0) = h2(1) = 0. Domain [0, 1].
double binary_entropy(double x);

}  // namespace qkdcoex
