#pragma once

#include "nanotrap/modes.hpp"
#include "nanotrap/numerics.hpp"

namespace nanotrap {

using numerics::Vec3;

/// How a nominal power is assigned to a quasi-linear hybrid mode.
///  physical     - the field carries exactly the nominal power.
///  circular_sum - the field is the sum of the two circular components, each
///                 carrying the nominal power (twice the physical intensity).
enum class HybridConvention { physical, circular_sum };

/// Two co-propagating modes; `a` carries tau*P, `b` carries (1 - tau)*P.
struct ModePair {
  ModeSolution a;
  ModeSolution b;
  double tau = 0.5;
  double delta = 0.0;  // phase of mode a relative to mode b at z = 0
  double power = 0.0;  // W
  HybridConvention convention = HybridConvention::circular_sum;

  const FiberSpec& fiber() const { return a.fiber; }
  double wavelength() const { return a.wavelength; }
};

ModePair make_mode_pair(const FiberSpec& fiber, const LightSpec& light, const ModeId& mode_a,
                        const ModeId& mode_b, double tau, double delta = 0.0,
                        HybridConvention convention = HybridConvention::circular_sum);

/// Re-normalises an existing pair at a new power split (modes are not re-solved).
ModePair with_tau(const ModePair& pair, double tau);

/// Checks tau range, equal wavelength and fibre; throws ConfigError.
void validate(const ModePair& pair);

/// exp(i delta) E_a + E_b, each mode with its own exp(-i beta z).
CVec3 total_e_field(const ModePair& pair, const CylPoint& p);

/// Time-averaged intensity c eps0 |E|^2 / 2 (W/m^2). Uses only the relative
/// phase (beta_a - beta_b) z, so it is exactly periodic in the beat length.
double mean_intensity(const ModePair& pair, const CylPoint& p);
double mean_intensity(const ModePair& pair, const Vec3& xyz);

/// Cartesian gradient of mean_intensity (W/m^3) from the analytic field jets.
Vec3 intensity_gradient(const ModePair& pair, const Vec3& xyz);

/// 2 pi / |beta_a - beta_b|.
double beat_length(const ModePair& pair);

CylPoint to_cylindrical(const Vec3& xyz);
Vec3 to_cartesian(const CylPoint& p);

}  // namespace nanotrap
