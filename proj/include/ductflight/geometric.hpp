#pragma once

#include "ductflight/sensors.hpp"

#include <vector>

namespace ductflight {

/// One usable ranger return for the closed-form localizer: measured distance
/// along a known duct-frame direction.
struct GeometricMeasurement {
  double distance = 0.0;
  Vec3 direction_world = Vec3::UnitX();
};

struct GeometricEstimate {
  Vec2 position = Vec2::Zero();  // (y, z), axis-centered
  bool suspect = false;          // solution implausibly far outside the duct
};

/// Closed-form cross-section localizer for circular ducts.
///
/// Every measurement pins its hit point to the wall circle; differencing the
/// squared-radius equations of a channel pair (i, j) cancels the quadratic
/// position terms and leaves one linear equation in (y, z):
///
///   b_k*y + c_k*z = a_k,
///   a_k = d_j^2*(s_jy^2 + s_jz^2) - d_i^2*(s_iy^2 + s_iz^2)
///   b_k = 2*(d_i*s_iy - d_j*s_jy)
///   c_k = 2*(d_i*s_iz - d_j*s_jz)
///
/// All pairs are stacked and solved by least squares through the normal
/// equations. Throws "underdetermined" with fewer than two usable channels
/// or a rank-deficient system.
GeometricEstimate solve_geometric(const std::vector<GeometricMeasurement>& measurements,
                                  double radius);

/// Assemble measurements from an array frame and solve. Channels reading
/// exactly 0 are excluded, as is the up-facing channel (blocked on the real
/// vehicle). Directions rotate by roll/pitch only; yaw is assumed aligned
/// with the duct axis. Pass `attitude` to override with a full rotation.
GeometricEstimate geometric_from_frame(const TofFrame& frame, const TofArrayConfig& cfg,
                                       double radius, const Quat* attitude = nullptr);

}  // namespace ductflight
