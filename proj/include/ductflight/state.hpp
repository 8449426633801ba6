#pragma once

#include "ductflight/math.hpp"

namespace ductflight {

/// Rigid-body state in the duct frame (axis-centered, x along the axis,
/// z up). Attitude maps body to duct-frame vectors; body x is forward.
struct DroneState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Quat attitude = Quat::Identity();
  Vec3 angular_velocity = Vec3::Zero();  // body rates, rad/s
  double t = 0.0;
};

}  // namespace ductflight
