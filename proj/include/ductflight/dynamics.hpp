#pragma once

#include "ductflight/forcemap.hpp"
#include "ductflight/state.hpp"

#include <array>

namespace ductflight {

/// Airframe constants. The default set models a 180 mm, 130 g quadrotor
/// whose rotors hover at 50% command.
struct DroneParams {
  double mass = 0.130;           // kg
  double span = 0.180;           // m, rotor-tip to rotor-tip
  double height = 0.075;         // m, full airframe height
  double arm = 0.052;            // m, center to rotor axis
  double max_total_thrust = 4.0 * 0.130 * kGravity;  // N, all rotors at command 1
  double yaw_torque_coeff = 0.006;  // N*m of rotor drag torque per N of thrust
  double linear_drag = 0.05;        // N per m/s of body speed
  Vec3 inertia = Vec3(2.63e-4, 2.63e-4, 5.27e-4);  // kg*m^2, flat-disc approx

  double half_span() const { return 0.5 * span; }
  double rotor_max_thrust() const { return 0.25 * max_total_thrust; }
};

/// Normalized rotor commands in [0, 1]. Rotor i produces thrust
/// rotor_max_thrust * c_i^2. X layout viewed from above, body x forward:
///   0 front-right, 1 front-left, 2 back-left, 3 back-right,
/// spin directions alternating (0 and 2 counter-clockwise).
struct RotorCommand {
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
};

/// Ornstein-Uhlenbeck fluctuation state riding on top of the mean force map.
struct OuState {
  Vec2 force = Vec2::Zero();
};

enum class StepStatus { Ok, Collision };

struct StepResult {
  StepStatus status = StepStatus::Ok;
  Vec3 accel_world = Vec3::Zero();  // total acceleration incl. gravity
  Vec2 disturbance = Vec2::Zero();  // applied field force (mean + fluctuation)
};

/// Advance one fixed step of the rigid-body model.
///
/// Velocity updates on the current-state forces; position advances on the
/// average of old and new velocity, which integrates constant-force segments
/// exactly (no spurious energy drift). The attitude quaternion integrates
/// the freshly updated body rates and is renormalized every step.
///
/// When `field` is non-null its interpolated mean plus the OU fluctuation is
/// applied as an external force at the center of mass (no torque); `ou` is
/// advanced by dt with stationary covariance equal to the local map
/// covariance. A step ending with the airframe envelope (ellipse of
/// half-width span/2, half-height height/2) touching the wall, or leaving
/// through an open end, is terminal and reports Collision status.
StepResult step(DroneState* state, OuState* ou, const RotorCommand& cmd,
                const DroneParams& params, const DuctShape& duct,
                const ForceField* field, double ou_tau, double dt, Rng* rng);

/// True when the airframe envelope at (y, z) is not fully inside the
/// cross-section shrunk by `margin`.
bool envelope_collides(const DuctShape& duct, const DroneParams& params, const Vec3& pos,
                       double margin = 0.0);

/// Equal rotor command that exactly cancels gravity: sqrt(m*g / max thrust).
/// Throws when hover demands more than the available thrust.
RotorCommand hover_trim(const DroneParams& params);

/// Linear thrust allocation for the X layout: per-rotor thrusts realizing a
/// desired collective force and body torques, before any clamping.
std::array<double, 4> allocate_thrust(double collective, const Vec3& torque,
                                      const DroneParams& params);

/// Wrench produced by per-rotor thrusts; exact inverse of allocate_thrust.
void thrust_wrench(const std::array<double, 4>& thrusts, const DroneParams& params,
                   double* collective, Vec3* torque);

}  // namespace ductflight
