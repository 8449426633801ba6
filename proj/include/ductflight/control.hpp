#pragma once

#include "ductflight/dynamics.hpp"

namespace ductflight {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double out_limit = 1e9;  // symmetric clamp on the loop output
  double int_limit = 0.0;  // symmetric clamp on the integrator contribution
};

/// Gains of the position -> velocity -> attitude -> rate cascade. Outer
/// loops (position, velocity) run at outer_hz with sample-hold outputs;
/// attitude and rate loops run every step at inner_hz.
struct CascadeGains {
  PidGains pos{2.5, 0.0, 0.0, 0.4, 0.0};        // m -> m/s
  PidGains vel{3.5, 1.5, 0.0, 3.0, 1.0};        // m/s -> m/s^2, lateral
  PidGains vel_z{4.0, 2.0, 0.0, 4.0, 1.5};      // m/s -> m/s^2, vertical
  PidGains att{10.0, 0.0, 0.0, 6.0, 0.0};       // rad -> rad/s
  PidGains rate{40.0, 0.0, 0.0, 400.0, 0.0};    // rad/s -> rad/s^2
  double max_tilt = 0.35;                       // rad
  double outer_hz = 100.0;
  double inner_hz = 500.0;
};

/// What the controller believes about the vehicle; in the full stack the
/// cross-section states come from the estimator, the rest from onboard
/// attitude/odometry sources.
struct ControlState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Quat attitude = Quat::Identity();
  Vec3 body_rates = Vec3::Zero();
};

struct Setpoint {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
};

/// Map a desired collective thrust and body torques to rotor commands:
/// linear thrust allocation, clamp per rotor to its feasible range, then
/// invert the quadratic command-to-thrust curve.
RotorCommand mix(double collective, const Vec3& torque, const DroneParams& params);

/// Cascaded PID position controller. step() must be called at inner_hz; the
/// outer loops tick internally every inner_hz/outer_hz calls and hold their
/// outputs in between. All integrators clamp (anti-windup); at the setpoint
/// with empty integrators the output equals hover_trim exactly.
class CascadeController {
 public:
  CascadeController(const CascadeGains& gains, const DroneParams& params);

  RotorCommand step(const ControlState& est, const Setpoint& sp);
  void reset();

 private:
  CascadeGains gains_;
  DroneParams params_;
  int tick_ = 0;
  int outer_div_ = 5;
  Vec3 accel_sp_ = Vec3::Zero();   // held between outer ticks
  Vec3 vel_int_ = Vec3::Zero();
  Vec3 prev_rate_ = Vec3::Zero();
  bool have_prev_rate_ = false;
};

}  // namespace ductflight
