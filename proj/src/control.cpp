#include "ductflight/control.hpp"

#include <algorithm>
#include <cmath>

namespace ductflight {

namespace {

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

RotorCommand mix(double collective, const Vec3& torque, const DroneParams& params) {
  std::array<double, 4> f = allocate_thrust(collective, torque, params);
  double fmax = params.rotor_max_thrust();
  RotorCommand cmd;
  for (int i = 0; i < 4; ++i) {
    double fi = std::clamp(f[i], 0.0, fmax);
    cmd.c[i] = std::sqrt(fi / fmax);
  }
  return cmd;
}

CascadeController::CascadeController(const CascadeGains& gains, const DroneParams& params)
    : gains_(gains), params_(params) {
  outer_div_ = std::max(1, static_cast<int>(std::lround(gains.inner_hz / gains.outer_hz)));
}

void CascadeController::reset() {
  tick_ = 0;
  accel_sp_ = Vec3::Zero();
  vel_int_ = Vec3::Zero();
  prev_rate_ = Vec3::Zero();
  have_prev_rate_ = false;
}

RotorCommand CascadeController::step(const ControlState& est, const Setpoint& sp) {
  double dt_inner = 1.0 / gains_.inner_hz;
  Vec3 rpy = rpy_from_quat(est.attitude);
  double roll = rpy.x(), pitch = rpy.y(), yaw = rpy.z();

  if (tick_ % outer_div_ == 0) {
    double dt_outer = outer_div_ * dt_inner;

    // Position loop: proportional velocity demand, clamped per axis.
    Vec3 vel_sp;
    for (int i = 0; i < 3; ++i) {
      double e = sp.position[i] - est.position[i];
      vel_sp[i] = std::clamp(gains_.pos.kp * e, -gains_.pos.out_limit, gains_.pos.out_limit);
    }

    // Velocity loop: PI acceleration demand; the integrator absorbs steady
    // disturbance forces.
    for (int i = 0; i < 3; ++i) {
      const PidGains& g = i == 2 ? gains_.vel_z : gains_.vel;
      double e = vel_sp[i] - est.velocity[i];
      vel_int_[i] = std::clamp(vel_int_[i] + g.ki * e * dt_outer, -g.int_limit, g.int_limit);
      accel_sp_[i] = std::clamp(g.kp * e + vel_int_[i], -g.out_limit, g.out_limit);
    }
  }
  ++tick_;

  // Acceleration demand to tilt targets, in the vehicle's yaw frame. For
  // small angles the thrust direction is (pitch, -roll, 1).
  double cy = std::cos(yaw), sy = std::sin(yaw);
  double ax = cy * accel_sp_.x() + sy * accel_sp_.y();
  double ay = -sy * accel_sp_.x() + cy * accel_sp_.y();
  double pitch_sp = std::clamp(ax / kGravity, -gains_.max_tilt, gains_.max_tilt);
  double roll_sp = std::clamp(-ay / kGravity, -gains_.max_tilt, gains_.max_tilt);

  double tilt = std::cos(roll) * std::cos(pitch);
  tilt = std::max(tilt, 0.5);  // never divide by a pathological tilt
  double collective = params_.mass * (kGravity + accel_sp_.z()) / tilt;
  collective = std::clamp(collective, 0.0, params_.max_total_thrust);

  // Attitude loop: proportional rate demand.
  Vec3 rate_sp;
  rate_sp.x() = gains_.att.kp * (roll_sp - roll);
  rate_sp.y() = gains_.att.kp * (pitch_sp - pitch);
  rate_sp.z() = gains_.att.kp * wrap_angle(sp.yaw - yaw);
  for (int i = 0; i < 3; ++i) {
    rate_sp[i] = std::clamp(rate_sp[i], -gains_.att.out_limit, gains_.att.out_limit);
  }

  // Rate loop: angular acceleration demand, derivative on the measurement.
  Vec3 rate_deriv = Vec3::Zero();
  if (have_prev_rate_) rate_deriv = (est.body_rates - prev_rate_) / dt_inner;
  prev_rate_ = est.body_rates;
  have_prev_rate_ = true;

  Vec3 ang_acc;
  for (int i = 0; i < 3; ++i) {
    double e = rate_sp[i] - est.body_rates[i];
    ang_acc[i] = std::clamp(gains_.rate.kp * e - gains_.rate.kd * rate_deriv[i],
                            -gains_.rate.out_limit, gains_.rate.out_limit);
  }
  Vec3 torque = params_.inertia.cwiseProduct(ang_acc);

  return mix(collective, torque, params_);
}

}  // namespace ductflight
