#pragma once

#include "ductflight/sensors.hpp"

namespace ductflight {

struct EkfConfig {
  Mat2 meas_noise = (0.005 * 0.005) * Mat2::Identity();  // position update R
  double init_pos_sigma = 0.02;
  double init_vel_sigma = 0.05;
};

/// Cross-section Kalman filter, state [y, z, vy, vz].
///
/// Prediction integrates the IMU specific force rotated to the duct frame
/// (plus gravity) under a constant-acceleration model; process noise comes
/// from the sample's accelerometer sigma. Position updates measure (y, z)
/// directly. The covariance is symmetrized after every update.
class Ekf {
 public:
  explicit Ekf(const EkfConfig& cfg = EkfConfig());

  void reset(const Vec2& position, const Vec2& velocity);

  /// IMU-driven prediction over dt seconds. `attitude` maps body to duct.
  void predict(const ImuSample& imu, const Quat& attitude, double dt);

  /// Position measurement update. Throws when the innovation covariance is
  /// not positive definite. R defaults to the configured measurement noise.
  void update(const Vec2& measured_yz);
  void update(const Vec2& measured_yz, const Mat2& meas_noise);

  const Vec4& mean() const { return mean_; }
  const Mat4& covariance() const { return cov_; }
  Vec2 position() const { return mean_.head<2>(); }
  Vec2 velocity() const { return mean_.tail<2>(); }

  /// Normalized innovation squared of the latest update (chi-square with
  /// 2 degrees of freedom for a consistent filter).
  double last_nis() const { return last_nis_; }

 private:
  EkfConfig cfg_;
  Vec4 mean_ = Vec4::Zero();
  Mat4 cov_ = Mat4::Identity();
  double last_nis_ = 0.0;
};

}  // namespace ductflight
