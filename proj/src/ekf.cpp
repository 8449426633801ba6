#include "ductflight/ekf.hpp"

namespace ductflight {

Ekf::Ekf(const EkfConfig& cfg) : cfg_(cfg) { reset(Vec2::Zero(), Vec2::Zero()); }

void Ekf::reset(const Vec2& position, const Vec2& velocity) {
  mean_ << position.x(), position.y(), velocity.x(), velocity.y();
  cov_ = Mat4::Zero();
  cov_(0, 0) = cov_(1, 1) = cfg_.init_pos_sigma * cfg_.init_pos_sigma;
  cov_(2, 2) = cov_(3, 3) = cfg_.init_vel_sigma * cfg_.init_vel_sigma;
}

void Ekf::predict(const ImuSample& imu, const Quat& attitude, double dt) {
  Vec3 accel_world = attitude * imu.specific_force + Vec3(0.0, 0.0, -kGravity);
  double ay = accel_world.y();
  double az = accel_world.z();

  mean_(0) += mean_(2) * dt + 0.5 * ay * dt * dt;
  mean_(1) += mean_(3) * dt + 0.5 * az * dt * dt;
  mean_(2) += ay * dt;
  mean_(3) += az * dt;

  Mat4 F = Mat4::Identity();
  F(0, 2) = dt;
  F(1, 3) = dt;

  // White accelerometer noise integrated over the step, per axis.
  double s2 = imu.accel_sigma * imu.accel_sigma;
  double q_pp = 0.25 * dt * dt * dt * dt * s2;
  double q_pv = 0.5 * dt * dt * dt * s2;
  double q_vv = dt * dt * s2;
  Mat4 Q = Mat4::Zero();
  Q(0, 0) = Q(1, 1) = q_pp;
  Q(2, 2) = Q(3, 3) = q_vv;
  Q(0, 2) = Q(2, 0) = q_pv;
  Q(1, 3) = Q(3, 1) = q_pv;

  cov_ = F * cov_ * F.transpose() + Q;
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

void Ekf::update(const Vec2& measured_yz) { update(measured_yz, cfg_.meas_noise); }

void Ekf::update(const Vec2& measured_yz, const Mat2& meas_noise) {
  // H selects the position block.
  Mat2 S = cov_.topLeftCorner<2, 2>() + meas_noise;
  Eigen::LLT<Mat2> llt(S);
  if (llt.info() != Eigen::Success || S.determinant() <= 0.0) {
    throw std::runtime_error("innovation covariance not positive definite");
  }
  Vec2 innovation = measured_yz - mean_.head<2>();
  last_nis_ = innovation.dot(llt.solve(innovation));

  Eigen::Matrix<double, 4, 2> PHt = cov_.leftCols<2>();
  Eigen::Matrix<double, 4, 2> K = llt.solve(PHt.transpose()).transpose();
  mean_ += K * innovation;

  Mat4 IKH = Mat4::Identity();
  IKH.leftCols<2>() -= K;
  cov_ = IKH * cov_;
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

}  // namespace ductflight
