#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace ductflight {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Quat = Eigen::Quaterniond;

inline constexpr double kGravity = 9.81;  // m/s^2, +z up, gravity acts along -z
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }

/// Deterministic random source. All randomness in the project flows through
/// explicitly seeded instances of this class; there is no wall-clock seeding.
///
/// gauss() uses a cache-free Box-Muller transform so every call consumes a
/// fixed number of engine draws. That keeps output streams bit-identical for
/// a given seed regardless of how uniform/gauss calls interleave.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), eng_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal deviate.
  double gauss() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  /// Uniform integer in [0, n).
  uint64_t integer(uint64_t n) {
    // Rejection-free modulo is fine here: n is always tiny vs 2^64 and any
    // bias is far below statistical relevance for simulation shuffles.
    return eng_() % n;
  }

  /// Independent child generator for parallel work. Children with distinct
  /// stream ids are decorrelated and reproducible from the parent seed.
  Rng fork(uint64_t stream) const {
    uint64_t x = seed_ + 0x9E3779B97F4A7C15ULL * (stream + 1);
    // splitmix64 finalizer
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return Rng(x);
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 eng_;
};

/// Body-to-world quaternion from roll/pitch/yaw, ZYX convention:
/// R = Rz(yaw) * Ry(pitch) * Rx(roll).
inline Quat quat_from_rpy(double roll, double pitch, double yaw) {
  return Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
              Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
              Eigen::AngleAxisd(roll, Vec3::UnitX()));
}

/// Inverse of quat_from_rpy. Returns (roll, pitch, yaw).
inline Vec3 rpy_from_quat(const Quat& q) {
  Mat3 R = q.toRotationMatrix();
  double pitch = std::asin(std::clamp(-R(2, 0), -1.0, 1.0));
  double roll = std::atan2(R(2, 1), R(2, 2));
  double yaw = std::atan2(R(1, 0), R(0, 0));
  return Vec3(roll, pitch, yaw);
}

}  // namespace ductflight
