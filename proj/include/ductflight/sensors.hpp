#pragma once

#include "ductflight/duct.hpp"
#include "ductflight/state.hpp"

#include <array>

namespace ductflight {

enum class ConeStatistic { Mean, Min };

/// One time-of-flight ranger. The physical sensor illuminates a cone, not a
/// line; the model casts `rays` rays distributed over the cone (a center ray
/// plus three concentric rings) and aggregates the wall hits.
struct TofSensorConfig {
  Vec3 direction_body = Vec3::UnitX();
  double half_angle = deg2rad(13.5);  // full opening 27 degrees
  double max_range = 4.0;             // readings beyond this report 0
  int rays = 37;                      // 1 + 6 + 12 + 18 pattern
  ConeStatistic statistic = ConeStatistic::Mean;
  double noise_sigma = 0.005;    // additive Gaussian, meters
  double quantization = 0.001;   // reading granularity, meters
};

/// The 10-channel ranger array. Channels 0..7 are horizontal, 45 degrees
/// apart, channel 0 along body +x and increasing index toward +y. Channel 8
/// looks up, channel 9 down. All sensors are modeled at the body origin.
struct TofArrayConfig {
  std::array<TofSensorConfig, 10> channels;
  static TofArrayConfig standard();
};

inline constexpr int kTofUp = 8;
inline constexpr int kTofDown = 9;

/// Horizontal channel index after mirroring the world across y -> -y:
/// m(i) = (8 - i) mod 8. Vertical channels map to themselves.
int mirror_channel(int i);

/// One synchronized array reading plus the state tags the estimators train
/// on. Distances are post-clip: anything the sensor could not resolve (cone
/// miss, beyond max range, beyond the clip distance) is exactly 0.
struct TofFrame {
  double t = 0.0;
  std::array<double, 10> distances{};
  double vy = 0.0, vz = 0.0;   // duct-frame lateral/vertical velocity
  double roll = 0.0, pitch = 0.0;
};

struct ImuParams {
  double accel_sigma = 0.05;   // m/s^2 per axis
  double gyro_sigma = 0.002;   // rad/s per axis
};

/// Accelerometer + gyro sample. specific_force is what an ideal IMU reads:
/// body-frame (a_world - g), so a level hovering vehicle reads +9.81 on z.
struct ImuSample {
  double t = 0.0;
  Vec3 specific_force = Vec3::Zero();
  Vec3 angular_rate = Vec3::Zero();
  double accel_sigma = 0.0;
  double gyro_sigma = 0.0;
};

/// Aggregate cone reading for one sensor at the given pose. Pipeline:
/// cast rays -> drop open-end misses -> statistic over hits (no hits -> 0)
/// -> additive noise -> quantize -> clamp below at 0, above max_range -> 0.
double cone_distance(const DuctShape& duct, const Vec3& position, const Quat& attitude,
                     const TofSensorConfig& sensor, Rng* rng);

/// Read all 10 channels at the drone state and stamp the frame with the
/// state's velocities and attitude. Readings above `clip` are replaced by 0
/// (the firmware treats long ranges as unusable). Throws "out-of-duct" when
/// the drone position is not inside the duct.
TofFrame sense_array(const DuctShape& duct, const DroneState& state,
                     const TofArrayConfig& cfg, double clip, Rng* rng);

/// IMU model: rotates the world-frame acceleration into the body and removes
/// gravity, then adds per-axis Gaussian noise. accel_world is the total
/// acceleration of the vehicle (including the gravity term).
ImuSample sense_imu(const DroneState& state, const Vec3& accel_world,
                    const ImuParams& params, Rng* rng);

}  // namespace ductflight
