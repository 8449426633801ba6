#include "ductflight/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ductflight {

TofArrayConfig TofArrayConfig::standard() {
  TofArrayConfig cfg;
  for (int i = 0; i < 8; ++i) {
    double a = deg2rad(45.0 * i);
    cfg.channels[i].direction_body = Vec3(std::cos(a), std::sin(a), 0.0);
  }
  cfg.channels[kTofUp].direction_body = Vec3::UnitZ();
  cfg.channels[kTofDown].direction_body = -Vec3::UnitZ();
  return cfg;
}

int mirror_channel(int i) {
  if (i >= 8) return i;
  return (8 - i) % 8;
}

namespace {

// Basis perpendicular to d, chosen so that mirroring d across y -> -y maps
// the ring sample set onto itself (up to azimuth reindexing). Rings use even
// ray counts for the same reason.
void cone_basis(const Vec3& d, Vec3* u, Vec3* v) {
  if (std::abs(d.z()) > 0.999999) {
    *u = Vec3::UnitX();
  } else {
    *u = Vec3::UnitZ().cross(d).normalized();
  }
  *v = d.cross(*u);
}

// Ray counts per ring for a total budget n: one center ray, the remainder
// split across three rings proportionally to ring index (outer rings hold
// more rays, keeping areal density roughly even).
std::array<int, 3> ring_counts(int n) {
  std::array<int, 3> c{0, 0, 0};
  int rest = n - 1;
  c[0] = (rest * 1) / 6;
  c[1] = (rest * 2) / 6;
  c[2] = rest - c[0] - c[1];
  return c;
}

}  // namespace

double cone_distance(const DuctShape& duct, const Vec3& position, const Quat& attitude,
                     const TofSensorConfig& sensor, Rng* rng) {
  if (sensor.rays < 1) throw std::invalid_argument("rays per cone must be >= 1");
  Vec3 center = attitude * sensor.direction_body;

  double sum = 0.0;
  double best = std::numeric_limits<double>::infinity();
  int hits = 0;
  auto accumulate = [&](const Vec3& dir) {
    auto t = ray_cast(duct, Ray{position, dir});
    if (!t) return;
    sum += *t;
    best = std::min(best, *t);
    ++hits;
  };

  accumulate(center);
  if (sensor.rays > 1) {
    Vec3 u, v;
    cone_basis(center, &u, &v);
    std::array<int, 3> counts = ring_counts(sensor.rays);
    for (int k = 0; k < 3; ++k) {
      if (counts[k] == 0) continue;
      double alpha = sensor.half_angle * (k + 1) / 3.0;
      double ca = std::cos(alpha), sa = std::sin(alpha);
      for (int j = 0; j < counts[k]; ++j) {
        double theta = 2.0 * kPi * j / counts[k];
        Vec3 dir = ca * center + sa * (std::cos(theta) * u + std::sin(theta) * v);
        accumulate(dir);
      }
    }
  }

  if (hits == 0) return 0.0;
  double reading = sensor.statistic == ConeStatistic::Mean ? sum / hits : best;

  if (rng != nullptr && sensor.noise_sigma > 0.0) {
    reading += sensor.noise_sigma * rng->gauss();
  }
  if (sensor.quantization > 0.0) {
    reading = std::round(reading / sensor.quantization) * sensor.quantization;
  }
  reading = std::max(reading, 0.0);
  if (reading > sensor.max_range) reading = 0.0;
  return reading;
}

TofFrame sense_array(const DuctShape& duct, const DroneState& state,
                     const TofArrayConfig& cfg, double clip, Rng* rng) {
  if (!duct.inside(state.position)) {
    throw std::runtime_error("out-of-duct");
  }
  TofFrame frame;
  frame.t = state.t;
  for (int i = 0; i < 10; ++i) {
    double d = cone_distance(duct, state.position, state.attitude, cfg.channels[i], rng);
    if (clip > 0.0 && d > clip) d = 0.0;
    frame.distances[i] = d;
  }
  frame.vy = state.velocity.y();
  frame.vz = state.velocity.z();
  Vec3 rpy = rpy_from_quat(state.attitude);
  frame.roll = rpy.x();
  frame.pitch = rpy.y();
  return frame;
}

ImuSample sense_imu(const DroneState& state, const Vec3& accel_world,
                    const ImuParams& params, Rng* rng) {
  ImuSample s;
  s.t = state.t;
  Vec3 g(0.0, 0.0, -kGravity);
  s.specific_force = state.attitude.conjugate() * (accel_world - g);
  s.angular_rate = state.angular_velocity;
  if (rng != nullptr) {
    for (int i = 0; i < 3; ++i) {
      s.specific_force[i] += params.accel_sigma * rng->gauss();
      s.angular_rate[i] += params.gyro_sigma * rng->gauss();
    }
  }
  s.accel_sigma = params.accel_sigma;
  s.gyro_sigma = params.gyro_sigma;
  return s;
}

}  // namespace ductflight
