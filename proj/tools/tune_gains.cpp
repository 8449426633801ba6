// Gain tuning harness for the cascade controller. Runs truth-feedback step
// responses over a grid of candidate gains and prints settle time, overshoot
// and steady-state error so the shipped defaults can be reproduced. Not part
// of the test suite; run by hand when the airframe constants change.

#include <iostream>

#include "ductflight/sim.hpp"

namespace df = ductflight;

namespace {

struct StepMetrics {
  double settle_s = 1e9;   // last time |err| exceeded the settle band
  double overshoot = 0.0;  // fraction of the step size
  double steady_err = 1e9;
  bool collided = false;
};

StepMetrics lateral_step(const df::CascadeGains& gains, double step_m, double duration) {
  df::DuctShape duct = df::DuctShape::circular(0.175, 1.0);
  df::DroneParams drone;
  df::FlightParams fp;
  fp.gains = gains;
  fp.mode = df::EstimatorMode::Truth;
  fp.duration = duration;
  fp.start_position = df::Vec3(0.5, 0.0, -0.06);
  // Noise-free run isolates the deterministic response.
  for (auto& ch : fp.tof.channels) {
    ch.noise_sigma = 0.0;
    ch.quantization = 0.0;
  }
  fp.imu.accel_sigma = 0.0;
  fp.imu.gyro_sigma = 0.0;

  df::Vec3 before = fp.start_position;
  df::Vec3 after = before + df::Vec3(0.0, step_m, 0.0);
  df::Rng rng(7);
  df::FlightResult res = df::run_flight(
      duct, nullptr, drone, fp, [&](double t) { return t < 1.0 ? before : after; }, nullptr,
      &rng);

  StepMetrics m;
  m.collided = res.collided;
  double band = 0.005;
  double peak = -1e9;
  for (const auto& row : res.log) {
    if (row.t < 1.0) continue;
    double err = after.y() - row.position.y();
    peak = std::max(peak, row.position.y() - before.y());
    if (std::abs(err) > band) m.settle_s = row.t - 1.0;
    if (row.t > duration - 1.0) m.steady_err = std::min(m.steady_err, std::abs(err));
  }
  m.overshoot = (peak - step_m) / step_m;
  return m;
}

}  // namespace

int main() {
  std::cout << "pos_kp vel_kp vel_ki  settle[s] overshoot steady[mm]\n";
  for (double pos_kp : {1.5, 2.0, 2.5, 3.0}) {
    for (double vel_kp : {2.5, 3.5, 4.5}) {
      for (double vel_ki : {0.5, 1.5, 2.5}) {
        df::CascadeGains g;
        g.pos.kp = pos_kp;
        g.vel.kp = vel_kp;
        g.vel.ki = vel_ki;
        StepMetrics m = lateral_step(g, 0.05, 8.0);
        std::cout << pos_kp << "    " << vel_kp << "    " << vel_ki << "    " << m.settle_s
                  << "  " << m.overshoot << "  " << m.steady_err * 1000.0
                  << (m.collided ? "  COLLIDED" : "") << "\n";
      }
    }
  }
  return 0;
}
