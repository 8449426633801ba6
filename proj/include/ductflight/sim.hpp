#pragma once

#include "ductflight/control.hpp"
#include "ductflight/ekf.hpp"
#include "ductflight/mlp.hpp"

#include <functional>
#include <vector>

namespace ductflight {

/// Where the controller's lateral/vertical state comes from.
///   Truth:     ground-truth position and velocity (tuning, data collection).
///   FullStack: neural localizer measurements fused by the Kalman filter.
/// x, forward velocity, attitude and body rates always come from the
/// vehicle's own attitude/odometry pipeline, modeled here as truth.
enum class EstimatorMode { Truth, FullStack };

/// Per-flight timing. The dynamics run at 1 kHz; the controller, ranger
/// array and filter tick at divisors of that clock.
struct FlightTiming {
  double dt = 1e-3;        // dynamics step
  int control_every = 2;   // 500 Hz inner control loop
  int sense_every = 4;     // 250 Hz ranger array + filter prediction + log
  int update_every = 100;  // 10 Hz localizer + filter correction
};

struct FlightParams {
  FlightTiming timing;
  double duration = 60.0;
  EstimatorMode mode = EstimatorMode::Truth;
  Vec3 start_position = Vec3::Zero();  // axis-centered frame
  double tof_clip = 0.5;               // readings beyond this become 0
  double nn_meas_sigma = 0.012;        // filter R for localizer updates
  double ou_tau = 0.5;                 // disturbance fluctuation time constant
  CascadeGains gains;
  TofArrayConfig tof = TofArrayConfig::standard();
  ImuParams imu;
  EkfConfig ekf;
};

/// One log record, written at the sense rate. Estimator columns hold the
/// latest value as of that instant; geo_valid is 0 when the closed-form
/// localizer threw or flagged its solution.
struct FlightLogRow {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 rpy = Vec3::Zero();
  Vec2 ekf_pos = Vec2::Zero();
  Vec2 ekf_vel = Vec2::Zero();
  Vec2 nn_pos = Vec2::Zero();
  Vec2 geo_pos = Vec2::Zero();
  double geo_valid = 0.0;
  std::array<double, 10> tof{};
  std::array<double, 4> cmd{};
  Vec2 disturbance = Vec2::Zero();
};

struct FlightResult {
  bool collided = false;
  double end_time = 0.0;
  std::vector<FlightLogRow> log;
};

/// Position setpoint as a function of time, in the axis-centered frame.
using SetpointFn = std::function<Vec3(double t)>;

/// Fly one closed-loop flight and return the log.
///
/// Loop structure per 1 ms dynamics tick: control at 500 Hz from the active
/// estimate, ranger array + IMU + filter prediction at 250 Hz, localizer +
/// filter correction at 10 Hz. In FullStack mode the filter is seeded from
/// the first localizer fix. A collision ends the flight early.
FlightResult run_flight(const DuctShape& duct, const ForceField* field,
                        const DroneParams& drone, const FlightParams& params,
                        const SetpointFn& setpoint, const MlpModel* model, Rng* rng);

/// Piecewise-constant waypoint sequence with rate-limited transitions: the
/// commanded point moves toward the active waypoint at `slew` m/s, which
/// keeps the velocity loop inside its linear range.
class WaypointSchedule {
 public:
  WaypointSchedule(std::vector<std::pair<double, Vec3>> waypoints, Vec3 start, double slew);

  Vec3 at(double t) const;  // t must not decrease between calls

 private:
  std::vector<std::pair<double, Vec3>> waypoints_;
  mutable Vec3 current_;
  mutable double last_t_ = 0.0;
  double slew_;
};

/// Random waypoint tour inside the safe core of the cross-section, used to
/// excite the training data flights: dwell 2 to 4 s per point, lateral range
/// +-0.30 of the half-width, vertical range [-0.49, +0.26] of the
/// half-height (axis-centered).
std::vector<std::pair<double, Vec3>> excitation_waypoints(const DuctShape& duct, double x,
                                                          double duration, Rng* rng);

}  // namespace ductflight
