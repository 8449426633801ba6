#include "ductflight/sim.hpp"

#include <cmath>

#include "ductflight/geometric.hpp"

namespace ductflight {

WaypointSchedule::WaypointSchedule(std::vector<std::pair<double, Vec3>> waypoints, Vec3 start,
                                   double slew)
    : waypoints_(std::move(waypoints)), current_(start), slew_(slew) {}

Vec3 WaypointSchedule::at(double t) const {
  Vec3 target = current_;
  for (const auto& [wt, wp] : waypoints_) {
    if (t >= wt) target = wp;
  }
  double dt = t - last_t_;
  last_t_ = t;
  Vec3 delta = target - current_;
  double dist = delta.norm();
  double max_step = slew_ * dt;
  if (dist <= max_step || dist == 0.0) {
    current_ = target;
  } else {
    current_ += delta * (max_step / dist);
  }
  return current_;
}

std::vector<std::pair<double, Vec3>> excitation_waypoints(const DuctShape& duct, double x,
                                                          double duration, Rng* rng) {
  double hw = duct.half_width();
  double hh = duct.half_height();
  std::vector<std::pair<double, Vec3>> out;
  double t = 0.0;
  while (t < duration) {
    double y = rng->uniform(-0.30 * hw, 0.30 * hw);
    double z = rng->uniform(-0.49 * hh, 0.26 * hh);
    out.emplace_back(t, Vec3(x, y, z));
    t += rng->uniform(2.0, 4.0);
  }
  return out;
}

FlightResult run_flight(const DuctShape& duct, const ForceField* field,
                        const DroneParams& drone, const FlightParams& params,
                        const SetpointFn& setpoint, const MlpModel* model, Rng* rng) {
  const FlightTiming& tm = params.timing;
  if (params.mode == EstimatorMode::FullStack && model == nullptr) {
    throw std::invalid_argument("full-stack flight requires a localizer model");
  }

  DroneState state;
  state.position = params.start_position;
  state.attitude = Quat::Identity();
  OuState ou;
  CascadeController controller(params.gains, drone);
  Ekf ekf(params.ekf);
  bool ekf_ready = false;

  RotorCommand cmd = hover_trim(drone);
  Setpoint sp;
  sp.position = params.start_position;

  // Latest values for logging and for the controller's estimate.
  Vec2 nn_pos = Vec2::Zero();
  Vec2 geo_pos = Vec2::Zero();
  double geo_valid = 0.0;
  TofFrame frame{};
  Mat2 nn_noise = params.nn_meas_sigma * params.nn_meas_sigma * Mat2::Identity();

  FlightResult result;
  long total_ticks = std::lround(params.duration / tm.dt);
  for (long tick = 0; tick < total_ticks; ++tick) {
    double t = tick * tm.dt;

    if (tick % tm.control_every == 0) {
      ControlState est;
      est.attitude = state.attitude;
      est.body_rates = state.angular_velocity;
      est.position = state.position;
      est.velocity = state.velocity;
      if (params.mode == EstimatorMode::FullStack && ekf_ready) {
        est.position.y() = ekf.position().x();
        est.position.z() = ekf.position().y();
        est.velocity.y() = ekf.velocity().x();
        est.velocity.z() = ekf.velocity().y();
      }
      sp.position = setpoint(t);
      cmd = controller.step(est, sp);
    }

    StepResult sr = step(&state, &ou, cmd, drone, duct, field, params.ou_tau, tm.dt, rng);

    if (tick % tm.sense_every == 0) {
      frame = sense_array(duct, state, params.tof, params.tof_clip, rng);
      ImuSample imu = sense_imu(state, sr.accel_world, params.imu, rng);
      if (ekf_ready) {
        ekf.predict(imu, state.attitude, tm.sense_every * tm.dt);
      }

      if (tick % tm.update_every == 0) {
        if (model != nullptr) {
          // In the full stack the network's velocity inputs come from the
          // previous filter estimate, closing the loop the same way the
          // onboard pipeline does.
          TofFrame nn_frame = frame;
          if (params.mode == EstimatorMode::FullStack && ekf_ready) {
            nn_frame.vy = ekf.velocity().x();
            nn_frame.vz = ekf.velocity().y();
          }
          nn_pos = model->forward(nn_input(nn_frame));
        }
        try {
          GeometricEstimate ge = geometric_from_frame(frame, params.tof, duct.half_height());
          geo_pos = ge.position;
          geo_valid = ge.suspect ? 0.0 : 1.0;
        } catch (const std::runtime_error&) {
          geo_valid = 0.0;
        }
        if (params.mode == EstimatorMode::FullStack) {
          if (!ekf_ready) {
            ekf.reset(nn_pos, Vec2::Zero());
            ekf_ready = true;
          } else {
            ekf.update(nn_pos, nn_noise);
          }
        }
      }

      FlightLogRow row;
      row.t = t;
      row.position = state.position;
      row.rpy = rpy_from_quat(state.attitude);
      if (ekf_ready) {
        row.ekf_pos = ekf.position();
        row.ekf_vel = ekf.velocity();
      } else {
        row.ekf_pos = Vec2(state.position.y(), state.position.z());
        row.ekf_vel = Vec2(state.velocity.y(), state.velocity.z());
      }
      row.nn_pos = nn_pos;
      row.geo_pos = geo_pos;
      row.geo_valid = geo_valid;
      row.tof = frame.distances;
      row.cmd = cmd.c;
      row.disturbance = sr.disturbance;
      result.log.push_back(row);
    }

    if (sr.status == StepStatus::Collision) {
      result.collided = true;
      result.end_time = t + tm.dt;
      return result;
    }
  }
  result.end_time = params.duration;
  return result;
}

}  // namespace ductflight
