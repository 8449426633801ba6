#include "ductflight/dynamics.hpp"

#include <cmath>

namespace ductflight {

namespace {

// Rotor geometry for the X layout: positions (x, y) in body frame and spin
// sign (+1 = counter-clockwise seen from above).
struct RotorLayout {
  std::array<double, 4> x, y, spin;
};

RotorLayout layout(const DroneParams& p) {
  double d = p.arm / std::sqrt(2.0);
  return RotorLayout{{d, d, -d, -d}, {-d, d, d, -d}, {1.0, -1.0, 1.0, -1.0}};
}

}  // namespace

bool envelope_collides(const DuctShape& duct, const DroneParams& params, const Vec3& pos,
                       double margin) {
  if (pos.x() < 0.0 || pos.x() > duct.length) return true;
  double hx = params.half_span();
  double hz = 0.5 * params.height;
  constexpr int kSamples = 64;
  for (int i = 0; i < kSamples; ++i) {
    double a = 2.0 * kPi * i / kSamples;
    double y = pos.y() + hx * std::cos(a);
    double z = pos.z() + hz * std::sin(a);
    if (!duct.inside_cross_section(y, z, margin)) return true;
  }
  return false;
}

RotorCommand hover_trim(const DroneParams& params) {
  double need = params.mass * kGravity;
  if (need > params.max_total_thrust) {
    throw std::runtime_error("hover thrust exceeds available thrust");
  }
  double c = std::sqrt(need / params.max_total_thrust);
  return RotorCommand{{c, c, c, c}};
}

std::array<double, 4> allocate_thrust(double collective, const Vec3& torque,
                                      const DroneParams& params) {
  RotorLayout rl = layout(params);
  double d = rl.x[0];  // |x| = |y| for every rotor in the X layout
  double tq = collective / 4.0;
  double rx = torque.x() / (4.0 * d);
  double ry = torque.y() / (4.0 * d);
  double rz = torque.z() / (4.0 * params.yaw_torque_coeff);
  std::array<double, 4> f{};
  for (int i = 0; i < 4; ++i) {
    f[i] = tq + rx * (rl.y[i] / d) - ry * (rl.x[i] / d) + rz * rl.spin[i];
  }
  return f;
}

void thrust_wrench(const std::array<double, 4>& thrusts, const DroneParams& params,
                   double* collective, Vec3* torque) {
  RotorLayout rl = layout(params);
  double total = 0.0;
  Vec3 tau = Vec3::Zero();
  for (int i = 0; i < 4; ++i) {
    total += thrusts[i];
    tau.x() += rl.y[i] * thrusts[i];
    tau.y() -= rl.x[i] * thrusts[i];
    tau.z() += rl.spin[i] * params.yaw_torque_coeff * thrusts[i];
  }
  *collective = total;
  *torque = tau;
}

StepResult step(DroneState* state, OuState* ou, const RotorCommand& cmd,
                const DroneParams& params, const DuctShape& duct,
                const ForceField* field, double ou_tau, double dt, Rng* rng) {
  StepResult result;

  double fmax = params.rotor_max_thrust();
  std::array<double, 4> thrusts{};
  for (int i = 0; i < 4; ++i) {
    double c = std::clamp(cmd.c[i], 0.0, 1.0);
    thrusts[i] = fmax * c * c;
  }
  double thrust_total = 0.0;
  Vec3 torque = Vec3::Zero();
  thrust_wrench(thrusts, params, &thrust_total, &torque);

  // External disturbance: map mean at the current position plus the OU
  // fluctuation, advanced with the exact discrete transition so that its
  // stationary covariance equals the local map covariance.
  Vec2 dist = Vec2::Zero();
  if (field != nullptr) {
    Vec2 mean;
    Mat2 cov;
    field->lookup(state->position.y(), state->position.z(), &mean, &cov);
    double phi = std::exp(-dt / ou_tau);
    if (rng != nullptr) {
      Mat2 inj = (1.0 - phi * phi) * cov;
      Eigen::SelfAdjointEigenSolver<Mat2> es(inj);
      Vec2 ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      Vec2 noise(rng->gauss(), rng->gauss());
      ou->force = phi * ou->force + es.eigenvectors() * ev.asDiagonal() * noise;
    } else {
      ou->force = phi * ou->force;
    }
    dist = mean + ou->force;
  }
  result.disturbance = dist;

  Vec3 force_world = state->attitude * Vec3(0.0, 0.0, thrust_total);
  force_world += Vec3(0.0, 0.0, -kGravity * params.mass);
  force_world += Vec3(0.0, dist.x(), dist.y());
  force_world -= params.linear_drag * state->velocity;

  Vec3 accel = force_world / params.mass;
  result.accel_world = accel;

  Vec3 v_new = state->velocity + dt * accel;
  state->position += 0.5 * dt * (state->velocity + v_new);
  state->velocity = v_new;

  // Euler rigid-body equation with diagonal inertia, then attitude update
  // using the new rates.
  Vec3 I = params.inertia;
  Vec3 w = state->angular_velocity;
  Vec3 gyro(torque.x() - (I.z() - I.y()) * w.y() * w.z(),
            torque.y() - (I.x() - I.z()) * w.z() * w.x(),
            torque.z() - (I.y() - I.x()) * w.x() * w.y());
  state->angular_velocity += dt * Vec3(gyro.x() / I.x(), gyro.y() / I.y(), gyro.z() / I.z());

  Vec3 dtheta = state->angular_velocity * dt;
  double angle = dtheta.norm();
  if (angle > 1e-12) {
    state->attitude = state->attitude * Quat(Eigen::AngleAxisd(angle, dtheta / angle));
  }
  state->attitude.normalize();

  state->t += dt;

  if (envelope_collides(duct, params, state->position)) {
    result.status = StepStatus::Collision;
  }
  return result;
}

}  // namespace ductflight
