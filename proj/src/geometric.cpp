#include "ductflight/geometric.hpp"

#include <cmath>

namespace ductflight {

GeometricEstimate solve_geometric(const std::vector<GeometricMeasurement>& measurements,
                                  double radius) {
  size_t n = measurements.size();
  if (n < 2) throw std::runtime_error("underdetermined");

  // Normal equations accumulated over all channel pairs: M^T M and M^T A
  // for the stacked system M * (y, z)^T = A.
  Mat2 mtm = Mat2::Zero();
  Vec2 mta = Vec2::Zero();
  for (size_t i = 0; i + 1 < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const GeometricMeasurement& mi = measurements[i];
      const GeometricMeasurement& mj = measurements[j];
      double siy = mi.direction_world.y(), siz = mi.direction_world.z();
      double sjy = mj.direction_world.y(), sjz = mj.direction_world.z();
      double a = mj.distance * mj.distance * (sjy * sjy + sjz * sjz) -
                 mi.distance * mi.distance * (siy * siy + siz * siz);
      double b = 2.0 * (mi.distance * siy - mj.distance * sjy);
      double c = 2.0 * (mi.distance * siz - mj.distance * sjz);
      mtm(0, 0) += b * b;
      mtm(0, 1) += b * c;
      mtm(1, 1) += c * c;
      mta.x() += b * a;
      mta.y() += c * a;
    }
  }
  mtm(1, 0) = mtm(0, 1);

  // Rank check on the 2x2 normal matrix: the smaller eigenvalue must carry
  // meaningful weight relative to the larger one.
  Eigen::SelfAdjointEigenSolver<Mat2> es(mtm);
  double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(1);
  if (!(lmax > 0.0) || lmin <= 1e-10 * lmax) {
    throw std::runtime_error("underdetermined");
  }

  GeometricEstimate est;
  est.position = mtm.ldlt().solve(mta);
  est.suspect = est.position.norm() > 2.0 * radius;
  return est;
}

GeometricEstimate geometric_from_frame(const TofFrame& frame, const TofArrayConfig& cfg,
                                       double radius, const Quat* attitude) {
  Quat q = attitude != nullptr ? *attitude : quat_from_rpy(frame.roll, frame.pitch, 0.0);
  std::vector<GeometricMeasurement> m;
  m.reserve(9);
  for (int i = 0; i < 10; ++i) {
    if (i == kTofUp) continue;                 // masked on the vehicle
    if (frame.distances[i] <= 0.0) continue;   // clipped or no return
    m.push_back({frame.distances[i], q * cfg.channels[i].direction_body});
  }
  return solve_geometric(m, radius);
}

}  // namespace ductflight
