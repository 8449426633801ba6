#pragma once

#include "ductflight/dataset.hpp"
#include "ductflight/stats.hpp"

namespace ductflight {

/// Run fn(i) for i in [0, n) on a small worker pool. Each item must own its
/// randomness (forked streams), so the schedule cannot affect results.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

struct HoverConfig {
  double altitude = 0.115;  // above the duct floor
  double y = 0.0;
  double duration = 120.0;
  double stats_head = 10.0;  // settle time excluded from statistics
  double stats_tail = 5.0;
};

/// One hover flight plus position statistics over the steady-state window.
/// Quantiles are of the truth position; *dev* columns are deviations from
/// the setpoint.
struct HoverOutcome {
  bool collided = false;
  size_t samples = 0;
  double y_med = 0.0, y_iqr = 0.0, y_p05 = 0.0, y_p95 = 0.0;
  double z_med = 0.0, z_iqr = 0.0, z_p05 = 0.0, z_p95 = 0.0;
  double y_dev_p95 = 0.0, z_dev_p95 = 0.0;
  std::vector<FlightLogRow> log;
};

HoverOutcome run_hover(const DuctShape& duct, const ForceField* field,
                       const DroneParams& drone, const FlightParams& flight,
                       const HoverConfig& hover, const MlpModel* model, Rng* rng);

/// Pooled statistics of several hovers at one commanded altitude.
struct AltitudeSweepRow {
  double altitude = 0.0;
  int runs = 0;
  int collisions = 0;
  double y_med = 0.0, y_q25 = 0.0, y_q75 = 0.0, y_iqr = 0.0, y_p05 = 0.0, y_p95 = 0.0;
  double z_med = 0.0, z_q25 = 0.0, z_q75 = 0.0, z_iqr = 0.0, z_p05 = 0.0, z_p95 = 0.0;
};

/// Repeated hovers per altitude (parallel across runs); window samples of
/// all non-collided runs at one altitude are pooled before the quantiles.
std::vector<AltitudeSweepRow> sweep_altitudes(const DuctShape& duct, const ForceField* field,
                                              const DroneParams& drone,
                                              const FlightParams& flight,
                                              const HoverConfig& hover,
                                              const std::vector<double>& altitudes, int runs,
                                              const MlpModel* model, const Rng& base_rng);

/// Per-frame outputs of both localizers against the labels. All vectors are
/// aligned with the evaluated row set; geometric failures leave geo_ok = 0
/// with zeroed estimates and are excluded from the error vectors.
struct EstimatorEval {
  std::vector<double> t, truth_y, truth_z;
  std::vector<double> nn_y, nn_z;
  std::vector<double> geo_y, geo_z;
  std::vector<uint8_t> geo_ok;
  std::vector<double> nn_err_y, nn_err_z;    // signed, all rows
  std::vector<double> geo_err_y, geo_err_z;  // signed, valid rows only
  size_t geo_invalid = 0;
};

EstimatorEval evaluate_estimators(const Dataset& ds, const MlpModel& model,
                                  const std::vector<size_t>* subset = nullptr);

inline double median_abs(std::vector<double> v) {
  for (double& x : v) x = std::abs(x);
  return median(std::move(v));
}

}  // namespace ductflight
