#pragma once

#include "ductflight/sim.hpp"

#include <string>

namespace ductflight {

/// Supervised sample set for the neural localizer: one row per ranger frame
/// with the ground-truth cross-section position attached.
struct Dataset {
  std::vector<TofFrame> frames;
  std::vector<Vec2> labels;   // (y, z), axis-centered
  std::vector<double> x_pos;  // axial truth, logged but not learned
  std::string duct_tag;

  size_t size() const { return frames.size(); }

  /// Dense matrices for the trainer: X rows are 13-feature inputs,
  /// Y rows are (y, z) labels.
  void to_matrices(Eigen::MatrixXd* x, Eigen::MatrixXd* y) const;

  /// CSV with a key=value ".meta" sidecar describing the source duct.
  void save(const std::string& path) const;
  static Dataset load(const std::string& path);
};

struct DatasetConfig {
  int flights = 9;
  double flight_duration = 180.0;
  double trim_head = 10.0;  // drop the takeoff transient
  double trim_tail = 5.0;   // drop the final seconds
  bool mirror = true;       // append the y-mirrored copy of every sample
};

/// Collect training data from truth-feedback excitation flights in the given
/// duct and disturbance field. Collided flights are dropped whole; throws
/// when every flight crashed.
Dataset collect_dataset(const DuctShape& duct, const ForceField* field,
                        const DroneParams& drone, const FlightParams& flight,
                        const DatasetConfig& cfg, Rng* rng);

/// Short duct identifier used to tag models with their training geometry,
/// e.g. "c350" (circular, 350 mm diameter) or "r300x250".
std::string duct_tag(const DuctShape& duct);

/// Inverse of duct_tag; throws on a malformed tag.
DuctShape duct_from_tag(const std::string& tag, double length = 1.0);

}  // namespace ductflight
