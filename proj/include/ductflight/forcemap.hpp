#pragma once

#include "ductflight/duct.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ductflight {

/// Raw force/torque acquisition at one mount position. Columns follow the
/// bench logger: time plus three force and three torque channels, sampled
/// uniformly at `sample_rate`.
struct RawForceRecord {
  double sample_rate = 7000.0;
  std::vector<double> t, fx, fy, fz, tx, ty, tz;
  size_t size() const { return fy.size(); }
};

/// Causal low-pass Butterworth filter of even order, realized as cascaded
/// second-order sections (direct form II transposed). Per-section state is
/// seeded with the constant-input fixed point of the first sample, so a
/// constant signal passes through unchanged from sample 0 and the startup
/// transient of slowly varying signals is suppressed.
///
/// Throws "cutoff-above-nyquist" when cutoff >= fs/2 and rejects odd orders.
std::vector<double> butterworth_lowpass(const std::vector<double>& signal, int order,
                                        double cutoff, double fs);

/// Subtract the mean of the first `window` seconds from the whole series.
/// Throws when the window does not fit in the series.
std::vector<double> baseline_subtract(const std::vector<double>& signal, double window,
                                      double fs);

/// Mean and unbiased (n-1) covariance of 2D samples. Needs n >= 2.
void cell_stats(const std::vector<Vec2>& samples, Vec2* mean, Mat2* cov);

/// One grid cell of the disturbance force map: duct-frame position of the
/// cell center, mean lateral/vertical force and its covariance.
struct ForceCell {
  double y = 0.0, z = 0.0;
  Vec2 mean = Vec2::Zero();
  Mat2 cov = Mat2::Zero();
};

/// Regular ny x nz grid of force cells covering the flyable cross-section.
/// Cells are stored row-major by z then y. Lookup is bilinear between cell
/// centers with clamped (nearest-edge) extrapolation outside the grid hull.
struct ForceField {
  DuctShape duct;
  double regime = 0.5;  // motor command fraction the map was acquired at
  int ny = 0, nz = 0;
  double y0 = 0.0, z0 = 0.0;  // center of cell (0, 0)
  double dy = 0.0, dz = 0.0;  // cell pitch
  std::vector<ForceCell> cells;

  const ForceCell& cell(int iy, int iz) const { return cells[iz * ny + iy]; }

  /// Interpolated mean and covariance at a duct-frame point. Throws when the
  /// query lies outside the duct cross-section.
  void lookup(double y, double z, Vec2* mean, Mat2* cov) const;
};

struct GridBuildConfig {
  double baseline_window = 5.0;  // seconds of free-air reference at the start
  double stats_window = 10.0;    // trailing seconds used for cell statistics
  int filter_order = 4;
  double filter_cutoff = 1.0;    // Hz
};

/// Process per-position bench records into a force map. `positions` lists
/// the mount points; `load` returns the record for one index. The positions
/// must fill a complete rectangular grid; otherwise the error lists every
/// missing (y, z) combination.
ForceField build_grid(const DuctShape& duct, const std::vector<Vec2>& positions,
                      const std::function<RawForceRecord(size_t)>& load,
                      const GridBuildConfig& cfg, double regime);

/// Parameters of the synthetic analytic disturbance field. Length scales are
/// fractions of the duct half-height so the shape transfers across duct
/// sizes; amplitudes are newtons at the 50% motor regime.
struct SyntheticFieldParams {
  // Circular sections: ground-effect push-up, a downward central column and
  // wall attraction over the two top quadrants.
  double ground_amp = 0.6;
  double ground_decay_frac = 0.15;
  double column_amp = -1.0;  // < 0 selects the quarter-diameter balance value
  double column_decay_frac = 1.2;
  double column_width_frac = 0.5;
  double wall_amp = 0.45;
  double wall_decay_frac = 0.25;
  // Rectangular sections: push-up near the floor, pull-up near the ceiling,
  // attraction toward the nearer side wall.
  double rect_ground_amp = 0.5;
  double rect_ceiling_amp = 0.4;
  double rect_wall_amp = 0.5;
  double rect_decay_frac = 0.2;
  // Fluctuation magnitude: sigma = cov_floor + cov_scale * |mean|, isotropic.
  double cov_floor = 0.004;
  double cov_scale = 0.6;
};

/// Evaluate the synthetic field mean at one duct-frame point (unit regime
/// scale). Exposed for tests; synthesize_field samples this onto the grid.
Vec2 synthetic_mean(const DuctShape& duct, const SyntheticFieldParams& p, double y, double z);

/// Build a force map from the analytic field. Amplitudes scale with
/// (regime / 0.5)^2: disturbances grow quadratically with rotor speed.
/// Circular grids span the inscribed square, rectangular grids the inset
/// section, 16 x 12 = 192 cells by default.
ForceField synthesize_field(const DuctShape& duct, const SyntheticFieldParams& params,
                            double regime, int ny = 16, int nz = 12);

/// Serialize a force map: CSV with header y,z,fy_mean,fz_mean,cov_yy,cov_yz,cov_zz
/// plus a key=value sidecar (path + ".meta") carrying duct, regime and grid info.
void save_force_field(const ForceField& field, const std::string& path);
ForceField load_force_field(const std::string& path);

}  // namespace ductflight
