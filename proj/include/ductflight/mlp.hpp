#pragma once

#include "ductflight/sensors.hpp"

#include <string>
#include <vector>

namespace ductflight {

/// Fully connected 13-32-16-2 network with ReLU hidden activations and a
/// linear output head: 1010 trainable parameters. Inputs are standardized
/// with per-feature mean/std stored inside the model. Input order:
/// [tof0..tof7, tof_down, vy, vz, roll, pitch]; the up channel is unused.
struct MlpModel {
  static constexpr int kIn = 13;
  static constexpr int kH1 = 32;
  static constexpr int kH2 = 16;
  static constexpr int kOut = 2;

  Eigen::MatrixXd w1, w2, w3;  // kH1 x kIn, kH2 x kH1, kOut x kH2
  Eigen::VectorXd b1, b2, b3;
  Eigen::VectorXd norm_mean, norm_std;  // kIn
  std::string duct_tag;   // e.g. "c350" = circular 350 mm training duct
  uint64_t seed = 0;

  /// Randomly initialized model (He-scaled weights, zero biases, identity
  /// normalization).
  static MlpModel init(uint64_t seed);

  /// Predict (y, z) from one raw (unnormalized) input vector.
  Vec2 forward(const Eigen::VectorXd& input) const;

  size_t parameter_count() const;

  /// Self-describing text serialization; numbers round-trip exactly.
  void save(const std::string& path) const;
  static MlpModel load(const std::string& path);
};

/// Pack an array frame plus the velocity/attitude tags into the 13-input
/// vector the network consumes.
Eigen::VectorXd nn_input(const TofFrame& frame);

/// Mirror a training sample across the duct's vertical plane (y -> -y):
/// horizontal channels permute with mirror_channel, vy and roll flip sign,
/// the lateral label flips sign. Applying it twice is an exact identity.
void augment_mirror(TofFrame* frame, double* y_label);

/// Gradients with the same shapes as the model parameters.
struct MlpGrads {
  Eigen::MatrixXd w1, w2, w3;
  Eigen::VectorXd b1, b2, b3;
};

/// Mean squared error of the model over pre-normalized inputs Xn (kIn x N)
/// against labels Y (kOut x N); mean over samples and output components.
double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& xn, const Eigen::MatrixXd& y);

/// Loss plus analytic parameter gradients via backpropagation.
double mlp_loss_and_grads(const MlpModel& model, const Eigen::MatrixXd& xn,
                          const Eigen::MatrixXd& y, MlpGrads* grads);

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 256;
  int epochs = 50;
  double train_fraction = 0.88;
  uint64_t seed = 1;
};

struct TrainReport {
  std::vector<double> train_mse;  // one entry per epoch
  std::vector<double> test_mse;
  std::vector<size_t> train_indices;
  std::vector<size_t> test_indices;
};

struct TrainResult {
  MlpModel model;
  TrainReport report;
};

/// Train on rows of X (N x kIn) / Y (N x kOut) with an Adam-style adaptive
/// optimizer. The row set is shuffled and split train/test by the config
/// fractions; normalization statistics come from the training split only.
/// Identical seeds and data give bit-identical models. Throws when the
/// training loss diverges, naming the epoch.
TrainResult train_mlp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      const TrainConfig& cfg, const std::string& duct_tag);

}  // namespace ductflight
