#include "ductflight/mlp.hpp"

#include "ductflight/ioutil.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ductflight {

MlpModel MlpModel::init(uint64_t seed) {
  Rng rng(seed);
  auto he = [&](int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    double s = std::sqrt(2.0 / cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = s * rng.gauss();
    }
    return m;
  };
  MlpModel model;
  model.w1 = he(kH1, kIn);
  model.w2 = he(kH2, kH1);
  model.w3 = he(kOut, kH2);
  model.b1 = Eigen::VectorXd::Zero(kH1);
  model.b2 = Eigen::VectorXd::Zero(kH2);
  model.b3 = Eigen::VectorXd::Zero(kOut);
  model.norm_mean = Eigen::VectorXd::Zero(kIn);
  model.norm_std = Eigen::VectorXd::Ones(kIn);
  model.seed = seed;
  return model;
}

size_t MlpModel::parameter_count() const {
  return static_cast<size_t>(w1.size() + w2.size() + w3.size() + b1.size() + b2.size() +
                             b3.size());
}

Vec2 MlpModel::forward(const Eigen::VectorXd& input) const {
  Eigen::VectorXd xn = (input - norm_mean).cwiseQuotient(norm_std);
  Eigen::VectorXd h1 = (w1 * xn + b1).cwiseMax(0.0);
  Eigen::VectorXd h2 = (w2 * h1 + b2).cwiseMax(0.0);
  Eigen::VectorXd out = w3 * h2 + b3;
  return Vec2(out(0), out(1));
}

Eigen::VectorXd nn_input(const TofFrame& frame) {
  Eigen::VectorXd x(MlpModel::kIn);
  for (int i = 0; i < 8; ++i) x(i) = frame.distances[i];
  x(8) = frame.distances[kTofDown];
  x(9) = frame.vy;
  x(10) = frame.vz;
  x(11) = frame.roll;
  x(12) = frame.pitch;
  return x;
}

void augment_mirror(TofFrame* frame, double* y_label) {
  std::array<double, 10> d = frame->distances;
  for (int i = 0; i < 8; ++i) frame->distances[i] = d[mirror_channel(i)];
  frame->vy = -frame->vy;
  frame->roll = -frame->roll;
  *y_label = -*y_label;
}

double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& xn, const Eigen::MatrixXd& y) {
  Eigen::MatrixXd h1 = ((model.w1 * xn).colwise() + model.b1).cwiseMax(0.0);
  Eigen::MatrixXd h2 = ((model.w2 * h1).colwise() + model.b2).cwiseMax(0.0);
  Eigen::MatrixXd p = (model.w3 * h2).colwise() + model.b3;
  return (p - y).squaredNorm() / static_cast<double>(y.size());
}

double mlp_loss_and_grads(const MlpModel& model, const Eigen::MatrixXd& xn,
                          const Eigen::MatrixXd& y, MlpGrads* grads) {
  Eigen::MatrixXd z1 = (model.w1 * xn).colwise() + model.b1;
  Eigen::MatrixXd a1 = z1.cwiseMax(0.0);
  Eigen::MatrixXd z2 = (model.w2 * a1).colwise() + model.b2;
  Eigen::MatrixXd a2 = z2.cwiseMax(0.0);
  Eigen::MatrixXd p = (model.w3 * a2).colwise() + model.b3;

  Eigen::MatrixXd diff = p - y;
  double loss = diff.squaredNorm() / static_cast<double>(y.size());

  Eigen::MatrixXd dp = diff * (2.0 / static_cast<double>(y.size()));
  grads->w3 = dp * a2.transpose();
  grads->b3 = dp.rowwise().sum();
  Eigen::MatrixXd dz2 =
      (model.w3.transpose() * dp).cwiseProduct((z2.array() > 0.0).cast<double>().matrix());
  grads->w2 = dz2 * a1.transpose();
  grads->b2 = dz2.rowwise().sum();
  Eigen::MatrixXd dz1 =
      (model.w2.transpose() * dz2).cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
  grads->w1 = dz1 * xn.transpose();
  grads->b1 = dz1.rowwise().sum();
  return loss;
}

namespace {

// One Adam-style slot per parameter block.
struct AdamState {
  Eigen::MatrixXd m, v;
  void init(int rows, int cols) {
    m = Eigen::MatrixXd::Zero(rows, cols);
    v = Eigen::MatrixXd::Zero(rows, cols);
  }
};

template <typename ParamT, typename GradT>
void adam_update(ParamT& param, const GradT& grad, AdamState* st, double lr, int t) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  st->m = (b1 * st->m.array() + (1.0 - b1) * grad.array()).matrix();
  st->v = (b2 * st->v.array() + (1.0 - b2) * grad.array().square()).matrix();
  double c1 = 1.0 - std::pow(b1, t);
  double c2 = 1.0 - std::pow(b2, t);
  param.array() -= (lr / c1) * st->m.array() / ((st->v.array() / c2).sqrt() + eps);
}

}  // namespace

TrainResult train_mlp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      const TrainConfig& cfg, const std::string& duct_tag) {
  if (x.cols() != MlpModel::kIn || y.cols() != MlpModel::kOut || x.rows() != y.rows()) {
    throw std::invalid_argument("training data must be N x 13 inputs and N x 2 labels");
  }
  size_t n = static_cast<size_t>(x.rows());
  size_t n_train = static_cast<size_t>(std::llround(cfg.train_fraction * n));
  if (n_train < 2 || n_train >= n) {
    throw std::invalid_argument("split leaves an empty train or test set");
  }

  Rng rng(cfg.seed);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  for (size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.integer(i + 1)]);
  }

  TrainResult result;
  result.report.train_indices.assign(order.begin(), order.begin() + n_train);
  result.report.test_indices.assign(order.begin() + n_train, order.end());

  // Standardization from the training split only.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(MlpModel::kIn);
  for (size_t i : result.report.train_indices) mean += x.row(i).transpose();
  mean /= static_cast<double>(n_train);
  Eigen::VectorXd var = Eigen::VectorXd::Zero(MlpModel::kIn);
  for (size_t i : result.report.train_indices) {
    Eigen::VectorXd d = x.row(i).transpose() - mean;
    var += d.cwiseProduct(d);
  }
  var /= static_cast<double>(n_train);
  Eigen::VectorXd sd = var.cwiseSqrt().cwiseMax(1e-9);

  auto gather = [&](const std::vector<size_t>& idx) {
    std::pair<Eigen::MatrixXd, Eigen::MatrixXd> out;
    out.first.resize(MlpModel::kIn, idx.size());
    out.second.resize(MlpModel::kOut, idx.size());
    for (size_t k = 0; k < idx.size(); ++k) {
      out.first.col(k) = (x.row(idx[k]).transpose() - mean).cwiseQuotient(sd);
      out.second.col(k) = y.row(idx[k]).transpose();
    }
    return out;
  };
  auto [xtr, ytr] = gather(result.report.train_indices);
  auto [xte, yte] = gather(result.report.test_indices);

  MlpModel model = MlpModel::init(cfg.seed);
  model.norm_mean = mean;
  model.norm_std = sd;
  model.duct_tag = duct_tag;

  AdamState sw1, sw2, sw3, sb1, sb2, sb3;
  sw1.init(MlpModel::kH1, MlpModel::kIn);
  sw2.init(MlpModel::kH2, MlpModel::kH1);
  sw3.init(MlpModel::kOut, MlpModel::kH2);
  sb1.init(MlpModel::kH1, 1);
  sb2.init(MlpModel::kH2, 1);
  sb3.init(MlpModel::kOut, 1);

  std::vector<size_t> batch_order(n_train);
  std::iota(batch_order.begin(), batch_order.end(), size_t{0});
  MlpGrads grads;
  int t_adam = 0;

  // Divergence reference: the untouched initial model. A run whose loss
  // blows past this by orders of magnitude is broken even while the numbers
  // are still finite.
  double ref_mse = mlp_loss(model, xtr, ytr) + 1e-12;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t i = n_train - 1; i > 0; --i) {
      std::swap(batch_order[i], batch_order[rng.integer(i + 1)]);
    }
    for (size_t start = 0; start < n_train; start += cfg.batch_size) {
      size_t b = std::min(static_cast<size_t>(cfg.batch_size), n_train - start);
      Eigen::MatrixXd xb(MlpModel::kIn, b), yb(MlpModel::kOut, b);
      for (size_t k = 0; k < b; ++k) {
        xb.col(k) = xtr.col(batch_order[start + k]);
        yb.col(k) = ytr.col(batch_order[start + k]);
      }
      mlp_loss_and_grads(model, xb, yb, &grads);
      ++t_adam;
      adam_update(model.w1, grads.w1, &sw1, cfg.learning_rate, t_adam);
      adam_update(model.w2, grads.w2, &sw2, cfg.learning_rate, t_adam);
      adam_update(model.w3, grads.w3, &sw3, cfg.learning_rate, t_adam);
      adam_update(model.b1, grads.b1, &sb1, cfg.learning_rate, t_adam);
      adam_update(model.b2, grads.b2, &sb2, cfg.learning_rate, t_adam);
      adam_update(model.b3, grads.b3, &sb3, cfg.learning_rate, t_adam);
    }
    double train_mse = mlp_loss(model, xtr, ytr);
    double test_mse = mlp_loss(model, xte, yte);
    if (!std::isfinite(train_mse) || !std::isfinite(test_mse) ||
        train_mse > 1e6 * ref_mse) {
      throw std::runtime_error("training diverged at epoch " + std::to_string(epoch));
    }
    result.report.train_mse.push_back(train_mse);
    result.report.test_mse.push_back(test_mse);
  }

  model.seed = cfg.seed;
  result.model = model;
  return result;
}

namespace {

void write_matrix(std::ofstream& out, const std::string& name, const Eigen::MatrixXd& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << fmt_double(m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix(std::istream& in, const std::string& expect_name) {
  std::string name;
  Eigen::Index rows = 0, cols = 0;
  in >> name >> rows >> cols;
  if (name != expect_name || rows <= 0 || cols <= 0) {
    throw std::runtime_error("model file: expected block '" + expect_name + "'");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      std::string tok;
      in >> tok;
      m(r, c) = parse_double(tok);
    }
  }
  return m;
}

}  // namespace

void MlpModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "ductflight-mlp v1\n";
  out << "duct_tag " << (duct_tag.empty() ? "-" : duct_tag) << '\n';
  out << "seed " << seed << '\n';
  out << "layers " << kIn << ' ' << kH1 << ' ' << kH2 << ' ' << kOut << '\n';
  write_matrix(out, "norm_mean", norm_mean);
  write_matrix(out, "norm_std", norm_std);
  write_matrix(out, "w1", w1);
  write_matrix(out, "b1", b1);
  write_matrix(out, "w2", w2);
  write_matrix(out, "b2", b2);
  write_matrix(out, "w3", w3);
  write_matrix(out, "b3", b3);
}

MlpModel MlpModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string magic, version;
  in >> magic >> version;
  if (magic != "ductflight-mlp" || version != "v1") {
    throw std::runtime_error("not a ductflight-mlp v1 file: " + path);
  }
  MlpModel model;
  std::string key;
  in >> key >> model.duct_tag;
  if (key != "duct_tag") throw std::runtime_error("model file: expected duct_tag");
  if (model.duct_tag == "-") model.duct_tag.clear();
  in >> key >> model.seed;
  if (key != "seed") throw std::runtime_error("model file: expected seed");
  int li, h1, h2, lo;
  in >> key >> li >> h1 >> h2 >> lo;
  if (key != "layers" || li != kIn || h1 != kH1 || h2 != kH2 || lo != kOut) {
    throw std::runtime_error("model file: unexpected layer sizes");
  }
  model.norm_mean = read_matrix(in, "norm_mean");
  model.norm_std = read_matrix(in, "norm_std");
  model.w1 = read_matrix(in, "w1");
  model.b1 = read_matrix(in, "b1");
  model.w2 = read_matrix(in, "w2");
  model.b2 = read_matrix(in, "b2");
  model.w3 = read_matrix(in, "w3");
  model.b3 = read_matrix(in, "b3");
  if ((model.norm_std.array() <= 0.0).any()) {
    throw std::runtime_error("model file: non-positive feature std");
  }
  return model;
}

}  // namespace ductflight
