#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ductflight/forcemap.hpp"
#include "ductflight/math.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

using namespace ductflight;

namespace {

constexpr double kTwoPi = 2.0 * kPi;

std::vector<double> sine(double amplitude, double freq, double fs, double seconds,
                         double offset = 0.0) {
  std::vector<double> out(static_cast<size_t>(seconds * fs));
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = offset + amplitude * std::sin(kTwoPi * freq * static_cast<double>(i) / fs);
  }
  return out;
}

// Amplitude of the `freq` component via quadrature demodulation over an
// integer number of cycles. Independent of the filter implementation.
double tone_amplitude(const std::vector<double>& x, double freq, double fs, double t0,
                      double t1) {
  size_t i0 = static_cast<size_t>(t0 * fs);
  size_t i1 = static_cast<size_t>(t1 * fs);
  double c = 0.0, s = 0.0;
  for (size_t i = i0; i < i1; ++i) {
    double phase = kTwoPi * freq * static_cast<double>(i) / fs;
    c += x[i] * std::cos(phase);
    s += x[i] * std::sin(phase);
  }
  double n = static_cast<double>(i1 - i0);
  return 2.0 * std::sqrt(c * c + s * s) / n;
}

// Analytic magnitude of an order-n Butterworth low-pass.
double butterworth_gain(double f, double fc, int order) {
  return 1.0 / std::sqrt(1.0 + std::pow(f / fc, 2.0 * order));
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("low-pass filter passes constants unchanged") {
  std::vector<double> x(1000, 0.7);
  auto y = butterworth_lowpass(x, 4, 1.0, 7000.0);
  REQUIRE(y.size() == x.size());
  for (double v : y) CHECK(v == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("low-pass filter hits the analytic magnitude response") {
  double fs = 7000.0;
  double fc = 1.0;

  SUBCASE("cutoff tone is attenuated 3 dB") {
    auto x = sine(1.0, 1.0, fs, 20.0);
    auto y = butterworth_lowpass(x, 4, fc, fs);
    double a = tone_amplitude(y, 1.0, fs, 5.0, 15.0);
    CHECK(a == doctest::Approx(butterworth_gain(1.0, fc, 4)).epsilon(1e-3));
    double db = 20.0 * std::log10(a);
    CHECK(db > -3.2);
    CHECK(db < -2.8);
  }

  SUBCASE("50 Hz vibration is suppressed by at least 80 dB") {
    auto x = sine(1.0, 50.0, fs, 20.0, 0.4);
    auto y = butterworth_lowpass(x, 4, fc, fs);
    double a = tone_amplitude(y, 50.0, fs, 5.0, 15.0);
    CHECK(a < 1e-4);
    // The digital response tracks the analog prototype closely this far
    // below Nyquist.
    double expected = butterworth_gain(50.0, fc, 4);
    CHECK(a == doctest::Approx(expected).epsilon(0.05));
    // The DC component survives.
    double mean = 0.0;
    for (size_t i = 35000; i < 105000; ++i) mean += y[i];
    mean /= 70000.0;
    CHECK(mean == doctest::Approx(0.4).epsilon(1e-6));
  }

  SUBCASE("pass band tones go through with near unit gain") {
    auto x = sine(0.5, 0.1, fs, 40.0);
    auto y = butterworth_lowpass(x, 4, fc, fs);
    double a = tone_amplitude(y, 0.1, fs, 10.0, 40.0);
    CHECK(a == doctest::Approx(0.5 * butterworth_gain(0.1, fc, 4)).epsilon(1e-3));
  }
}

TEST_CASE("low-pass filter is linear") {
  double fs = 7000.0;
  auto x1 = sine(0.8, 0.4, fs, 4.0, 0.2);
  auto x2 = sine(0.3, 7.0, fs, 4.0);
  std::vector<double> combo(x1.size());
  for (size_t i = 0; i < combo.size(); ++i) combo[i] = 2.0 * x1[i] - 0.5 * x2[i];
  auto y1 = butterworth_lowpass(x1, 4, 1.0, fs);
  auto y2 = butterworth_lowpass(x2, 4, 1.0, fs);
  auto yc = butterworth_lowpass(combo, 4, 1.0, fs);
  for (size_t i = 0; i < combo.size(); ++i) {
    CHECK(yc[i] == doctest::Approx(2.0 * y1[i] - 0.5 * y2[i]).epsilon(1e-9));
  }
}

TEST_CASE("low-pass filter rejects invalid setups") {
  std::vector<double> x(100, 0.0);
  CHECK_THROWS_WITH_AS(butterworth_lowpass(x, 4, 3500.0, 7000.0), "cutoff-above-nyquist",
                       std::invalid_argument);
  CHECK_THROWS_AS(butterworth_lowpass(x, 3, 1.0, 7000.0), std::invalid_argument);
  CHECK_THROWS_AS(butterworth_lowpass(x, 0, 1.0, 7000.0), std::invalid_argument);
}

TEST_CASE("baseline subtraction removes the free-air reference") {
  double fs = 7000.0;

  SUBCASE("a constant signal becomes zero") {
    std::vector<double> x(70000, 0.5);
    auto y = baseline_subtract(x, 5.0, fs);
    for (double v : y) CHECK(v == doctest::Approx(0.0));
  }

  SUBCASE("a step after the window keeps its height") {
    std::vector<double> x(70000, 0.5);
    for (size_t i = 40000; i < x.size(); ++i) x[i] = 0.8;
    auto y = baseline_subtract(x, 5.0, fs);
    CHECK(y[0] == doctest::Approx(0.0));
    CHECK(y.back() == doctest::Approx(0.3).epsilon(1e-12));
  }

  SUBCASE("noisy baseline is estimated to within its standard error") {
    Rng rng(31);
    double sigma = 0.05;
    size_t n_base = 35000, n_tail = 35000;
    std::vector<double> x;
    x.reserve(n_base + n_tail);
    for (size_t i = 0; i < n_base; ++i) x.push_back(0.5 + sigma * rng.gauss());
    for (size_t i = 0; i < n_tail; ++i) x.push_back(0.8 + sigma * rng.gauss());
    auto y = baseline_subtract(x, 5.0, fs);
    double mean = 0.0;
    for (size_t i = n_base; i < y.size(); ++i) mean += y[i];
    mean /= static_cast<double>(n_tail);
    double standard_error =
        sigma * std::sqrt(1.0 / static_cast<double>(n_base) + 1.0 / static_cast<double>(n_tail));
    CHECK(std::abs(mean - 0.3) < 3.0 * standard_error);
  }

  SUBCASE("window must fit the record") {
    std::vector<double> x(100, 0.0);
    CHECK_THROWS_AS(baseline_subtract(x, 5.0, fs), std::invalid_argument);
  }
}

TEST_CASE("cell statistics recover mean and covariance") {
  SUBCASE("constant samples have zero covariance") {
    std::vector<Vec2> samples(50, Vec2(0.2, -0.1));
    Vec2 mean;
    Mat2 cov;
    cell_stats(samples, &mean, &cov);
    CHECK(mean.x() == doctest::Approx(0.2));
    CHECK(mean.y() == doctest::Approx(-0.1));
    CHECK(cov.norm() == doctest::Approx(0.0));
  }

  SUBCASE("isotropic noise gives matching eigenvalues") {
    Rng rng(8);
    double sigma = 0.05;
    std::vector<Vec2> samples;
    samples.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
      samples.emplace_back(sigma * rng.gauss(), sigma * rng.gauss());
    }
    Vec2 mean;
    Mat2 cov;
    cell_stats(samples, &mean, &cov);
    Eigen::SelfAdjointEigenSolver<Mat2> eig(cov);
    CHECK(eig.eigenvalues()(0) == doctest::Approx(sigma * sigma).epsilon(0.05));
    CHECK(eig.eigenvalues()(1) == doctest::Approx(sigma * sigma).epsilon(0.05));
    CHECK(std::abs(mean.x()) < 3.0 * sigma / std::sqrt(100000.0));
  }

  SUBCASE("collinear samples give a rank one covariance") {
    Vec2 dir = Vec2(1.0, 2.0).normalized();
    Rng rng(9);
    std::vector<Vec2> samples;
    for (int i = 0; i < 1000; ++i) samples.push_back(rng.gauss() * dir);
    Vec2 mean;
    Mat2 cov;
    cell_stats(samples, &mean, &cov);
    Eigen::SelfAdjointEigenSolver<Mat2> eig(cov);
    CHECK(eig.eigenvalues()(0) < 1e-12 * eig.eigenvalues()(1));
  }

  SUBCASE("fewer than two samples is an error") {
    std::vector<Vec2> one(1, Vec2::Zero());
    Vec2 mean;
    Mat2 cov;
    CHECK_THROWS_AS(cell_stats(one, &mean, &cov), std::invalid_argument);
  }
}

namespace {

// Synthesizes a bench record for grid tests: 5 s free-air baseline, then a
// force step with two sinusoids realizing a chosen covariance. Frequencies
// sit in the filter pass band and complete integer cycles over the trailing
// stats window, so the recovered statistics should match the targets.
struct BenchFixture {
  double fs = 7000.0;
  double seconds = 18.0;
  Vec2 baseline{0.12, -0.05};
  double noise = 0.01;

  Vec2 mean_at(const Vec2& pos) const {
    return Vec2(0.3 * pos.x() - 0.1 * pos.y(), -0.2 * pos.x() + 0.25 * pos.y() + 0.05);
  }

  Mat2 cov_at(const Vec2& pos) const {
    double a = 4e-4 * (1.0 + std::abs(pos.x()));
    double b = 2.25e-4 * (1.0 + std::abs(pos.y()));
    double c = 0.5e-4;
    Mat2 cov;
    cov << a, c, c, b;
    return cov;
  }

  RawForceRecord record_at(const Vec2& pos, unsigned seed) const {
    Eigen::SelfAdjointEigenSolver<Mat2> eig(cov_at(pos));
    Vec2 u1 = eig.eigenvectors().col(0);
    Vec2 u2 = eig.eigenvectors().col(1);
    double a1 = std::sqrt(2.0 * eig.eigenvalues()(0));
    double a2 = std::sqrt(2.0 * eig.eigenvalues()(1));
    Vec2 step = mean_at(pos);
    Rng rng(seed);

    RawForceRecord rec;
    rec.sample_rate = fs;
    size_t n = static_cast<size_t>(seconds * fs);
    for (size_t i = 0; i < n; ++i) {
      double t = static_cast<double>(i) / fs;
      Vec2 f = baseline;
      if (t >= 5.0) {
        f += step;
        f += a1 * std::sin(kTwoPi * 0.3 * t) * u1;
        f += a2 * std::sin(kTwoPi * 0.5 * t) * u2;
      }
      f += noise * Vec2(rng.gauss(), rng.gauss());
      rec.t.push_back(t);
      rec.fx.push_back(0.0);
      rec.fy.push_back(f.x());
      rec.fz.push_back(f.y());
      rec.tx.push_back(0.0);
      rec.ty.push_back(0.0);
      rec.tz.push_back(0.0);
    }
    return rec;
  }
};

}  // namespace

TEST_CASE("grid building recovers per-cell statistics from bench records") {
  DuctShape duct = DuctShape::rectangular(0.5, 0.4, 1.0);
  BenchFixture fx;
  std::vector<Vec2> positions;
  for (double z : {-0.1, 0.0, 0.1}) {
    for (double y : {-0.08, 0.08}) {
      positions.emplace_back(y, z);
    }
  }
  GridBuildConfig cfg;
  ForceField field = build_grid(
      duct, positions,
      [&](size_t i) { return fx.record_at(positions[i], 100 + static_cast<unsigned>(i)); },
      cfg, 0.5);

  CHECK(field.ny == 2);
  CHECK(field.nz == 3);
  CHECK(field.regime == 0.5);
  REQUIRE(field.cells.size() == 6);

  double n_window = cfg.stats_window * fx.fs;
  for (const ForceCell& cell : field.cells) {
    Vec2 pos(cell.y, cell.z);
    Vec2 expected_mean = fx.mean_at(pos);
    Mat2 expected_cov = fx.cov_at(pos);
    for (int axis = 0; axis < 2; ++axis) {
      double tol = 3.0 * std::sqrt(expected_cov(axis, axis) / n_window) + 2e-4;
      CHECK(std::abs(cell.mean(axis) - expected_mean(axis)) < tol);
    }
    Eigen::SelfAdjointEigenSolver<Mat2> got(cell.cov), want(expected_cov);
    for (int k = 0; k < 2; ++k) {
      CHECK(got.eigenvalues()(k) == doctest::Approx(want.eigenvalues()(k)).epsilon(0.10));
    }
  }
}

TEST_CASE("grid building reports missing mount positions") {
  DuctShape duct = DuctShape::rectangular(0.5, 0.4, 1.0);
  BenchFixture fx;
  std::vector<Vec2> positions = {{-0.08, -0.1}, {0.08, -0.1}, {-0.08, 0.1}};
  GridBuildConfig cfg;
  try {
    build_grid(
        duct, positions, [&](size_t i) { return fx.record_at(positions[i], 7); }, cfg, 0.5);
    FAIL("expected an incomplete-grid error");
  } catch (const std::exception& e) {
    std::string msg = e.what();
    CHECK(msg.find("0.08") != std::string::npos);
    CHECK(msg.find("0.1") != std::string::npos);
  }
}

TEST_CASE("synthetic circular field has the expected structure") {
  DuctShape duct = DuctShape::circular(0.20, 1.0);
  SyntheticFieldParams params;

  double max_norm = 0.0;
  for (double y = -0.19; y <= 0.19; y += 0.01) {
    for (double z = -0.19; z <= 0.19; z += 0.01) {
      if (!duct.inside_cross_section(y, z)) continue;
      max_norm = std::max(max_norm, synthetic_mean(duct, params, y, z).norm());
    }
  }
  REQUIRE(max_norm > 0.1);

  // Quiet pocket a quarter diameter above the floor: the push-up from the
  // ground and the central down-wash cancel there by construction.
  Vec2 pocket = synthetic_mean(duct, params, 0.0, -0.10);
  CHECK(pocket.norm() < 0.2 * max_norm);

  // On the axis the down-wash column dominates.
  CHECK(synthetic_mean(duct, params, 0.0, 0.0).y() < 0.0);

  // Near the floor the ground effect pushes up.
  CHECK(synthetic_mean(duct, params, 0.0, -0.185).y() > 0.0);

  // Upper quadrants attract toward the nearer wall: outward lateral pull.
  Vec2 upper = synthetic_mean(duct, params, 0.10, 0.10);
  CHECK(upper.x() > 0.0);

  // Mirror symmetry about the vertical plane.
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    double y = rng.uniform(-0.14, 0.14);
    double z = rng.uniform(-0.14, 0.14);
    if (!duct.inside_cross_section(y, z)) continue;
    Vec2 f = synthetic_mean(duct, params, y, z);
    Vec2 g = synthetic_mean(duct, params, -y, z);
    CHECK(g.x() == doctest::Approx(-f.x()).epsilon(1e-12));
    CHECK(g.y() == doctest::Approx(f.y()).epsilon(1e-12));
  }
}

TEST_CASE("synthetic rectangular field pulls toward floor and ceiling") {
  DuctShape duct = DuctShape::rectangular(0.5, 0.5, 1.0);
  SyntheticFieldParams params;
  // Push-up in ground effect near the floor.
  CHECK(synthetic_mean(duct, params, 0.0, -0.22).y() > 0.0);
  // Suck-up toward the ceiling when flying close underneath it.
  CHECK(synthetic_mean(duct, params, 0.0, 0.20).y() > 0.0);
  // Attraction toward the nearer side wall.
  CHECK(synthetic_mean(duct, params, 0.20, 0.0).x() > 0.0);
  CHECK(synthetic_mean(duct, params, -0.20, 0.0).x() < 0.0);
}

TEST_CASE("field synthesis scales quadratically with the motor regime") {
  DuctShape duct = DuctShape::circular(0.175, 1.0);
  SyntheticFieldParams params;
  ForceField half = synthesize_field(duct, params, 0.5);
  ForceField high = synthesize_field(duct, params, 0.7);
  REQUIRE(half.cells.size() == high.cells.size());
  REQUIRE(half.cells.size() == 16 * 12);
  double k = (0.7 / 0.5) * (0.7 / 0.5);
  for (size_t i = 0; i < half.cells.size(); ++i) {
    CHECK(high.cells[i].mean.x() == doctest::Approx(k * half.cells[i].mean.x()).epsilon(1e-12));
    CHECK(high.cells[i].mean.y() == doctest::Approx(k * half.cells[i].mean.y()).epsilon(1e-12));
    double sigma = k * params.cov_floor + params.cov_scale * high.cells[i].mean.norm();
    CHECK(high.cells[i].cov(0, 0) == doctest::Approx(sigma * sigma).epsilon(1e-12));
    CHECK(high.cells[i].cov(0, 1) == doctest::Approx(0.0));
  }
}

TEST_CASE("field lookup interpolates bilinearly between cell centers") {
  DuctShape duct = DuctShape::circular(0.175, 1.0);
  ForceField field = synthesize_field(duct, SyntheticFieldParams{}, 0.5);

  SUBCASE("query at a cell center returns the cell values") {
    const ForceCell& c = field.cell(field.ny / 2, field.nz / 2);
    Vec2 mean;
    Mat2 cov;
    field.lookup(c.y, c.z, &mean, &cov);
    CHECK((mean - c.mean).norm() < 1e-12);
    CHECK((cov - c.cov).norm() < 1e-12);
  }

  SUBCASE("midpoint between lateral neighbors is their average") {
    const ForceCell& a = field.cell(4, 6);
    const ForceCell& b = field.cell(5, 6);
    Vec2 mean;
    Mat2 cov;
    field.lookup(0.5 * (a.y + b.y), a.z, &mean, &cov);
    CHECK((mean - 0.5 * (a.mean + b.mean)).norm() < 1e-12);
    CHECK((cov - 0.5 * (a.cov + b.cov)).norm() < 1e-12);
  }

  SUBCASE("lookup is continuous across cell boundaries") {
    Rng rng(23);
    for (int i = 0; i < 200; ++i) {
      double y = rng.uniform(-0.12, 0.12);
      double z = rng.uniform(-0.12, 0.12);
      Vec2 m1, m2;
      Mat2 c1, c2;
      field.lookup(y, z, &m1, &c1);
      field.lookup(y + 1e-7, z, &m2, &c2);
      CHECK((m2 - m1).norm() < 1e-4);
      field.lookup(y, z + 1e-7, &m2, &c2);
      CHECK((m2 - m1).norm() < 1e-4);
    }
  }

  SUBCASE("outside the cross-section the lookup throws") {
    Vec2 mean;
    Mat2 cov;
    CHECK_THROWS_AS(field.lookup(0.2, 0.0, &mean, &cov), std::invalid_argument);
    // Inside the duct but outside the grid hull: clamped, not an error.
    CHECK_NOTHROW(field.lookup(0.0, -0.17, &mean, &cov));
  }
}

TEST_CASE("force maps round trip through their file format") {
  DuctShape duct = DuctShape::circular(0.175, 1.0);
  ForceField field = synthesize_field(duct, SyntheticFieldParams{}, 0.65, 6, 5);
  auto path = temp_file("forcemap_roundtrip.csv");
  save_force_field(field, path.string());
  ForceField back = load_force_field(path.string());

  CHECK(back.duct.section == duct.section);
  CHECK(back.duct.radius == field.duct.radius);
  CHECK(back.regime == field.regime);
  CHECK(back.ny == field.ny);
  CHECK(back.nz == field.nz);
  REQUIRE(back.cells.size() == field.cells.size());
  for (size_t i = 0; i < field.cells.size(); ++i) {
    CHECK(back.cells[i].y == field.cells[i].y);
    CHECK(back.cells[i].z == field.cells[i].z);
    CHECK((back.cells[i].mean - field.cells[i].mean).norm() == 0.0);
    CHECK((back.cells[i].cov - field.cells[i].cov).norm() == 0.0);
  }
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".meta");
}
