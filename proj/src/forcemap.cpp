#include "ductflight/forcemap.hpp"

#include "ductflight/ioutil.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ductflight {

namespace {

struct Biquad {
  double b0, b1, b2, a1, a2;
};

// Bilinear-transform lowpass sections for a Butterworth prototype. Section k
// of an order-n filter carries the conjugate pole pair with damping
// 2*sin(pi*(2k+1)/(2n)); prewarping makes the -3 dB point land exactly on
// the requested cutoff.
std::vector<Biquad> design_lowpass(int order, double cutoff, double fs) {
  if (order <= 0 || order % 2 != 0) {
    throw std::invalid_argument("filter order must be a positive even number");
  }
  if (cutoff <= 0.0 || cutoff >= 0.5 * fs) {
    throw std::invalid_argument("cutoff-above-nyquist");
  }
  double K = 1.0 / std::tan(kPi * cutoff / fs);
  std::vector<Biquad> sections;
  for (int k = 0; k < order / 2; ++k) {
    double damp = 2.0 * std::sin(kPi * (2 * k + 1) / (2.0 * order));
    double D = K * K + damp * K + 1.0;
    Biquad s;
    s.b0 = 1.0 / D;
    s.b1 = 2.0 / D;
    s.b2 = 1.0 / D;
    s.a1 = 2.0 * (1.0 - K * K) / D;
    s.a2 = (K * K - damp * K + 1.0) / D;
    sections.push_back(s);
  }
  return sections;
}

}  // namespace

std::vector<double> butterworth_lowpass(const std::vector<double>& signal, int order,
                                        double cutoff, double fs) {
  std::vector<Biquad> sections = design_lowpass(order, cutoff, fs);
  std::vector<double> y = signal;
  // Seed value for the section states: the mean of up to the first half
  // second. Seeding from sample 0 alone would bake one noise draw into the
  // startup state and bias the early output on noisy bench data.
  double seed = 0.0;
  if (!y.empty()) {
    size_t chunk = std::max<size_t>(
        1, std::min(y.size(), static_cast<size_t>(std::llround(0.5 * fs))));
    for (size_t i = 0; i < chunk; ++i) seed += y[i];
    seed /= static_cast<double>(chunk);
  }
  for (const Biquad& s : sections) {
    if (y.empty()) break;
    // Direct form II transposed, state seeded with the steady-state response
    // to a constant input equal to the seed. Each section has unity DC gain,
    // so the whole cascade passes constants exactly.
    double s1 = (1.0 - s.b0) * seed;
    double s2 = (s.b2 - s.a2) * seed;
    for (double& v : y) {
      double x = v;
      double out = s.b0 * x + s1;
      s1 = s.b1 * x - s.a1 * out + s2;
      s2 = s.b2 * x - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> baseline_subtract(const std::vector<double>& signal, double window,
                                      double fs) {
  size_t n = static_cast<size_t>(std::llround(window * fs));
  if (n < 1 || n > signal.size()) {
    throw std::invalid_argument("baseline window does not fit the series");
  }
  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) mean += signal[i];
  mean /= static_cast<double>(n);
  std::vector<double> out = signal;
  for (double& v : out) v -= mean;
  return out;
}

void cell_stats(const std::vector<Vec2>& samples, Vec2* mean, Mat2* cov) {
  size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("cell_stats needs at least two samples");
  Vec2 m = Vec2::Zero();
  for (const Vec2& s : samples) m += s;
  m /= static_cast<double>(n);
  Mat2 c = Mat2::Zero();
  for (const Vec2& s : samples) {
    Vec2 d = s - m;
    c += d * d.transpose();
  }
  c /= static_cast<double>(n - 1);
  *mean = m;
  *cov = c;
}

void ForceField::lookup(double y, double z, Vec2* mean, Mat2* cov) const {
  if (!duct.inside_cross_section(y, z)) {
    throw std::invalid_argument("force lookup outside duct cross-section");
  }
  // Clamped bilinear: queries outside the cell-center hull take the value at
  // the nearest edge/corner of the grid.
  double gy = std::clamp((y - y0) / dy, 0.0, static_cast<double>(ny - 1));
  double gz = std::clamp((z - z0) / dz, 0.0, static_cast<double>(nz - 1));
  int iy = std::min(static_cast<int>(gy), ny - 2);
  int iz = std::min(static_cast<int>(gz), nz - 2);
  if (ny == 1) iy = 0;
  if (nz == 1) iz = 0;
  double fy = std::clamp(gy - iy, 0.0, 1.0);
  double fz = std::clamp(gz - iz, 0.0, 1.0);

  auto at = [&](int a, int b) -> const ForceCell& {
    return cell(std::min(a, ny - 1), std::min(b, nz - 1));
  };
  const ForceCell& c00 = at(iy, iz);
  const ForceCell& c10 = at(iy + 1, iz);
  const ForceCell& c01 = at(iy, iz + 1);
  const ForceCell& c11 = at(iy + 1, iz + 1);
  double w00 = (1 - fy) * (1 - fz), w10 = fy * (1 - fz);
  double w01 = (1 - fy) * fz, w11 = fy * fz;
  *mean = w00 * c00.mean + w10 * c10.mean + w01 * c01.mean + w11 * c11.mean;
  *cov = w00 * c00.cov + w10 * c10.cov + w01 * c01.cov + w11 * c11.cov;
}

ForceField build_grid(const DuctShape& duct, const std::vector<Vec2>& positions,
                      const std::function<RawForceRecord(size_t)>& load,
                      const GridBuildConfig& cfg, double regime) {
  if (positions.empty()) throw std::invalid_argument("no force record positions");

  // Recover the grid axes from the position set. Coordinates are matched
  // with a tolerance well below any sensible cell pitch.
  const double tol = 1e-6;
  auto axis_values = [&](auto getter) {
    std::vector<double> vals;
    for (const Vec2& p : positions) {
      double v = getter(p);
      bool found = false;
      for (double u : vals) {
        if (std::abs(u - v) < tol) { found = true; break; }
      }
      if (!found) vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end());
    return vals;
  };
  std::vector<double> ys = axis_values([](const Vec2& p) { return p.x(); });
  std::vector<double> zs = axis_values([](const Vec2& p) { return p.y(); });

  int ny = static_cast<int>(ys.size());
  int nz = static_cast<int>(zs.size());
  std::vector<int> slot(static_cast<size_t>(ny) * nz, -1);
  for (size_t i = 0; i < positions.size(); ++i) {
    auto index_of = [&](const std::vector<double>& ax, double v) {
      for (size_t k = 0; k < ax.size(); ++k) {
        if (std::abs(ax[k] - v) < tol) return static_cast<int>(k);
      }
      return -1;
    };
    int iy = index_of(ys, positions[i].x());
    int iz = index_of(zs, positions[i].y());
    slot[static_cast<size_t>(iz) * ny + iy] = static_cast<int>(i);
  }
  std::string missing;
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < ny; ++iy) {
      if (slot[static_cast<size_t>(iz) * ny + iy] < 0) {
        missing += " (y=" + fmt_double(ys[iy]) + ", z=" + fmt_double(zs[iz]) + ")";
      }
    }
  }
  if (!missing.empty()) {
    throw std::runtime_error("force grid has missing positions:" + missing);
  }

  ForceField field;
  field.duct = duct;
  field.regime = regime;
  field.ny = ny;
  field.nz = nz;
  field.y0 = ys.front();
  field.z0 = zs.front();
  field.dy = ny > 1 ? (ys.back() - ys.front()) / (ny - 1) : 1.0;
  field.dz = nz > 1 ? (zs.back() - zs.front()) / (nz - 1) : 1.0;
  field.cells.resize(static_cast<size_t>(ny) * nz);

  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < ny; ++iy) {
      size_t idx = static_cast<size_t>(iz) * ny + iy;
      RawForceRecord rec = load(static_cast<size_t>(slot[idx]));
      if (rec.fy.size() != rec.fz.size() || rec.size() == 0) {
        throw std::runtime_error("malformed force record");
      }
      double fs = rec.sample_rate;
      std::vector<double> fy = baseline_subtract(
          butterworth_lowpass(rec.fy, cfg.filter_order, cfg.filter_cutoff, fs),
          cfg.baseline_window, fs);
      std::vector<double> fz = baseline_subtract(
          butterworth_lowpass(rec.fz, cfg.filter_order, cfg.filter_cutoff, fs),
          cfg.baseline_window, fs);

      size_t n_stats = static_cast<size_t>(std::llround(cfg.stats_window * fs));
      if (n_stats + static_cast<size_t>(std::llround(cfg.baseline_window * fs)) >
          fy.size()) {
        throw std::runtime_error("record too short for baseline + stats windows");
      }
      std::vector<Vec2> tail;
      tail.reserve(n_stats);
      for (size_t i = fy.size() - n_stats; i < fy.size(); ++i) {
        tail.emplace_back(fy[i], fz[i]);
      }
      ForceCell& c = field.cells[idx];
      c.y = ys[iy];
      c.z = zs[iz];
      cell_stats(tail, &c.mean, &c.cov);
    }
  }
  return field;
}

Vec2 synthetic_mean(const DuctShape& duct, const SyntheticFieldParams& p, double y,
                    double z) {
  if (duct.section == DuctSection::Circular) {
    double r = duct.radius;
    double h = z + r;  // height above the floor
    double lg = p.ground_decay_frac * r;
    double ld = p.column_decay_frac * r;
    double sy = p.column_width_frac * r;

    // Downward column amplitude, balancing the ground effect exactly at a
    // quarter diameter above the floor unless overridden: the "calm zone".
    double col = p.column_amp;
    if (col < 0.0) {
      col = p.ground_amp * std::exp(-(0.5 * r) / lg) / (1.0 - std::exp(-(0.5 * r) / ld));
    }

    double fz = p.ground_amp * std::exp(-h / lg);
    fz -= col * std::exp(-y * y / (2.0 * sy * sy)) * (1.0 - std::exp(-h / ld));

    // Wall attraction, gated to the upper quadrants; mostly horizontal with
    // a weaker pull-up component under the crown.
    double gate = std::clamp((z / r + 0.1) / 0.8, 0.0, 1.0);
    gate *= gate;
    if (gate > 0.0) {
      double lw = p.wall_decay_frac * r;
      double half_chord = std::sqrt(std::max(r * r - z * z, 0.0));
      double fy_wall = p.wall_amp * gate *
                       (std::exp(-(half_chord - y) / lw) - std::exp(-(half_chord + y) / lw));
      double top_dist = std::sqrt(std::max(r * r - y * y, 0.0)) - z;
      double fz_wall = 0.5 * p.wall_amp * gate * std::exp(-top_dist / lw);
      return Vec2(fy_wall, fz + fz_wall);
    }
    return Vec2(0.0, fz);
  }

  double hw = 0.5 * duct.width, hh = 0.5 * duct.height;
  double ly = p.rect_decay_frac * hw, lz = p.rect_decay_frac * hh;
  double fz = p.rect_ground_amp * std::exp(-(z + hh) / lz) +
              p.rect_ceiling_amp * std::exp(-(hh - z) / lz);
  double fy = p.rect_wall_amp * (std::exp(-(hw - y) / ly) - std::exp(-(hw + y) / ly));
  return Vec2(fy, fz);
}

ForceField synthesize_field(const DuctShape& duct, const SyntheticFieldParams& params,
                            double regime, int ny, int nz) {
  if (ny < 2 || nz < 2) throw std::invalid_argument("grid needs at least 2x2 cells");
  if (regime <= 0.0 || regime > 1.0) throw std::invalid_argument("regime must be in (0, 1]");

  double hy, hz;
  if (duct.section == DuctSection::Circular) {
    // Inscribed square, slightly inset so every cell center is strictly
    // inside; the near-wall band resolves via clamped extrapolation.
    hy = hz = 0.98 * duct.radius / std::sqrt(2.0);
  } else {
    hy = 0.98 * 0.5 * duct.width;
    hz = 0.98 * 0.5 * duct.height;
  }

  ForceField field;
  field.duct = duct;
  field.regime = regime;
  field.ny = ny;
  field.nz = nz;
  field.y0 = -hy;
  field.z0 = -hz;
  field.dy = 2.0 * hy / (ny - 1);
  field.dz = 2.0 * hz / (nz - 1);
  field.cells.resize(static_cast<size_t>(ny) * nz);

  // Disturbances are driven by rotor wash, which grows with thrust, i.e.
  // with the square of the command fraction.
  double scale = (regime / 0.5) * (regime / 0.5);
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < ny; ++iy) {
      ForceCell& c = field.cells[static_cast<size_t>(iz) * ny + iy];
      c.y = field.y0 + iy * field.dy;
      c.z = field.z0 + iz * field.dz;
      c.mean = scale * synthetic_mean(duct, params, c.y, c.z);
      double sigma = scale * params.cov_floor + params.cov_scale * c.mean.norm();
      c.cov = sigma * sigma * Mat2::Identity();
    }
  }
  return field;
}

void save_force_field(const ForceField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "y,z,fy_mean,fz_mean,cov_yy,cov_yz,cov_zz\n";
  for (const ForceCell& c : field.cells) {
    out << fmt_double(c.y) << ',' << fmt_double(c.z) << ',' << fmt_double(c.mean.x())
        << ',' << fmt_double(c.mean.y()) << ',' << fmt_double(c.cov(0, 0)) << ','
        << fmt_double(c.cov(0, 1)) << ',' << fmt_double(c.cov(1, 1)) << '\n';
  }

  std::ofstream meta(path + ".meta");
  if (!meta) throw std::runtime_error("cannot write " + path + ".meta");
  meta << "duct.section = "
       << (field.duct.section == DuctSection::Circular ? "circular" : "rectangular")
       << "\n";
  meta << "duct.radius = " << fmt_double(field.duct.radius) << "\n";
  meta << "duct.width = " << fmt_double(field.duct.width) << "\n";
  meta << "duct.height = " << fmt_double(field.duct.height) << "\n";
  meta << "duct.length = " << fmt_double(field.duct.length) << "\n";
  meta << "field.regime = " << fmt_double(field.regime) << "\n";
  meta << "grid.ny = " << field.ny << "\n";
  meta << "grid.nz = " << field.nz << "\n";
}

ForceField load_force_field(const std::string& path) {
  std::ifstream meta_in(path + ".meta");
  if (!meta_in) throw std::runtime_error("missing sidecar " + path + ".meta");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(meta_in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string_view::npos) continue;
    kv[std::string(trim(t.substr(0, eq)))] = std::string(trim(t.substr(eq + 1)));
  }

  ForceField field;
  if (kv.at("duct.section") == "circular") {
    field.duct = DuctShape::circular(parse_double(kv.at("duct.radius")),
                                     parse_double(kv.at("duct.length")));
  } else {
    field.duct = DuctShape::rectangular(parse_double(kv.at("duct.width")),
                                        parse_double(kv.at("duct.height")),
                                        parse_double(kv.at("duct.length")));
  }
  field.regime = parse_double(kv.at("field.regime"));
  field.ny = static_cast<int>(parse_double(kv.at("grid.ny")));
  field.nz = static_cast<int>(parse_double(kv.at("grid.nz")));

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::getline(in, line);
  if (trim(line) != "y,z,fy_mean,fz_mean,cov_yy,cov_yz,cov_zz") {
    throw std::runtime_error("unexpected force field header in " + path);
  }
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty()) continue;
    auto f = split(t, ',');
    if (f.size() != 7) throw std::runtime_error("bad force field row in " + path);
    ForceCell c;
    c.y = parse_double(f[0]);
    c.z = parse_double(f[1]);
    c.mean = Vec2(parse_double(f[2]), parse_double(f[3]));
    double cyy = parse_double(f[4]), cyz = parse_double(f[5]), czz = parse_double(f[6]);
    c.cov << cyy, cyz, cyz, czz;
    field.cells.push_back(c);
  }
  if (field.cells.size() != static_cast<size_t>(field.ny) * field.nz) {
    throw std::runtime_error("force field cell count does not match grid dims");
  }
  field.y0 = field.cells.front().y;
  field.z0 = field.cells.front().z;
  field.dy = field.ny > 1 ? field.cells[1].y - field.y0 : 1.0;
  field.dz = field.nz > 1 ? field.cells[field.ny].z - field.z0 : 1.0;
  return field;
}

}  // namespace ductflight
