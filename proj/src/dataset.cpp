#include "ductflight/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ductflight/csv.hpp"
#include "ductflight/ioutil.hpp"

namespace ductflight {

void Dataset::to_matrices(Eigen::MatrixXd* x, Eigen::MatrixXd* y) const {
  x->resize(static_cast<Eigen::Index>(size()), MlpModel::kIn);
  y->resize(static_cast<Eigen::Index>(size()), MlpModel::kOut);
  for (size_t i = 0; i < size(); ++i) {
    x->row(static_cast<Eigen::Index>(i)) = nn_input(frames[i]).transpose();
    y->row(static_cast<Eigen::Index>(i)) = labels[i].transpose();
  }
}

namespace {

std::vector<std::string> dataset_header() {
  std::vector<std::string> h{"t"};
  for (int i = 0; i < 8; ++i) h.push_back("tof" + std::to_string(i));
  h.insert(h.end(), {"tof_up", "tof_down", "y", "z", "vy", "vz", "roll", "pitch", "x"});
  return h;
}

}  // namespace

void Dataset::save(const std::string& path) const {
  CsvWriter w(path, dataset_header());
  for (size_t i = 0; i < size(); ++i) {
    const TofFrame& f = frames[i];
    std::vector<double> row{f.t};
    for (int c = 0; c < 10; ++c) row.push_back(f.distances[static_cast<size_t>(c)]);
    row.insert(row.end(),
               {labels[i].x(), labels[i].y(), f.vy, f.vz, f.roll, f.pitch, x_pos[i]});
    w.row(row);
  }
  w.close();
  std::ofstream meta(path + ".meta");
  if (!meta) throw std::runtime_error("cannot write sidecar for " + path);
  meta << "duct_tag = " << (duct_tag.empty() ? "-" : duct_tag) << '\n';
  meta << "rows = " << size() << '\n';
}

Dataset Dataset::load(const std::string& path) {
  CsvTable table = read_csv(path);
  std::vector<std::string> expect = dataset_header();
  if (table.header != expect) throw std::invalid_argument("unexpected dataset columns in " + path);
  Dataset ds;
  ds.frames.reserve(table.rows.size());
  ds.labels.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    TofFrame f;
    f.t = r[0];
    for (int c = 0; c < 10; ++c) f.distances[static_cast<size_t>(c)] = r[static_cast<size_t>(1 + c)];
    ds.labels.emplace_back(r[11], r[12]);
    f.vy = r[13];
    f.vz = r[14];
    f.roll = r[15];
    f.pitch = r[16];
    ds.x_pos.push_back(r[17]);
    ds.frames.push_back(f);
  }
  std::ifstream meta(path + ".meta");
  if (meta) {
    std::string line;
    while (std::getline(meta, line)) {
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string_view view = line;
      std::string_view key = trim(view.substr(0, eq));
      std::string_view val = trim(view.substr(eq + 1));
      if (key == "duct_tag" && val != "-") ds.duct_tag = std::string(val);
    }
  }
  return ds;
}

std::string duct_tag(const DuctShape& duct) {
  auto mm = [](double meters) { return std::to_string(static_cast<int>(std::lround(meters * 1000.0))); };
  if (duct.section == DuctSection::Circular) return "c" + mm(2.0 * duct.radius);
  return "r" + mm(duct.width) + "x" + mm(duct.height);
}

DuctShape duct_from_tag(const std::string& tag, double length) {
  if (tag.size() >= 2 && tag[0] == 'c') {
    double diameter_mm = parse_double(tag.substr(1));
    return DuctShape::circular(0.0005 * diameter_mm, length);
  }
  if (tag.size() >= 4 && tag[0] == 'r') {
    std::size_t x = tag.find('x');
    if (x != std::string::npos && x > 1 && x + 1 < tag.size()) {
      double w_mm = parse_double(std::string_view(tag).substr(1, x - 1));
      double h_mm = parse_double(std::string_view(tag).substr(x + 1));
      return DuctShape::rectangular(w_mm / 1000.0, h_mm / 1000.0, length);
    }
  }
  throw std::invalid_argument("malformed duct tag: '" + tag + "' (expect c<mm> or r<mm>x<mm>)");
}

Dataset collect_dataset(const DuctShape& duct, const ForceField* field,
                        const DroneParams& drone, const FlightParams& flight,
                        const DatasetConfig& cfg, Rng* rng) {
  Dataset ds;
  ds.duct_tag = duct_tag(duct);
  int kept = 0;
  for (int fl = 0; fl < cfg.flights; ++fl) {
    Rng flight_rng = rng->fork(static_cast<uint64_t>(fl));
    FlightParams fp = flight;
    fp.duration = cfg.flight_duration;
    fp.mode = EstimatorMode::Truth;
    fp.start_position = Vec3(0.5 * duct.length, 0.0, -0.2 * duct.half_height());

    auto wps = excitation_waypoints(duct, fp.start_position.x(), cfg.flight_duration,
                                    &flight_rng);
    WaypointSchedule schedule(wps, fp.start_position, 0.15);
    FlightResult res = run_flight(
        duct, field, drone, fp, [&](double t) { return schedule.at(t); }, nullptr,
        &flight_rng);
    if (res.collided) continue;
    ++kept;

    double t_lo = cfg.trim_head;
    double t_hi = cfg.flight_duration - cfg.trim_tail;
    for (const FlightLogRow& row : res.log) {
      if (row.t < t_lo || row.t > t_hi) continue;
      // In truth mode the estimator columns hold the exact state the frame
      // was sensed with, so the sample can be rebuilt from the log alone.
      TofFrame f;
      f.t = row.t;
      f.distances = row.tof;
      f.vy = row.ekf_vel.x();
      f.vz = row.ekf_vel.y();
      f.roll = row.rpy.x();
      f.pitch = row.rpy.y();
      ds.frames.push_back(f);
      ds.labels.emplace_back(row.position.y(), row.position.z());
      ds.x_pos.push_back(row.position.x());
    }
  }
  if (kept == 0) throw std::runtime_error("every data-collection flight collided");

  if (cfg.mirror) {
    size_t n = ds.size();
    ds.frames.reserve(2 * n);
    ds.labels.reserve(2 * n);
    for (size_t i = 0; i < n; ++i) {
      TofFrame f = ds.frames[i];
      double y = ds.labels[i].x();
      augment_mirror(&f, &y);
      ds.frames.push_back(f);
      ds.labels.emplace_back(y, ds.labels[i].y());
      ds.x_pos.push_back(ds.x_pos[i]);
    }
  }
  return ds;
}

}  // namespace ductflight
