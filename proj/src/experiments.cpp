#include "ductflight/experiments.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "ductflight/geometric.hpp"
#include "ductflight/ioutil.hpp"

namespace ductflight {

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  size_t workers = std::max<size_t>(1, std::min<size_t>(std::thread::hardware_concurrency(), n));
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

HoverOutcome run_hover(const DuctShape& duct, const ForceField* field,
                       const DroneParams& drone, const FlightParams& flight,
                       const HoverConfig& hover, const MlpModel* model, Rng* rng) {
  FlightParams fp = flight;
  Vec3 target(0.5 * duct.length, hover.y, hover.altitude - duct.half_height());
  fp.start_position = target;
  fp.duration = hover.duration;

  FlightResult res =
      run_flight(duct, field, drone, fp, [&](double) { return target; }, model, rng);

  HoverOutcome out;
  out.collided = res.collided;
  double t_lo = hover.stats_head;
  double t_hi = hover.duration - hover.stats_tail;
  std::vector<double> ys, zs, ydev, zdev;
  for (const FlightLogRow& row : res.log) {
    if (row.t < t_lo || row.t > t_hi) continue;
    ys.push_back(row.position.y());
    zs.push_back(row.position.z());
    ydev.push_back(std::abs(row.position.y() - target.y()));
    zdev.push_back(std::abs(row.position.z() - target.z()));
  }
  out.samples = ys.size();
  if (!ys.empty()) {
    out.y_med = median(ys);
    out.y_iqr = iqr(ys);
    out.y_p05 = quantile(ys, 0.05);
    out.y_p95 = quantile(ys, 0.95);
    out.z_med = median(zs);
    out.z_iqr = iqr(zs);
    out.z_p05 = quantile(zs, 0.05);
    out.z_p95 = quantile(zs, 0.95);
    out.y_dev_p95 = quantile(ydev, 0.95);
    out.z_dev_p95 = quantile(zdev, 0.95);
  }
  out.log = std::move(res.log);
  return out;
}

std::vector<AltitudeSweepRow> sweep_altitudes(const DuctShape& duct, const ForceField* field,
                                              const DroneParams& drone,
                                              const FlightParams& flight,
                                              const HoverConfig& hover,
                                              const std::vector<double>& altitudes, int runs,
                                              const MlpModel* model, const Rng& base_rng) {
  size_t total = altitudes.size() * static_cast<size_t>(runs);
  std::vector<HoverOutcome> outcomes(total);
  parallel_for(total, [&](size_t i) {
    size_t alt_idx = i / static_cast<size_t>(runs);
    HoverConfig hc = hover;
    hc.altitude = altitudes[alt_idx];
    Rng run_rng = base_rng.fork(i);
    outcomes[i] = run_hover(duct, field, drone, flight, hc, model, &run_rng);
  });

  std::vector<AltitudeSweepRow> rows;
  for (size_t a = 0; a < altitudes.size(); ++a) {
    AltitudeSweepRow row;
    row.altitude = altitudes[a];
    row.runs = runs;
    std::vector<double> ys, zs;
    for (int r = 0; r < runs; ++r) {
      const HoverOutcome& o = outcomes[a * static_cast<size_t>(runs) + static_cast<size_t>(r)];
      if (o.collided) {
        ++row.collisions;
        continue;
      }
      for (const FlightLogRow& lr : o.log) {
        if (lr.t < hover.stats_head || lr.t > hover.duration - hover.stats_tail) continue;
        ys.push_back(lr.position.y());
        zs.push_back(lr.position.z());
      }
    }
    if (!ys.empty()) {
      row.y_med = median(ys);
      row.y_q25 = quantile(ys, 0.25);
      row.y_q75 = quantile(ys, 0.75);
      row.y_iqr = row.y_q75 - row.y_q25;
      row.y_p05 = quantile(ys, 0.05);
      row.y_p95 = quantile(ys, 0.95);
      row.z_med = median(zs);
      row.z_q25 = quantile(zs, 0.25);
      row.z_q75 = quantile(zs, 0.75);
      row.z_iqr = row.z_q75 - row.z_q25;
      row.z_p05 = quantile(zs, 0.05);
      row.z_p95 = quantile(zs, 0.95);
    }
    rows.push_back(row);
  }
  return rows;
}

EstimatorEval evaluate_estimators(const Dataset& ds, const MlpModel& model,
                                  const std::vector<size_t>* subset) {
  TofArrayConfig cfg = TofArrayConfig::standard();
  double radius = 0.0;  // geometric path is defined for circular ducts only
  bool circular = !ds.duct_tag.empty() && ds.duct_tag[0] == 'c';
  if (circular) {
    radius = 0.0005 * parse_double(ds.duct_tag.substr(1));  // tag is the diameter in mm
  }

  EstimatorEval ev;
  size_t n = subset ? subset->size() : ds.size();
  for (size_t k = 0; k < n; ++k) {
    size_t i = subset ? (*subset)[k] : k;
    ev.t.push_back(ds.frames[i].t);
    ev.truth_y.push_back(ds.labels[i].x());
    ev.truth_z.push_back(ds.labels[i].y());
    Vec2 nn = model.forward(nn_input(ds.frames[i]));
    ev.nn_y.push_back(nn.x());
    ev.nn_z.push_back(nn.y());
    ev.nn_err_y.push_back(nn.x() - ds.labels[i].x());
    ev.nn_err_z.push_back(nn.y() - ds.labels[i].y());

    bool ok = false;
    Vec2 geo = Vec2::Zero();
    if (circular) {
      try {
        GeometricEstimate ge = geometric_from_frame(ds.frames[i], cfg, radius);
        if (!ge.suspect) {
          ok = true;
          geo = ge.position;
        }
      } catch (const std::runtime_error&) {
      }
    }
    ev.geo_y.push_back(geo.x());
    ev.geo_z.push_back(geo.y());
    ev.geo_ok.push_back(ok ? 1 : 0);
    if (ok) {
      ev.geo_err_y.push_back(geo.x() - ds.labels[i].x());
      ev.geo_err_z.push_back(geo.y() - ds.labels[i].y());
    } else {
      ++ev.geo_invalid;
    }
  }
  return ev;
}

}  // namespace ductflight
