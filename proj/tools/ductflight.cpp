// ductflight: dataset generation, training, estimator evaluation, closed-loop
// flights, altitude sweeps, force-map building and SVG plots for the duct
// hover stack. Every command is a pure function of (config, seed); rerunning
// with the same inputs rewrites identical outputs.

#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "ductflight/csv.hpp"
#include "ductflight/config.hpp"
#include "ductflight/experiments.hpp"
#include "ductflight/ioutil.hpp"
#include "ductflight/svg.hpp"

namespace df = ductflight;
namespace fs = std::filesystem;

namespace {

df::Config make_config() {
  df::Config c;
  c.define("duct.shape", std::string("c350"));
  c.define("duct.length", 1.0);

  c.define("field.enabled", 1.0);
  c.define("field.regime", 0.5);
  c.define("field.file", std::string(""));
  c.define("field.grid_ny", 16.0);
  c.define("field.grid_nz", 12.0);
  c.define("field.ground_amp", 0.6);
  c.define("field.ground_decay", 0.15);
  c.define("field.column_amp", -1.0);
  c.define("field.column_decay", 1.2);
  c.define("field.column_width", 0.5);
  c.define("field.wall_amp", 0.45);
  c.define("field.wall_decay", 0.25);
  c.define("field.rect_ground_amp", 0.5);
  c.define("field.rect_ceiling_amp", 0.4);
  c.define("field.rect_wall_amp", 0.5);
  c.define("field.rect_decay", 0.2);
  c.define("field.cov_floor", 0.004);
  c.define("field.cov_scale", 0.6);
  c.define("field.ou_tau", 0.5);

  c.define("drone.mass", 0.130);
  c.define("drone.span", 0.180);
  c.define("drone.height", 0.075);
  c.define("drone.linear_drag", 0.05);

  c.define("sensor.noise_sigma", 0.005);
  c.define("sensor.quantization", 0.001);
  c.define("sensor.rays", 37.0);
  c.define("sensor.half_angle_deg", 13.5);
  c.define("sensor.clip", 0.5);
  c.define("imu.accel_sigma", 0.05);
  c.define("imu.gyro_sigma", 0.002);
  c.define("ekf.nn_meas_sigma", 0.012);

  c.define("gains.pos_kp", 2.5);
  c.define("gains.pos_limit", 0.4);
  c.define("gains.vel_kp", 3.5);
  c.define("gains.vel_ki", 1.5);
  c.define("gains.vel_limit", 3.0);
  c.define("gains.vel_int_limit", 1.0);
  c.define("gains.velz_kp", 4.0);
  c.define("gains.velz_ki", 2.0);
  c.define("gains.velz_limit", 4.0);
  c.define("gains.velz_int_limit", 1.5);
  c.define("gains.att_kp", 10.0);
  c.define("gains.att_limit", 6.0);
  c.define("gains.rate_kp", 40.0);
  c.define("gains.rate_kd", 0.0);
  c.define("gains.rate_limit", 400.0);
  c.define("gains.max_tilt", 0.35);

  c.define("dataset.flights", 9.0);
  c.define("dataset.duration", 180.0);
  c.define("dataset.trim_head", 10.0);
  c.define("dataset.trim_tail", 5.0);
  c.define("dataset.mirror", 1.0);

  c.define("train.learning_rate", 1e-3);
  c.define("train.batch_size", 256.0);
  c.define("train.epochs", 50.0);
  c.define("train.fraction", 0.88);

  c.define("hover.altitude", 0.115);
  c.define("hover.y", 0.0);
  c.define("hover.duration", 120.0);
  c.define("hover.stats_head", 10.0);
  c.define("hover.stats_tail", 5.0);

  c.define("sweep.altitudes", std::string("0.095,0.115,0.135,0.155,0.175"));
  c.define("sweep.runs", 5.0);
  c.define("sweep.duration", 120.0);

  c.define("inout.altitude", 0.127);
  c.define("inout.duration", 120.0);

  c.define("forcemap.baseline_window", 5.0);
  c.define("forcemap.stats_window", 10.0);
  c.define("forcemap.filter_order", 4.0);
  c.define("forcemap.filter_cutoff", 1.0);
  return c;
}

df::DuctShape duct_from(const df::Config& c) {
  return df::duct_from_tag(c.text("duct.shape"), c.number("duct.length"));
}

df::DroneParams drone_from(const df::Config& c) {
  df::DroneParams d;
  d.mass = c.number("drone.mass");
  d.span = c.number("drone.span");
  d.height = c.number("drone.height");
  d.linear_drag = c.number("drone.linear_drag");
  d.max_total_thrust = 4.0 * d.mass * df::kGravity;
  return d;
}

df::SyntheticFieldParams field_params_from(const df::Config& c) {
  df::SyntheticFieldParams p;
  p.ground_amp = c.number("field.ground_amp");
  p.ground_decay_frac = c.number("field.ground_decay");
  p.column_amp = c.number("field.column_amp");
  p.column_decay_frac = c.number("field.column_decay");
  p.column_width_frac = c.number("field.column_width");
  p.wall_amp = c.number("field.wall_amp");
  p.wall_decay_frac = c.number("field.wall_decay");
  p.rect_ground_amp = c.number("field.rect_ground_amp");
  p.rect_ceiling_amp = c.number("field.rect_ceiling_amp");
  p.rect_wall_amp = c.number("field.rect_wall_amp");
  p.rect_decay_frac = c.number("field.rect_decay");
  p.cov_floor = c.number("field.cov_floor");
  p.cov_scale = c.number("field.cov_scale");
  return p;
}

// Returns the active disturbance field, or nullopt when disabled.
std::optional<df::ForceField> field_from(const df::Config& c, const df::DuctShape& duct) {
  if (c.number("field.enabled") == 0.0) return std::nullopt;
  std::string file = c.text("field.file");
  if (!file.empty()) return df::load_force_field(file);
  return df::synthesize_field(duct, field_params_from(c), c.number("field.regime"),
                              c.integer("field.grid_ny"), c.integer("field.grid_nz"));
}

df::CascadeGains gains_from(const df::Config& c) {
  df::CascadeGains g;
  g.pos.kp = c.number("gains.pos_kp");
  g.pos.out_limit = c.number("gains.pos_limit");
  g.vel.kp = c.number("gains.vel_kp");
  g.vel.ki = c.number("gains.vel_ki");
  g.vel.out_limit = c.number("gains.vel_limit");
  g.vel.int_limit = c.number("gains.vel_int_limit");
  g.vel_z.kp = c.number("gains.velz_kp");
  g.vel_z.ki = c.number("gains.velz_ki");
  g.vel_z.out_limit = c.number("gains.velz_limit");
  g.vel_z.int_limit = c.number("gains.velz_int_limit");
  g.att.kp = c.number("gains.att_kp");
  g.att.out_limit = c.number("gains.att_limit");
  g.rate.kp = c.number("gains.rate_kp");
  g.rate.kd = c.number("gains.rate_kd");
  g.rate.out_limit = c.number("gains.rate_limit");
  g.max_tilt = c.number("gains.max_tilt");
  return g;
}

df::FlightParams flight_from(const df::Config& c) {
  df::FlightParams f;
  f.tof_clip = c.number("sensor.clip");
  f.nn_meas_sigma = c.number("ekf.nn_meas_sigma");
  f.ou_tau = c.number("field.ou_tau");
  f.gains = gains_from(c);
  f.imu.accel_sigma = c.number("imu.accel_sigma");
  f.imu.gyro_sigma = c.number("imu.gyro_sigma");
  for (auto& ch : f.tof.channels) {
    ch.noise_sigma = c.number("sensor.noise_sigma");
    ch.quantization = c.number("sensor.quantization");
    ch.rays = c.integer("sensor.rays");
    ch.half_angle = df::deg2rad(c.number("sensor.half_angle_deg"));
  }
  return f;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (std::string_view item : df::split(s, ',')) {
    out.push_back(df::parse_double(df::trim(item)));
  }
  return out;
}

std::vector<std::string> flight_log_header() {
  std::vector<std::string> h{"t",     "x",     "y",      "z",      "roll",  "pitch",
                             "yaw",   "ekf_y", "ekf_z",  "ekf_vy", "ekf_vz", "nn_y",
                             "nn_z",  "geo_y", "geo_z",  "geo_valid"};
  for (int i = 0; i < 8; ++i) h.push_back("tof" + std::to_string(i));
  h.insert(h.end(), {"tof_up", "tof_down", "cmd0", "cmd1", "cmd2", "cmd3", "dist_fy",
                     "dist_fz"});
  return h;
}

void write_flight_log(const std::vector<df::FlightLogRow>& log, const std::string& path) {
  df::CsvWriter w(path, flight_log_header());
  for (const auto& r : log) {
    std::vector<double> row{r.t,
                            r.position.x(),
                            r.position.y(),
                            r.position.z(),
                            r.rpy.x(),
                            r.rpy.y(),
                            r.rpy.z(),
                            r.ekf_pos.x(),
                            r.ekf_pos.y(),
                            r.ekf_vel.x(),
                            r.ekf_vel.y(),
                            r.nn_pos.x(),
                            r.nn_pos.y(),
                            r.geo_pos.x(),
                            r.geo_pos.y(),
                            r.geo_valid};
    for (double d : r.tof) row.push_back(d);
    for (double cItem : r.cmd) row.push_back(cItem);
    row.push_back(r.disturbance.x());
    row.push_back(r.disturbance.y());
    w.row(row);
  }
  w.close();
}

void write_eval_csv(const df::EstimatorEval& ev, const std::string& path) {
  df::CsvWriter w(path, {"t", "y", "z", "nn_y", "nn_z", "geo_y", "geo_z", "geo_valid"});
  for (size_t i = 0; i < ev.t.size(); ++i) {
    w.row({ev.t[i], ev.truth_y[i], ev.truth_z[i], ev.nn_y[i], ev.nn_z[i], ev.geo_y[i],
           ev.geo_z[i], static_cast<double>(ev.geo_ok[i])});
  }
  w.close();
}

void print_eval_summary(const df::EstimatorEval& ev) {
  auto mm = [](double m) { return df::fmt_double(std::round(m * 1e4) / 10.0); };
  std::cout << "nn    median |err|  y " << mm(df::median_abs(ev.nn_err_y)) << " mm, z "
            << mm(df::median_abs(ev.nn_err_z)) << " mm  ("
            << ev.nn_err_y.size() << " frames)\n";
  std::cout << "nn    err [5,95]%   y [" << mm(df::quantile(ev.nn_err_y, 0.05)) << ", "
            << mm(df::quantile(ev.nn_err_y, 0.95)) << "] mm, z ["
            << mm(df::quantile(ev.nn_err_z, 0.05)) << ", "
            << mm(df::quantile(ev.nn_err_z, 0.95)) << "] mm\n";
  if (!ev.geo_err_y.empty()) {
    std::cout << "geo   median |err|  y " << mm(df::median_abs(ev.geo_err_y)) << " mm, z "
              << mm(df::median_abs(ev.geo_err_z)) << " mm  (" << ev.geo_err_y.size()
              << " frames, " << ev.geo_invalid << " invalid)\n";
    std::cout << "geo   err [5,95]%   y [" << mm(df::quantile(ev.geo_err_y, 0.05)) << ", "
              << mm(df::quantile(ev.geo_err_y, 0.95)) << "] mm, z ["
              << mm(df::quantile(ev.geo_err_z, 0.05)) << ", "
              << mm(df::quantile(ev.geo_err_z, 0.95)) << "] mm\n";
  }
}

void print_hover_summary(const char* name, const df::HoverOutcome& o) {
  auto mm = [](double m) { return df::fmt_double(std::round(m * 1e4) / 10.0); };
  std::cout << name << ": " << (o.collided ? "COLLIDED" : "ok") << ", y med " << mm(o.y_med)
            << " mm iqr " << mm(o.y_iqr) << " mm, z med " << mm(o.z_med) << " mm iqr "
            << mm(o.z_iqr) << " mm, |dev| p95 y " << mm(o.y_dev_p95) << " z "
            << mm(o.z_dev_p95) << " mm (" << o.samples << " samples)\n";
}

// Bench record filenames carry the mount point: y<mm>_z<mm>.csv, e.g.
// "y-40_z120.csv".
bool parse_position_name(const std::string& stem, double* y, double* z) {
  if (stem.empty() || stem[0] != 'y') return false;
  std::size_t zpos = stem.find("_z");
  if (zpos == std::string::npos) return false;
  try {
    *y = df::parse_double(stem.substr(1, zpos - 1)) / 1000.0;
    *z = df::parse_double(stem.substr(zpos + 2)) / 1000.0;
  } catch (const std::runtime_error&) {
    return false;
  }
  return true;
}

df::RawForceRecord load_raw_record(const std::string& path, double sample_rate) {
  df::CsvTable t = df::read_csv(path);
  std::vector<std::string> expect{"t", "fx", "fy", "fz", "tx", "ty", "tz"};
  if (t.header != expect) throw std::runtime_error("unexpected raw-record columns in " + path);
  df::RawForceRecord r;
  r.sample_rate = sample_rate;
  for (const auto& row : t.rows) {
    r.t.push_back(row[0]);
    r.fx.push_back(row[1]);
    r.fy.push_back(row[2]);
    r.fz.push_back(row[3]);
    r.tx.push_back(row[4]);
    r.ty.push_back(row[5]);
    r.tz.push_back(row[6]);
  }
  return r;
}

int run(int argc, char** argv) {
  CLI::App app{"duct hover simulation and estimation toolkit"};
  app.require_subcommand(0, 1);

  std::string config_path, out_path;
  uint64_t seed = 1;
  bool print_config = false;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--seed", seed, "base random seed (default 1)");
  app.add_option("--out", out_path, "output path or prefix");
  app.add_flag("--print-config", print_config, "print the effective config and exit");

  auto* cmd_gen = app.add_subcommand("gen-dataset", "fly excitation flights, write a dataset");
  auto* cmd_train = app.add_subcommand("train", "train the localizer network on a dataset");
  auto* cmd_eval = app.add_subcommand("eval", "evaluate both localizers against a dataset");
  auto* cmd_hover = app.add_subcommand("hover", "closed-loop full-stack hover flight");
  auto* cmd_sweep = app.add_subcommand("sweep", "hover repeatedly across altitudes");
  auto* cmd_map = app.add_subcommand("forcemap", "build or synthesize a disturbance map");
  auto* cmd_inout = app.add_subcommand("inout", "same hover with the field on and off");
  auto* cmd_plot = app.add_subcommand("plot", "render an SVG from a result CSV");

  std::string data_path, model_path, raw_dir, plot_kind, plot_in, plot_axis = "y";
  cmd_train->add_option("--data", data_path, "dataset CSV")->required();
  cmd_eval->add_option("--data", data_path, "dataset CSV")->required();
  cmd_eval->add_option("--model", model_path, "model file")->required();
  cmd_hover->add_option("--model", model_path, "model file")->required();
  cmd_sweep->add_option("--model", model_path, "model file")->required();
  cmd_inout->add_option("--model", model_path, "model file")->required();
  cmd_map->add_option("--raw", raw_dir, "directory of bench records (else synthesize)");
  cmd_plot->add_option("--kind", plot_kind, "forcemap | boxes | sweep | scatter")->required();
  cmd_plot->add_option("--in", plot_in, "input CSV (or force-map CSV)")->required();
  cmd_plot->add_option("--axis", plot_axis, "scatter axis: y | z");

  CLI11_PARSE(app, argc, argv);

  df::Config cfg = make_config();
  if (!config_path.empty()) cfg.load_file(config_path);
  if (print_config) {
    std::cout << cfg.print();
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 1;
  }

  df::Rng rng(seed);
  df::DuctShape duct = duct_from(cfg);
  df::DroneParams drone = drone_from(cfg);
  df::FlightParams flight = flight_from(cfg);

  if (cmd_gen->parsed()) {
    if (out_path.empty()) throw std::runtime_error("gen-dataset needs --out");
    auto field = field_from(cfg, duct);
    df::DatasetConfig dc;
    dc.flights = cfg.integer("dataset.flights");
    dc.flight_duration = cfg.number("dataset.duration");
    dc.trim_head = cfg.number("dataset.trim_head");
    dc.trim_tail = cfg.number("dataset.trim_tail");
    dc.mirror = cfg.number("dataset.mirror") != 0.0;
    df::Dataset ds =
        df::collect_dataset(duct, field ? &*field : nullptr, drone, flight, dc, &rng);
    ds.save(out_path);
    std::cout << "wrote " << ds.size() << " rows (" << (dc.mirror ? "mirrored" : "raw")
              << ") for duct " << ds.duct_tag << " to " << out_path << "\n";
    return 0;
  }

  if (cmd_train->parsed()) {
    if (out_path.empty()) throw std::runtime_error("train needs --out");
    df::Dataset ds = df::Dataset::load(data_path);
    Eigen::MatrixXd x, y;
    ds.to_matrices(&x, &y);
    df::TrainConfig tc;
    tc.learning_rate = cfg.number("train.learning_rate");
    tc.batch_size = cfg.integer("train.batch_size");
    tc.epochs = cfg.integer("train.epochs");
    tc.train_fraction = cfg.number("train.fraction");
    tc.seed = seed;
    df::TrainResult tr = df::train_mlp(x, y, tc, ds.duct_tag);
    tr.model.save(out_path);
    df::CsvWriter report(out_path + ".report.csv", {"epoch", "train_mse", "test_mse"});
    for (size_t e = 0; e < tr.report.train_mse.size(); ++e) {
      report.row({static_cast<double>(e + 1), tr.report.train_mse[e], tr.report.test_mse[e]});
      std::cout << "epoch " << e + 1 << "  train " << tr.report.train_mse[e] << "  test "
                << tr.report.test_mse[e] << "\n";
    }
    report.close();
    std::cout << "saved model (" << tr.model.parameter_count() << " parameters) to "
              << out_path << "\n";
    return 0;
  }

  if (cmd_eval->parsed()) {
    df::Dataset ds = df::Dataset::load(data_path);
    df::MlpModel model = df::MlpModel::load(model_path);
    if (!model.duct_tag.empty() && !ds.duct_tag.empty() && model.duct_tag != ds.duct_tag) {
      std::cerr << "warning: model trained on " << model.duct_tag << " but data is from "
                << ds.duct_tag << " (cross-duct evaluation)\n";
    }
    df::EstimatorEval ev = df::evaluate_estimators(ds, model);
    if (!out_path.empty()) write_eval_csv(ev, out_path);
    print_eval_summary(ev);
    return 0;
  }

  if (cmd_hover->parsed()) {
    auto field = field_from(cfg, duct);
    df::MlpModel model = df::MlpModel::load(model_path);
    flight.mode = df::EstimatorMode::FullStack;
    df::HoverConfig hc;
    hc.altitude = cfg.number("hover.altitude");
    hc.y = cfg.number("hover.y");
    hc.duration = cfg.number("hover.duration");
    hc.stats_head = cfg.number("hover.stats_head");
    hc.stats_tail = cfg.number("hover.stats_tail");
    df::HoverOutcome o =
        df::run_hover(duct, field ? &*field : nullptr, drone, flight, hc, &model, &rng);
    if (!out_path.empty()) write_flight_log(o.log, out_path);
    print_hover_summary("hover", o);
    return o.collided ? 2 : 0;
  }

  if (cmd_sweep->parsed()) {
    auto field = field_from(cfg, duct);
    df::MlpModel model = df::MlpModel::load(model_path);
    flight.mode = df::EstimatorMode::FullStack;
    df::HoverConfig hc;
    hc.y = cfg.number("hover.y");
    hc.duration = cfg.number("sweep.duration");
    hc.stats_head = cfg.number("hover.stats_head");
    hc.stats_tail = cfg.number("hover.stats_tail");
    std::vector<double> alts = parse_list(cfg.text("sweep.altitudes"));
    int runs = cfg.integer("sweep.runs");
    auto rows = df::sweep_altitudes(duct, field ? &*field : nullptr, drone, flight, hc, alts,
                                    runs, &model, rng);
    std::optional<df::CsvWriter> w;
    if (!out_path.empty()) {
      w.emplace(out_path, std::vector<std::string>{
                              "altitude", "runs", "collisions", "y_med", "y_q25", "y_q75",
                              "y_iqr", "y_p05", "y_p95", "z_med", "z_q25", "z_q75", "z_iqr",
                              "z_p05", "z_p95"});
    }
    auto mm = [](double m) { return df::fmt_double(std::round(m * 1e4) / 10.0); };
    for (const auto& r : rows) {
      if (w) {
        w->row({r.altitude, static_cast<double>(r.runs), static_cast<double>(r.collisions),
                r.y_med, r.y_q25, r.y_q75, r.y_iqr, r.y_p05, r.y_p95, r.z_med, r.z_q25,
                r.z_q75, r.z_iqr, r.z_p05, r.z_p95});
      }
      std::cout << "alt " << df::fmt_double(r.altitude) << " m: lateral iqr " << mm(r.y_iqr)
                << " mm, vertical iqr " << mm(r.z_iqr) << " mm, collisions " << r.collisions
                << "/" << r.runs << "\n";
    }
    if (w) w->close();
    return 0;
  }

  if (cmd_map->parsed()) {
    if (out_path.empty()) throw std::runtime_error("forcemap needs --out");
    df::ForceField field;
    if (raw_dir.empty()) {
      field = df::synthesize_field(duct, field_params_from(cfg), cfg.number("field.regime"),
                                   cfg.integer("field.grid_ny"), cfg.integer("field.grid_nz"));
      std::cout << "synthesized ";
    } else {
      std::vector<df::Vec2> positions;
      std::vector<std::string> files;
      for (const auto& entry : fs::directory_iterator(raw_dir)) {
        if (entry.path().extension() != ".csv") continue;
        double y = 0.0, z = 0.0;
        if (!parse_position_name(entry.path().stem().string(), &y, &z)) continue;
        positions.emplace_back(y, z);
        files.push_back(entry.path().string());
      }
      df::GridBuildConfig gc;
      gc.baseline_window = cfg.number("forcemap.baseline_window");
      gc.stats_window = cfg.number("forcemap.stats_window");
      gc.filter_order = cfg.integer("forcemap.filter_order");
      gc.filter_cutoff = cfg.number("forcemap.filter_cutoff");
      field = df::build_grid(
          duct, positions, [&](size_t i) { return load_raw_record(files[i], 7000.0); }, gc,
          cfg.number("field.regime"));
      std::cout << "built ";
    }
    df::save_force_field(field, out_path);
    plot_force_field(field, out_path + ".svg");
    std::cout << field.ny << "x" << field.nz << " force map for " << df::duct_tag(duct)
              << " -> " << out_path << " (+.svg)\n";
    return 0;
  }

  if (cmd_inout->parsed()) {
    if (out_path.empty()) throw std::runtime_error("inout needs --out (prefix)");
    auto field = field_from(cfg, duct);
    if (!field) throw std::runtime_error("inout needs field.enabled = 1");
    df::MlpModel model = df::MlpModel::load(model_path);
    flight.mode = df::EstimatorMode::FullStack;
    df::HoverConfig hc;
    hc.altitude = cfg.number("inout.altitude");
    hc.duration = cfg.number("inout.duration");
    hc.stats_head = cfg.number("hover.stats_head");
    hc.stats_tail = cfg.number("hover.stats_tail");
    df::Rng rng_in(seed), rng_out(seed);
    df::HoverOutcome in = df::run_hover(duct, &*field, drone, flight, hc, &model, &rng_in);
    df::HoverOutcome out = df::run_hover(duct, nullptr, drone, flight, hc, &model, &rng_out);
    write_flight_log(in.log, out_path + "_inside.csv");
    write_flight_log(out.log, out_path + "_outside.csv");
    print_hover_summary("field on ", in);
    print_hover_summary("field off", out);
    return (in.collided || out.collided) ? 2 : 0;
  }

  if (cmd_plot->parsed()) {
    if (out_path.empty()) throw std::runtime_error("plot needs --out");
    if (plot_kind == "forcemap") {
      plot_force_field(df::load_force_field(plot_in), out_path);
    } else if (plot_kind == "boxes") {
      df::CsvTable t = df::read_csv(plot_in);
      int iy = t.column("y"), iz = t.column("z");
      int iny = t.column("nn_y"), inz = t.column("nn_z");
      int igy = t.column("geo_y"), igz = t.column("geo_z"), iok = t.column("geo_valid");
      if (iy < 0 || iny < 0) throw std::runtime_error("not an eval CSV: " + plot_in);
      df::BoxSeries nn_y{"nn |y err|", {}}, nn_z{"nn |z err|", {}};
      df::BoxSeries geo_y{"geo |y err|", {}}, geo_z{"geo |z err|", {}};
      for (const auto& r : t.rows) {
        nn_y.values.push_back(std::abs(r[iny] - r[iy]));
        nn_z.values.push_back(std::abs(r[inz] - r[iz]));
        if (iok >= 0 && r[iok] != 0.0) {
          geo_y.values.push_back(std::abs(r[igy] - r[iy]));
          geo_z.values.push_back(std::abs(r[igz] - r[iz]));
        }
      }
      std::vector<df::BoxSeries> series{nn_y, nn_z};
      if (!geo_y.values.empty()) {
        series.push_back(geo_y);
        series.push_back(geo_z);
      }
      df::plot_boxes(series, "absolute error [m]", "localizer errors", out_path);
    } else if (plot_kind == "sweep") {
      df::CsvTable t = df::read_csv(plot_in);
      int ia = t.column("altitude"), i25 = t.column("y_q25"), i50 = t.column("y_med"),
          i75 = t.column("y_q75");
      if (ia < 0 || i25 < 0) throw std::runtime_error("not a sweep CSV: " + plot_in);
      std::vector<df::SweepRow> rows;
      for (const auto& r : t.rows) {
        rows.push_back({r[ia], r[i25], r[i50], r[i75]});
      }
      df::plot_sweep(rows, "lateral position [m]", "hover spread vs altitude", out_path);
    } else if (plot_kind == "scatter") {
      df::CsvTable t = df::read_csv(plot_in);
      int it = t.column(plot_axis), ip = t.column("nn_" + plot_axis);
      if (it < 0 || ip < 0) throw std::runtime_error("not an eval CSV: " + plot_in);
      std::vector<double> truth, pred;
      for (const auto& r : t.rows) {
        truth.push_back(r[it]);
        pred.push_back(r[ip]);
      }
      df::plot_scatter(truth, pred, plot_axis + " [m]", "network output vs truth", out_path);
    } else {
      throw std::runtime_error("unknown plot kind: " + plot_kind);
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
