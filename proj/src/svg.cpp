#include "ductflight/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ductflight/ioutil.hpp"
#include "ductflight/stats.hpp"

namespace ductflight {

namespace {
std::string num(double v) {
  // Two decimals is plenty for pixel coordinates.
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}
}  // namespace

SvgPlot::SvgPlot(double width_px, double height_px, double x_min, double x_max, double y_min,
                 double y_max)
    : w_(width_px), h_(height_px), x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {}

double SvgPlot::px(double x) const {
  return margin_ + (x - x_min_) / (x_max_ - x_min_) * (w_ - 2 * margin_);
}

double SvgPlot::py(double y) const {
  return h_ - margin_ - (y - y_min_) / (y_max_ - y_min_) * (h_ - 2 * margin_);
}

void SvgPlot::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                   double width) {
  body_ << "<line x1='" << num(px(x1)) << "' y1='" << num(py(y1)) << "' x2='" << num(px(x2))
        << "' y2='" << num(py(y2)) << "' stroke='" << stroke << "' stroke-width='" << width
        << "'/>\n";
}

void SvgPlot::circle(double x, double y, double r_px, const std::string& fill,
                     const std::string& stroke) {
  body_ << "<circle cx='" << num(px(x)) << "' cy='" << num(py(y)) << "' r='" << num(r_px)
        << "' fill='" << fill << "' stroke='" << stroke << "'/>\n";
}

void SvgPlot::ellipse(double x, double y, double rx, double ry, double angle_deg,
                      const std::string& stroke) {
  double sx = (w_ - 2 * margin_) / (x_max_ - x_min_);
  double sy = (h_ - 2 * margin_) / (y_max_ - y_min_);
  body_ << "<ellipse cx='0' cy='0' rx='" << num(rx * sx) << "' ry='" << num(ry * sy)
        << "' fill='none' stroke='" << stroke << "' transform='translate(" << num(px(x)) << ","
        << num(py(y)) << ") rotate(" << num(-angle_deg) << ")'/>\n";
}

void SvgPlot::rect(double x, double y, double w, double h, const std::string& fill,
                   const std::string& stroke) {
  double x0 = px(x), y0 = py(y + h);
  double wpx = px(x + w) - x0, hpx = py(y) - y0;
  body_ << "<rect x='" << num(x0) << "' y='" << num(y0) << "' width='" << num(wpx)
        << "' height='" << num(hpx) << "' fill='" << fill << "' stroke='" << stroke << "'/>\n";
}

void SvgPlot::polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::string& stroke, double width) {
  body_ << "<polyline fill='none' stroke='" << stroke << "' stroke-width='" << width
        << "' points='";
  for (size_t i = 0; i < xs.size(); ++i) {
    body_ << num(px(xs[i])) << ',' << num(py(ys[i])) << ' ';
  }
  body_ << "'/>\n";
}

void SvgPlot::text(double x, double y, const std::string& s, double size_px,
                   const std::string& anchor) {
  body_ << "<text x='" << num(px(x)) << "' y='" << num(py(y)) << "' font-size='" << size_px
        << "' font-family='sans-serif' text-anchor='" << anchor << "'>" << s << "</text>\n";
}

void SvgPlot::arrow(double x1, double y1, double x2, double y2, const std::string& stroke) {
  line(x1, y1, x2, y2, stroke, 1.2);
  // Head: two short strokes at 25 degrees off the shaft, in pixel space.
  double ax = px(x2) - px(x1), ay = py(y2) - py(y1);
  double len = std::hypot(ax, ay);
  if (len < 1e-9) return;
  ax /= len;
  ay /= len;
  double hx = px(x2), hy = py(y2);
  double c = std::cos(deg2rad(25.0)), s = std::sin(deg2rad(25.0));
  double head = std::min(6.0, 0.4 * len);
  for (int sign : {-1, 1}) {
    double dx = -(c * ax - sign * s * ay) * head;
    double dy = -(sign * s * ax + c * ay) * head;
    body_ << "<line x1='" << num(hx) << "' y1='" << num(hy) << "' x2='" << num(hx + dx)
          << "' y2='" << num(hy + dy) << "' stroke='" << stroke << "' stroke-width='1.2'/>\n";
  }
}

void SvgPlot::axes(const std::string& x_label, const std::string& y_label, int x_ticks,
                   int y_ticks) {
  body_ << "<rect x='" << num(margin_) << "' y='" << num(margin_) << "' width='"
        << num(w_ - 2 * margin_) << "' height='" << num(h_ - 2 * margin_)
        << "' fill='none' stroke='#333'/>\n";
  for (int i = 0; i <= x_ticks; ++i) {
    double x = x_min_ + (x_max_ - x_min_) * i / x_ticks;
    double xp = px(x);
    body_ << "<line x1='" << num(xp) << "' y1='" << num(h_ - margin_) << "' x2='" << num(xp)
          << "' y2='" << num(h_ - margin_ + 4) << "' stroke='#333'/>\n";
    body_ << "<text x='" << num(xp) << "' y='" << num(h_ - margin_ + 16)
          << "' font-size='10' font-family='sans-serif' text-anchor='middle'>"
          << fmt_double(std::round(x * 1e4) / 1e4) << "</text>\n";
  }
  for (int i = 0; i <= y_ticks; ++i) {
    double y = y_min_ + (y_max_ - y_min_) * i / y_ticks;
    double yp = py(y);
    body_ << "<line x1='" << num(margin_ - 4) << "' y1='" << num(yp) << "' x2='" << num(margin_)
          << "' y2='" << num(yp) << "' stroke='#333'/>\n";
    body_ << "<text x='" << num(margin_ - 7) << "' y='" << num(yp + 3)
          << "' font-size='10' font-family='sans-serif' text-anchor='end'>"
          << fmt_double(std::round(y * 1e4) / 1e4) << "</text>\n";
  }
  body_ << "<text x='" << num(w_ / 2) << "' y='" << num(h_ - 10)
        << "' font-size='12' font-family='sans-serif' text-anchor='middle'>" << x_label
        << "</text>\n";
  body_ << "<text x='14' y='" << num(h_ / 2)
        << "' font-size='12' font-family='sans-serif' text-anchor='middle' transform='rotate(-90 "
        << "14 " << num(h_ / 2) << ")'>" << y_label << "</text>\n";
}

void SvgPlot::title(const std::string& s) {
  body_ << "<text x='" << num(w_ / 2)
        << "' y='24' font-size='14' font-family='sans-serif' text-anchor='middle'>" << s
        << "</text>\n";
}

void SvgPlot::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write svg: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w_ << "' height='" << h_
      << "' viewBox='0 0 " << w_ << ' ' << h_ << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << body_.str() << "</svg>\n";
}

void plot_force_field(const ForceField& field, const std::string& path) {
  double hw = field.duct.half_width();
  double hh = field.duct.half_height();
  double pad_x = 0.15 * hw, pad_y = 0.15 * hh;
  SvgPlot plot(640, 640 * (hh + pad_y) / (hw + pad_x), -hw - pad_x, hw + pad_x, -hh - pad_y,
               hh + pad_y);

  if (field.duct.section == DuctSection::Circular) {
    plot.ellipse(0.0, 0.0, field.duct.radius, field.duct.radius, 0.0, "#333");
  } else {
    plot.rect(-hw, -hh, 2 * hw, 2 * hh, "none", "#333");
  }

  // Scale arrows so the largest mean force spans about one cell pitch.
  double fmax = 1e-12;
  for (const ForceCell& c : field.cells) fmax = std::max(fmax, c.mean.norm());
  double arrow_scale = 1.2 * std::max(field.dy, field.dz) / fmax;

  for (const ForceCell& c : field.cells) {
    Eigen::SelfAdjointEigenSolver<Mat2> eig(c.cov);
    Vec2 ev = eig.eigenvalues().cwiseMax(0.0);
    Vec2 axis = eig.eigenvectors().col(1);
    double angle = std::atan2(axis.y(), axis.x()) * 180.0 / kPi;
    plot.ellipse(c.y, c.z, std::sqrt(ev.y()) * arrow_scale, std::sqrt(ev.x()) * arrow_scale,
                 angle, "#b8cbe8");
    plot.arrow(c.y, c.z, c.y + c.mean.x() * arrow_scale, c.z + c.mean.y() * arrow_scale,
               "#c0392b");
    plot.circle(c.y, c.z, 1.5, "#444");
  }
  plot.axes("y [m]", "z [m]");
  plot.title("mean disturbance force, 1 sigma ellipses (regime " + fmt_double(field.regime) +
             ")");
  plot.save(path);
}

void plot_boxes(const std::vector<BoxSeries>& series, const std::string& y_label,
                const std::string& plot_title, const std::string& path) {
  if (series.empty()) throw std::invalid_argument("no box series");
  double y_max = 0.0;
  for (const auto& s : series) {
    y_max = std::max(y_max, quantile(s.values, 0.95));
  }
  y_max *= 1.15;
  SvgPlot plot(120.0 + 110.0 * series.size(), 420, -0.6,
               static_cast<double>(series.size()) - 0.4, 0.0, y_max);
  for (size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    double x = static_cast<double>(i);
    double q05 = quantile(s.values, 0.05), q25 = quantile(s.values, 0.25);
    double q50 = median(s.values);
    double q75 = quantile(s.values, 0.75), q95 = quantile(s.values, 0.95);
    plot.line(x, q05, x, q25, "#333");
    plot.line(x, q75, x, q95, "#333");
    plot.rect(x - 0.18, q25, 0.36, q75 - q25, "#d6e4f7", "#333");
    plot.line(x - 0.18, q50, x + 0.18, q50, "#c0392b", 2.0);
    plot.text(x, -0.06 * y_max, s.label, 11, "middle");
  }
  plot.axes("", y_label, 1, 6);
  plot.title(plot_title);
  plot.save(path);
}

void plot_sweep(const std::vector<SweepRow>& rows, const std::string& x_label,
                const std::string& plot_title, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("no sweep rows");
  double xmax = 0.0, zmin = 1e9, zmax = -1e9;
  for (const auto& r : rows) {
    xmax = std::max(xmax, r.q75);
    zmin = std::min(zmin, r.altitude);
    zmax = std::max(zmax, r.altitude);
  }
  double pad = 0.15 * (zmax - zmin + 1e-9);
  SvgPlot plot(560, 420, 0.0, 1.2 * xmax, zmin - pad, zmax + pad);
  std::vector<double> med, alt;
  for (const auto& r : rows) {
    plot.rect(r.q25, r.altitude - 0.25 * pad, r.q75 - r.q25, 0.5 * pad, "#d6e4f7", "#333");
    plot.line(r.q50, r.altitude - 0.25 * pad, r.q50, r.altitude + 0.25 * pad, "#c0392b");
    med.push_back(r.q50);
    alt.push_back(r.altitude);
  }
  plot.polyline(med, alt, "#888", 1.0);
  plot.axes(x_label, "altitude above floor [m]");
  plot.title(plot_title);
  plot.save(path);
}

void plot_scatter(const std::vector<double>& truth, const std::vector<double>& predicted,
                  const std::string& axis_label, const std::string& plot_title,
                  const std::string& path) {
  if (truth.size() != predicted.size() || truth.empty()) {
    throw std::invalid_argument("scatter inputs empty or mismatched");
  }
  double lo = 1e9, hi = -1e9;
  for (size_t i = 0; i < truth.size(); ++i) {
    lo = std::min({lo, truth[i], predicted[i]});
    hi = std::max({hi, truth[i], predicted[i]});
  }
  double pad = 0.08 * (hi - lo + 1e-9);
  SvgPlot plot(460, 460, lo - pad, hi + pad, lo - pad, hi + pad);
  plot.line(lo, lo, hi, hi, "#999");
  for (size_t i = 0; i < truth.size(); ++i) {
    plot.circle(truth[i], predicted[i], 1.6, "rgba(30,80,160,0.35)");
  }
  plot.axes("truth " + axis_label, "predicted " + axis_label);
  plot.title(plot_title);
  plot.save(path);
}

}  // namespace ductflight
