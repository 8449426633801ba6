#pragma once

#include "ductflight/forcemap.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace ductflight {

// Small self-contained SVG canvas. Data coordinates map linearly onto a
// fixed-margin plot box; y grows upward.
class SvgPlot {
 public:
  SvgPlot(double width_px, double height_px, double x_min, double x_max, double y_min,
          double y_max);

  double px(double x) const;
  double py(double y) const;

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0);
  void circle(double x, double y, double r_px, const std::string& fill,
              const std::string& stroke = "none");
  void ellipse(double x, double y, double rx, double ry, double angle_deg,
               const std::string& stroke);
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none");
  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& stroke, double width = 1.5);
  void text(double x, double y, const std::string& s, double size_px = 12.0,
            const std::string& anchor = "start");
  void arrow(double x1, double y1, double x2, double y2, const std::string& stroke);

  void axes(const std::string& x_label, const std::string& y_label, int x_ticks = 5,
            int y_ticks = 5);
  void title(const std::string& s);

  void save(const std::string& path) const;

 private:
  double w_, h_, x_min_, x_max_, y_min_, y_max_;
  double margin_ = 52.0;
  std::ostringstream body_;
};

void plot_force_field(const ForceField& field, const std::string& path);

struct BoxSeries {
  std::string label;
  std::vector<double> values;
};

// One box per series: median bar, quartile box, 5th/95th whiskers.
void plot_boxes(const std::vector<BoxSeries>& series, const std::string& y_label,
                const std::string& plot_title, const std::string& path);

// Altitude sweep summary: spread of the per-altitude samples drawn as
// horizontal bars with the altitude on the vertical axis.
struct SweepRow {
  double altitude = 0.0;
  double q25 = 0.0, q50 = 0.0, q75 = 0.0;
};
void plot_sweep(const std::vector<SweepRow>& rows, const std::string& x_label,
                const std::string& plot_title, const std::string& path);

void plot_scatter(const std::vector<double>& truth, const std::vector<double>& predicted,
                  const std::string& axis_label, const std::string& plot_title,
                  const std::string& path);

}  // namespace ductflight
