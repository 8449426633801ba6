#include "ductflight/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ductflight {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile level outside [0,1]");
  std::sort(values.begin(), values.end());
  double h = q * static_cast<double>(values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = static_cast<std::size_t>(std::ceil(h));
  double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double iqr(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("iqr of empty sample");
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    double h = q * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = static_cast<std::size_t>(std::ceil(h));
    double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  return at(0.75) - at(0.25);
}

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double variance(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("variance needs at least two samples");
  double m = mean(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return s / static_cast<double>(values.size() - 1);
}

}  // namespace ductflight
