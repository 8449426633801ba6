#include "ductflight/duct.hpp"

#include <cmath>

namespace ductflight {

DuctShape DuctShape::circular(double radius, double length) {
  if (radius <= 0.0 || length <= 0.0) {
    throw std::invalid_argument("duct dimensions must be positive");
  }
  DuctShape d;
  d.section = DuctSection::Circular;
  d.radius = radius;
  d.length = length;
  return d;
}

DuctShape DuctShape::rectangular(double width, double height, double length) {
  if (width <= 0.0 || height <= 0.0 || length <= 0.0) {
    throw std::invalid_argument("duct dimensions must be positive");
  }
  DuctShape d;
  d.section = DuctSection::Rectangular;
  d.radius = 0.0;
  d.width = width;
  d.height = height;
  d.length = length;
  return d;
}

double DuctShape::half_height() const {
  return section == DuctSection::Circular ? radius : 0.5 * height;
}

double DuctShape::half_width() const {
  return section == DuctSection::Circular ? radius : 0.5 * width;
}

bool DuctShape::inside_cross_section(double y, double z, double shrink) const {
  if (section == DuctSection::Circular) {
    double r = radius - shrink;
    return y * y + z * z < r * r;
  }
  return std::abs(y) < 0.5 * width - shrink && std::abs(z) < 0.5 * height - shrink;
}

bool DuctShape::inside(const Vec3& p, double shrink) const {
  return p.x() > 0.0 && p.x() < length && inside_cross_section(p.y(), p.z(), shrink);
}

namespace {

// Smallest positive t with |o_yz + t*d_yz| = r, for an origin strictly
// inside the circle. c < 0 guarantees exactly one positive root.
std::optional<double> wall_hit_circular(const DuctShape& duct, const Ray& ray) {
  double dy = ray.direction.y(), dz = ray.direction.z();
  double oy = ray.origin.y(), oz = ray.origin.z();
  double a = dy * dy + dz * dz;
  if (a == 0.0) return std::nullopt;  // purely axial, never meets the wall
  double b = 2.0 * (oy * dy + oz * dz);
  double c = oy * oy + oz * oz - duct.radius * duct.radius;
  double disc = b * b - 4.0 * a * c;
  return (-b + std::sqrt(disc)) / (2.0 * a);
}

std::optional<double> wall_hit_rectangular(const DuctShape& duct, const Ray& ray) {
  double t = std::numeric_limits<double>::infinity();
  double hw = 0.5 * duct.width, hh = 0.5 * duct.height;
  if (ray.direction.y() > 0.0) t = std::min(t, (hw - ray.origin.y()) / ray.direction.y());
  if (ray.direction.y() < 0.0) t = std::min(t, (-hw - ray.origin.y()) / ray.direction.y());
  if (ray.direction.z() > 0.0) t = std::min(t, (hh - ray.origin.z()) / ray.direction.z());
  if (ray.direction.z() < 0.0) t = std::min(t, (-hh - ray.origin.z()) / ray.direction.z());
  if (!std::isfinite(t)) return std::nullopt;
  return t;
}

}  // namespace

std::optional<double> ray_cast(const DuctShape& duct, const Ray& ray) {
  if (!duct.inside(ray.origin)) {
    throw std::invalid_argument("origin-outside-duct");
  }
  std::optional<double> t = duct.section == DuctSection::Circular
                                ? wall_hit_circular(duct, ray)
                                : wall_hit_rectangular(duct, ray);
  if (!t) return std::nullopt;
  // The wall only exists over the axial window; beyond it the ray has
  // already left through an open end.
  double x_hit = ray.origin.x() + *t * ray.direction.x();
  if (x_hit < 0.0 || x_hit > duct.length) return std::nullopt;
  return t;
}

Vec3 frame_convert(const Vec3& p, DuctFrame from, DuctFrame to, const DuctShape& duct) {
  if (from == to) return p;
  Vec3 out = p;
  if (from == DuctFrame::AxisCentered) {
    out.z() += duct.half_height();  // axis sits half_height above the floor
  } else {
    out.z() -= duct.half_height();
  }
  return out;
}

}  // namespace ductflight
