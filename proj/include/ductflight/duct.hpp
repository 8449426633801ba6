#pragma once

#include "ductflight/math.hpp"

#include <optional>
#include <stdexcept>

namespace ductflight {

enum class DuctSection { Circular, Rectangular };

/// Straight duct segment, open at both ends, axis along +x.
///
/// Default frame is axis-centered: origin on the duct axis at one open end,
/// x in [0, length] along the axis, z up. The duct has walls only on its
/// lateral boundary; the two ends are open (rays and drones can leave).
struct DuctShape {
  DuctSection section = DuctSection::Circular;
  double radius = 0.175;  // circular only
  double width = 0.0;     // rectangular only, full extent along y
  double height = 0.0;    // rectangular only, full extent along z
  double length = 1.0;

  static DuctShape circular(double radius, double length = 1.0);
  static DuctShape rectangular(double width, double height, double length = 1.0);

  /// Distance from the axis down to the floor: radius, or height/2.
  double half_height() const;
  /// Lateral half extent: radius, or width/2.
  double half_width() const;

  /// True when (y, z) lies strictly inside the cross-section shrunk inward
  /// by `shrink` on all sides.
  bool inside_cross_section(double y, double z, double shrink = 0.0) const;

  /// Cross-section test plus the axial window x in [0, length].
  bool inside(const Vec3& p, double shrink = 0.0) const;
};

/// Cross-section frames differ only by a z translation:
/// axis-centered z = 0 on the axis, bottom-centered z = 0 at the floor.
enum class DuctFrame { AxisCentered, BottomCentered };

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
};

/// Distance along `ray` from its origin to the duct wall.
///
/// Returns empty when the ray leaves through an open end before reaching the
/// wall (including rays with no cross-section component). The origin must be
/// strictly inside the duct; otherwise throws std::invalid_argument
/// ("origin-outside-duct").
std::optional<double> ray_cast(const DuctShape& duct, const Ray& ray);

/// Translate a point between duct frames. Same-frame conversion is exact
/// identity; the round trip differs by at most one ulp in z.
Vec3 frame_convert(const Vec3& p, DuctFrame from, DuctFrame to, const DuctShape& duct);

}  // namespace ductflight
