#pragma once
#include <cmath>

#include "nlospf/errors.hpp"

namespace nlos {

/// Speed of light in vacuum [m/s].
inline constexpr double kSpeedOfLight = 299792458.0;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3& o) const = default;
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline constexpr double norm2(const Vec3& v) { return dot(v, v); }

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// A point in world space [m]. Same representation as Vec3; the alias marks intent.
using Point3 = Vec3;

/// Unit-length direction. Normalizes on construction; rejects near-zero input.
class Dir3 {
 public:
  Dir3() : v_{0.0, 0.0, 1.0} {}
  explicit Dir3(const Vec3& raw) {
    const double n = norm(raw);
    if (n < 1e-12) throw DegenerateError("Dir3: cannot normalize near-zero vector");
    v_ = raw / n;
  }
  Dir3(double x, double y, double z) : Dir3(Vec3{x, y, z}) {}

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }

 private:
  Vec3 v_;
};

/// Reflects a free vector across the plane with unit normal n.
inline Vec3 mirror_reflect_vector(const Vec3& a, const Dir3& n) {
  return a - 2.0 * dot(a, n.vec()) * n.vec();
}

/// Mirror image of p across the plane through plane_point with unit normal
/// plane_normal. Involutive and distance preserving.
inline Point3 mirror_reflect_point(const Point3& p, const Point3& plane_point,
                                   const Dir3& plane_normal) {
  const Vec3& n = plane_normal.vec();
  return p - 2.0 * dot(p - plane_point, n) * n;
}

/// Orthonormal basis around a unit vector n (Duff et al. branchless construction).
inline void orthonormal_basis(const Vec3& n, Vec3& t, Vec3& b) {
  const double sign = std::copysign(1.0, n.z);
  const double a = -1.0 / (sign + n.z);
  const double c = n.x * n.y * a;
  t = {1.0 + sign * n.x * n.x * a, sign * c, -sign * n.x};
  b = {c, sign + n.y * n.y * a, -n.y};
}

inline double deg2rad(double deg) { return deg * (M_PI / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / M_PI); }

/// Angle between two directions in degrees, in [0, 180].
inline double angle_between_deg(const Vec3& a, const Vec3& b) {
  const double c = dot(a, b) / (norm(a) * norm(b));
  return rad2deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

}  // namespace nlos
