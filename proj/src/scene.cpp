#include "nlospf/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace nlos {

void PlanarSurface::validate() const {
  if (area() <= 0.0 || !std::isfinite(area()))
    throw ConfigError("surface '" + name + "': degenerate edges (area == 0)");
  if (albedo < 0.0 || albedo > 1.0)
    throw ConfigError("surface '" + name + "': albedo outside [0,1]");
  if (kind == SurfaceKind::Absorber && albedo != 0.0)
    throw ConfigError("surface '" + name + "': absorber must have albedo 0");
}

std::vector<Point3> RelayAperture::points() const {
  std::vector<Point3> out;
  out.reserve(count());
  for (std::size_t i = 0; i < n_u; ++i)
    for (std::size_t j = 0; j < n_v; ++j) out.push_back(point(i, j));
  return out;
}

void RelayAperture::validate() const {
  if (n_u < 1 || n_v < 1) throw ConfigError("relay: grid counts must be >= 1");
  if (cell_area() <= 0.0) throw ConfigError("relay: step vectors are degenerate");
  const Vec3& n = normal.vec();
  if (std::abs(dot(step_u, n)) > 1e-9 || std::abs(dot(step_v, n)) > 1e-9)
    throw ConfigError("relay: grid steps must lie in the relay plane");
  if (std::abs(dot(laser_point - grid_origin, n)) > 1e-6)
    throw ConfigError("relay: laser point is off the relay plane");
}

std::vector<Point3> VoxelGrid::points() const {
  std::vector<Point3> out;
  out.reserve(count());
  for (std::size_t i = 0; i < n_u; ++i)
    for (std::size_t j = 0; j < n_v; ++j)
      for (std::size_t k = 0; k < n_w; ++k) out.push_back(point(i, j, k));
  return out;
}

void VoxelGrid::validate() const {
  if (n_u < 1 || n_v < 1 || n_w < 1) throw ConfigError("grid: counts must be >= 1");
  if (cell_area() <= 0.0) throw ConfigError("grid: axis_u, axis_v are degenerate");
  if (n_w > 1 && std::abs(dot(cross(axis_u, axis_v), axis_w)) < 1e-15)
    throw ConfigError("grid: axes must be linearly independent when n_w > 1");
}

void Scene::validate() const {
  relay.validate();
  if (max_bounces < 3) throw ConfigError("scene: max_bounces must be >= 3");
  const Vec3& n = relay.normal.vec();
  for (const auto& s : surfaces) {
    s.validate();
    // A surface may lie in the relay plane (the relay wall itself) but must
    // not straddle it.
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (double u : {0.0, 1.0})
      for (double v : {0.0, 1.0}) {
        const double d = dot(s.point(u, v) - relay.grid_origin, n);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
    if (lo < -1e-9 && hi > 1e-9)
      throw ConfigError("surface '" + s.name + "' straddles the relay plane");
  }
}

const PlanarSurface* Scene::find_surface(const std::string& name) const {
  for (const auto& s : surfaces)
    if (s.name == name) return &s;
  return nullptr;
}

VoxelGrid mirror_reflect_grid(const VoxelGrid& g, const Point3& plane_point,
                              const Dir3& plane_normal) {
  VoxelGrid out = g;
  out.origin = mirror_reflect_point(g.origin, plane_point, plane_normal);
  out.axis_u = mirror_reflect_vector(g.axis_u, plane_normal);
  out.axis_v = mirror_reflect_vector(g.axis_v, plane_normal);
  out.axis_w = mirror_reflect_vector(g.axis_w, plane_normal);
  return out;
}

namespace {

// Intersection of a ray with one rectangle. Barycentric bounds are shrunk by
// 1e-9 m per edge so grazing hits at the border resolve as miss.
inline bool intersect_rect(const PlanarSurface& s, const Point3& origin,
                           const Vec3& dir, double t_min, double t_max,
                           double& t_out) {
  const Vec3 n = cross(s.edge_u, s.edge_v);  // unnormalized
  const double denom = dot(dir, n);
  if (std::abs(denom) < 1e-15) return false;  // parallel
  const double t = dot(s.origin - origin, n) / denom;
  if (t <= t_min || t >= t_max) return false;
  const Point3 p = origin + t * dir;
  const Vec3 d = p - s.origin;
  // Solve d = u*edge_u + v*edge_v in the plane.
  const double uu = dot(s.edge_u, s.edge_u);
  const double vv = dot(s.edge_v, s.edge_v);
  const double uv = dot(s.edge_u, s.edge_v);
  const double du = dot(d, s.edge_u);
  const double dv = dot(d, s.edge_v);
  const double det = uu * vv - uv * uv;
  if (det <= 0.0) return false;
  const double u = (du * vv - dv * uv) / det;
  const double v = (dv * uu - du * uv) / det;
  const double eps_u = 1e-9 / std::sqrt(uu);
  const double eps_v = 1e-9 / std::sqrt(vv);
  if (u <= eps_u || u >= 1.0 - eps_u || v <= eps_v || v >= 1.0 - eps_v) return false;
  t_out = t;
  return true;
}

}  // namespace

std::optional<RayHit> intersect_scene(const Scene& scene, const Point3& origin,
                                      const Vec3& dir_unit, double t_min) {
  std::optional<RayHit> best;
  double best_t = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < scene.surfaces.size(); ++i) {
    double t;
    if (intersect_rect(scene.surfaces[i], origin, dir_unit, t_min, best_t, t)) {
      best_t = t;
      best = RayHit{t, i, origin + t * dir_unit, scene.surfaces[i].geometric_normal()};
    }
  }
  return best;
}

bool point_visibility(const Point3& a, const Point3& b, const Scene& scene) {
  const Vec3 d = b - a;
  const double len = norm(d);
  if (len < 1e-12) throw DegenerateError("point_visibility: coincident endpoints");
  const Vec3 dir = d / len;
  for (const auto& s : scene.surfaces) {
    double t;
    if (intersect_rect(s, a, dir, 1e-9, len - 1e-9, t)) return false;
  }
  return true;
}

double max_path_length_bound(const Scene& scene, int max_bounces) {
  // Collect relay corners and all surface corners; any path vertex lies
  // inside their convex hull, so the hull diameter bounds each segment.
  std::vector<Point3> pts;
  const auto& r = scene.relay;
  for (std::size_t i : {std::size_t{0}, r.n_u - 1})
    for (std::size_t j : {std::size_t{0}, r.n_v - 1}) pts.push_back(r.point(i, j));
  pts.push_back(r.laser_point);
  for (const auto& s : scene.surfaces)
    for (double u : {0.0, 1.0})
      for (double v : {0.0, 1.0}) pts.push_back(s.point(u, v));
  double diam = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      diam = std::max(diam, distance(pts[i], pts[j]));
  const int segments = std::max(1, max_bounces - 1);
  return double(segments) * diam;
}

}  // namespace nlos
