#pragma once
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nlospf/geometry.hpp"

namespace nlos {

enum class SurfaceKind { Diffuse, Absorber };

/// Finite rectangle: origin plus two edge vectors. All hidden-scene geometry
/// (walls, mirror surfaces, occluders) is built from these.
struct PlanarSurface {
  std::string name;
  Point3 origin;
  Vec3 edge_u;
  Vec3 edge_v;
  double albedo = 1.0;
  SurfaceKind kind = SurfaceKind::Diffuse;

  Vec3 geometric_normal() const { return Dir3(cross(edge_u, edge_v)).vec(); }
  double area() const { return norm(cross(edge_u, edge_v)); }
  Point3 point(double u, double v) const { return origin + u * edge_u + v * edge_v; }
  Point3 center() const { return point(0.5, 0.5); }

  /// Throws ConfigError on degenerate edges or out-of-range albedo.
  void validate() const;
};

/// Regular grid of sensing points on the relay wall plus the single
/// illuminated point. Grid steps must lie in the plane given by `normal`.
struct RelayAperture {
  Point3 grid_origin;
  Vec3 step_u;
  Vec3 step_v;
  std::size_t n_u = 1;
  std::size_t n_v = 1;
  Dir3 normal{0.0, 0.0, 1.0};
  Point3 laser_point;

  std::size_t count() const { return n_u * n_v; }
  Point3 point(std::size_t i, std::size_t j) const {
    return grid_origin + double(i) * step_u + double(j) * step_v;
  }
  std::vector<Point3> points() const;
  /// Area element of one grid cell.
  double cell_area() const { return norm(cross(step_u, step_v)); }

  void validate() const;
};

/// Regular (possibly oblique) sample grid; n_w == 1 gives a planar image.
/// point(i,j,k) = origin + i*axis_u + j*axis_v + k*axis_w.
struct VoxelGrid {
  Point3 origin;
  Vec3 axis_u;
  Vec3 axis_v;
  Vec3 axis_w;
  std::size_t n_u = 1;
  std::size_t n_v = 1;
  std::size_t n_w = 1;

  std::size_t count() const { return n_u * n_v * n_w; }
  Point3 point(std::size_t i, std::size_t j, std::size_t k) const {
    return origin + double(i) * axis_u + double(j) * axis_v + double(k) * axis_w;
  }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * n_v + j) * n_w + k;
  }
  std::vector<Point3> points() const;
  /// In-plane cell area (u-v face).
  double cell_area() const { return norm(cross(axis_u, axis_v)); }

  void validate() const;
};

struct Scene {
  std::vector<PlanarSurface> surfaces;
  RelayAperture relay;
  int max_bounces = 3;

  void validate() const;
  const PlanarSurface* find_surface(const std::string& name) const;
};

/// Mirrors origin and all three axes across the plane; voxel (i,j,k) of the
/// result is the mirror image of voxel (i,j,k) of the input.
VoxelGrid mirror_reflect_grid(const VoxelGrid& g, const Point3& plane_point,
                              const Dir3& plane_normal);

struct RayHit {
  double t = 0.0;          // distance along the (unit) ray direction
  std::size_t surface = 0; // index into Scene::surfaces
  Point3 position;
  Vec3 normal;             // geometric normal (not flipped)
};

/// Nearest intersection of the ray with any scene surface beyond t_min.
/// Edge-grazing hits (within 1e-9 m of a rectangle border) count as miss.
std::optional<RayHit> intersect_scene(const Scene& scene, const Point3& origin,
                                      const Vec3& dir_unit, double t_min = 1e-9);

/// True iff the open segment (a,b) hits no surface interior. Both diffuse
/// surfaces and absorbers block. Symmetric in its arguments.
bool point_visibility(const Point3& a, const Point3& b, const Scene& scene);

/// Conservative upper bound on the optical length of any path
/// xl -> (max_bounces-2 surface vertices) -> xs within the scene.
double max_path_length_bound(const Scene& scene, int max_bounces);

}  // namespace nlos
