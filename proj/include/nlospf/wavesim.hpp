#pragma once
#include <complex>
#include <cstdint>
#include <vector>

#include "nlospf/scene.hpp"

namespace nlos {

enum class FieldKind { Wave, Ray };

/// Single-frequency field sampled over a planar grid, estimated by Monte
/// Carlo integration over one diffuse surface. Ray mode drops the phase term
/// (the steady-state, zero-frequency component); its values are real.
struct FieldImage {
  VoxelGrid grid;
  FieldKind kind = FieldKind::Wave;
  double omega = 0.0;  // Hz; unused in ray mode
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::complex<double>> values;  // per pixel
};

/// MC estimate at each probe point of
///   integral over M of e^{ik(|xv-xm| + |xm-xl|)} / (|xv-xm| |xm-xl|) dxm
/// with uniform area sampling of the surface. Deterministic per-point streams.
std::vector<std::complex<double>> simulate_wave_field_at(
    const Point3& source, const PlanarSurface& surface,
    const std::vector<Point3>& probes, double omega, std::size_t n_samples,
    std::uint64_t seed);

/// Same integral with the phase removed: 1 / (|xv-xm| |xm-xl|).
std::vector<double> simulate_ray_field_at(const Point3& source,
                                          const PlanarSurface& surface,
                                          const std::vector<Point3>& probes,
                                          std::size_t n_samples, std::uint64_t seed);

FieldImage simulate_wave_field(const Point3& source, const PlanarSurface& surface,
                               const VoxelGrid& grid, double omega,
                               std::size_t n_samples, std::uint64_t seed);

FieldImage simulate_ray_field(const Point3& source, const PlanarSurface& surface,
                              const VoxelGrid& grid, std::size_t n_samples,
                              std::uint64_t seed);

}  // namespace nlos
