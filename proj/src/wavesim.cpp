#include "nlospf/wavesim.hpp"

#include <cmath>

#include "nlospf/parallel.hpp"
#include "nlospf/rng.hpp"

namespace nlos {

namespace {

// One probe point, one stream. Phase term included iff omega > 0 is passed
// through `wave`.
std::complex<double> estimate_point(const Point3& source, const PlanarSurface& surface,
                                    const Point3& probe, double omega, bool wave,
                                    std::size_t n_samples, std::uint64_t seed,
                                    std::uint64_t stream) {
  auto rng = make_stream(seed, stream);
  const double area = surface.area();
  const double k = 2.0 * M_PI * omega / kSpeedOfLight;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double u = uniform01(rng);
    const double v = uniform01(rng);
    const Point3 xm = surface.point(u, v);
    const double r1 = distance(xm, source);
    const double r2 = distance(probe, xm);
    if (r1 < 1e-9 || r2 < 1e-9)
      throw SingularityError("wavesim: sample point coincides with an endpoint");
    const double amp = 1.0 / (r1 * r2);
    if (wave)
      acc += std::polar(amp, k * (r1 + r2));
    else
      acc += amp;
  }
  return acc * (area / double(n_samples));
}

}  // namespace

std::vector<std::complex<double>> simulate_wave_field_at(
    const Point3& source, const PlanarSurface& surface,
    const std::vector<Point3>& probes, double omega, std::size_t n_samples,
    std::uint64_t seed) {
  if (n_samples == 0) throw ConfigError("wavesim: n_samples must be > 0");
  std::vector<std::complex<double>> out(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) {
    out[i] = estimate_point(source, surface, probes[i], omega, true, n_samples, seed, i);
  });
  return out;
}

std::vector<double> simulate_ray_field_at(const Point3& source,
                                          const PlanarSurface& surface,
                                          const std::vector<Point3>& probes,
                                          std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw ConfigError("wavesim: n_samples must be > 0");
  std::vector<double> out(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) {
    out[i] = estimate_point(source, surface, probes[i], 0.0, false, n_samples, seed, i)
                 .real();
  });
  return out;
}

FieldImage simulate_wave_field(const Point3& source, const PlanarSurface& surface,
                               const VoxelGrid& grid, double omega,
                               std::size_t n_samples, std::uint64_t seed) {
  grid.validate();
  FieldImage img;
  img.grid = grid;
  img.kind = FieldKind::Wave;
  img.omega = omega;
  img.n_samples = n_samples;
  img.seed = seed;
  img.values = simulate_wave_field_at(source, surface, grid.points(), omega,
                                      n_samples, seed);
  return img;
}

FieldImage simulate_ray_field(const Point3& source, const PlanarSurface& surface,
                              const VoxelGrid& grid, std::size_t n_samples,
                              std::uint64_t seed) {
  grid.validate();
  FieldImage img;
  img.grid = grid;
  img.kind = FieldKind::Ray;
  img.omega = 0.0;
  img.n_samples = n_samples;
  img.seed = seed;
  const auto mags = simulate_ray_field_at(source, surface, grid.points(), n_samples, seed);
  img.values.assign(mags.begin(), mags.end());
  return img;
}

}  // namespace nlos
