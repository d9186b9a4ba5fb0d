#pragma once
#include <cstdint>
#include <map>

#include "nlospf/impulse.hpp"
#include "nlospf/scene.hpp"

namespace nlos {

/// Renderer controls. `sensor_fwhm` is carried here for experiment configs
/// but is applied by pipelines via convolve_sensor_response, never inside the
/// renderer itself, so bounce decompositions stay bit-exact.
struct RenderParams {
  std::size_t n_paths = 1'000'000;
  std::uint64_t seed = 0;
  double dt = 10e-12;       // seconds per bin
  std::size_t n_bins = 2048;
  int min_bounces = 3;
  int max_bounces = 3;
  double sensor_fwhm = 0.0;  // 0 = ideal sensor
  bool fail_on_late = false; // true: CoverageError instead of clamp-and-warn

  void validate() const;
};

struct RenderStats {
  std::size_t clamped_splats = 0;
  double clamped_energy = 0.0;
};

/// Unbiased Monte Carlo estimate of H(xl, xs, t).
///
/// Paths start at the illuminated point with a delta pulse, scatter diffusely
/// (cosine-weighted hemisphere sampling, throughput x albedo), and connect to
/// every aperture point by next-event estimation at each vertex. Bounce
/// counting: the illuminated point is bounce 1, each scene vertex adds one,
/// the sensing point is the final bounce.
///
/// Identical (scene, params) give bit-identical output for any thread count.
ImpulseResponse render_impulse_response(const Scene& scene, const RenderParams& params,
                                        RenderStats* stats = nullptr);

/// One histogram per bounce count in [min_bounces, max_bounces]. Their
/// elementwise sum is bit-identical to render_impulse_response output for the
/// same scene and params.
std::map<int, ImpulseResponse> render_bounce_separated(const Scene& scene,
                                                       const RenderParams& params,
                                                       RenderStats* stats = nullptr);

}  // namespace nlos
