#include "nlospf/render.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <vector>

#include "nlospf/parallel.hpp"
#include "nlospf/rng.hpp"

namespace nlos {

void RenderParams::validate() const {
  if (n_paths == 0) throw ConfigError("render: n_paths must be > 0");
  if (dt <= 0.0) throw ConfigError("render: dt must be > 0");
  if (n_bins == 0) throw ConfigError("render: n_bins must be > 0");
  if (min_bounces < 3) throw ConfigError("render: min_bounces must be >= 3");
  if (max_bounces < min_bounces) throw ConfigError("render: max_bounces < min_bounces");
}

namespace {

constexpr std::size_t kBatchSize = 16384;
// Fixed lane count: batches are partitioned into contiguous lane ranges and
// each lane accumulates its batches in index order, so the reduction order is
// independent of how many threads execute the lanes.
constexpr std::size_t kLanes = 8;

struct LaneBuffers {
  // One float histogram per bounce order, [bounce - min_bounces].
  std::vector<std::vector<float>> hist;
  std::size_t clamped = 0;
  double clamped_energy = 0.0;
};

inline Vec3 cosine_sample(const Vec3& n, double u1, double u2) {
  Vec3 t, b;
  orthonormal_basis(n, t, b);
  const double r = std::sqrt(u1);
  const double phi = 2.0 * M_PI * u2;
  const double zc = std::sqrt(std::max(0.0, 1.0 - u1));
  return (r * std::cos(phi)) * t + (r * std::sin(phi)) * b + zc * n;
}

}  // namespace

static void render_core(const Scene& scene, const RenderParams& params,
                        std::vector<std::vector<double>>& out_hist,
                        RenderStats* stats) {
  scene.validate();
  params.validate();

  const double window = double(params.n_bins) * params.dt * kSpeedOfLight;
  const double bound = max_path_length_bound(scene, params.max_bounces);
  if (params.fail_on_late && window < bound)
    throw CoverageError("time window " + std::to_string(window) +
                        " m is below the analytic path-length bound " +
                        std::to_string(bound) + " m");

  const auto aperture = scene.relay.points();
  const Vec3 relay_n = scene.relay.normal.vec();
  const Point3 xl = scene.relay.laser_point;
  const std::size_t n_orders = std::size_t(params.max_bounces - params.min_bounces + 1);
  const std::size_t hist_size = aperture.size() * params.n_bins;
  const int max_vertices = params.max_bounces - 2;  // scene vertices per path
  const double inv_c = 1.0 / kSpeedOfLight;

  const std::size_t n_batches = (params.n_paths + kBatchSize - 1) / kBatchSize;
  const std::size_t per_lane = (n_batches + kLanes - 1) / kLanes;

  std::vector<LaneBuffers> lanes(kLanes);
  std::atomic<bool> coverage_failed{false};

  parallel_jobs(kLanes, [&](std::size_t lane) {
    const std::size_t b_lo = lane * per_lane;
    const std::size_t b_hi = std::min(n_batches, b_lo + per_lane);
    if (b_lo >= b_hi) return;
    LaneBuffers& buf = lanes[lane];
    buf.hist.assign(n_orders, std::vector<float>(hist_size, 0.0f));

    for (std::size_t batch = b_lo; batch < b_hi; ++batch) {
      auto rng = make_stream(params.seed, batch);
      const std::size_t p_lo = batch * kBatchSize;
      const std::size_t p_hi = std::min(params.n_paths, p_lo + kBatchSize);
      for (std::size_t p = p_lo; p < p_hi; ++p) {
        Point3 pos = xl;
        Vec3 shade_n = relay_n;
        double throughput = 1.0;
        double path_len = 0.0;
        int bounce = 1;  // the illuminated point
        for (int depth = 0; depth < max_vertices; ++depth) {
          const double u1 = uniform01(rng);
          const double u2 = uniform01(rng);
          const Vec3 dir = cosine_sample(shade_n, u1, u2);
          const auto hit = intersect_scene(scene, pos, dir);
          if (!hit) break;
          path_len += hit->t;
          ++bounce;
          const PlanarSurface& surf = scene.surfaces[hit->surface];
          if (surf.kind == SurfaceKind::Absorber || surf.albedo == 0.0) break;
          Vec3 ns = hit->normal;
          if (dot(ns, dir) > 0.0) ns = -ns;  // face the incoming side

          const int nee_bounce = bounce + 1;
          if (nee_bounce >= params.min_bounces && nee_bounce <= params.max_bounces) {
            std::vector<float>& h = buf.hist[std::size_t(nee_bounce - params.min_bounces)];
            const double brdf = surf.albedo / M_PI;
            for (std::size_t s = 0; s < aperture.size(); ++s) {
              const Vec3 w = aperture[s] - hit->position;
              const double r2 = norm2(w);
              const double r = std::sqrt(r2);
              const double cos_m = dot(ns, w) / r;
              if (cos_m <= 0.0) continue;
              const double cos_s = dot(relay_n, -1.0 * w) / r;
              if (cos_s <= 0.0) continue;
              if (!point_visibility(hit->position, aperture[s], scene)) continue;
              const double contrib = throughput * brdf * cos_m * cos_s / r2;
              std::size_t bin = std::size_t((path_len + r) * inv_c / params.dt);
              if (bin >= params.n_bins) {
                if (params.fail_on_late) {
                  coverage_failed.store(true);
                  return;
                }
                bin = params.n_bins - 1;
                ++buf.clamped;
                buf.clamped_energy += contrib;
              }
              h[s * params.n_bins + bin] += float(contrib);
            }
          }
          if (bounce + 2 > params.max_bounces) break;
          throughput *= surf.albedo;
          pos = hit->position;
          shade_n = ns;
        }
      }
    }
  });

  if (coverage_failed.load())
    throw CoverageError("sampled path time exceeds the histogram window");

  // Fixed-order reduction: lanes ascending, scaled by 1/n_paths.
  out_hist.assign(n_orders, std::vector<double>(hist_size, 0.0));
  const double scale = 1.0 / double(params.n_paths);
  RenderStats total;
  for (std::size_t lane = 0; lane < kLanes; ++lane) {
    if (lanes[lane].hist.empty()) continue;
    for (std::size_t o = 0; o < n_orders; ++o) {
      const auto& src = lanes[lane].hist[o];
      auto& dst = out_hist[o];
      for (std::size_t i = 0; i < hist_size; ++i) dst[i] += double(src[i]);
    }
    total.clamped_splats += lanes[lane].clamped;
    total.clamped_energy += lanes[lane].clamped_energy;
  }
  for (auto& hvec : out_hist)
    for (double& v : hvec) v *= scale;
  total.clamped_energy *= scale;
  if (total.clamped_splats > 0)
    std::fprintf(stderr, "[render] warning: %zu late splats clamped (energy %.3e)\n",
                 total.clamped_splats, total.clamped_energy);
  if (stats) *stats = total;
}

static ImpulseResponse make_response(const Scene& scene, const RenderParams& params,
                                     std::vector<double>&& values) {
  ImpulseResponse h;
  h.relay = scene.relay;
  h.dt = params.dt;
  h.n_bins = params.n_bins;
  h.values = std::move(values);
  return h;
}

ImpulseResponse render_impulse_response(const Scene& scene, const RenderParams& params,
                                        RenderStats* stats) {
  std::vector<std::vector<double>> per_bounce;
  render_core(scene, params, per_bounce, stats);
  // Sum components in ascending bounce order; render_bounce_separated uses the
  // same per-bounce arrays, which makes the decomposition identity exact.
  std::vector<double> sum(per_bounce[0].size(), 0.0);
  for (const auto& hvec : per_bounce)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += hvec[i];
  return make_response(scene, params, std::move(sum));
}

std::map<int, ImpulseResponse> render_bounce_separated(const Scene& scene,
                                                       const RenderParams& params,
                                                       RenderStats* stats) {
  std::vector<std::vector<double>> per_bounce;
  render_core(scene, params, per_bounce, stats);
  std::map<int, ImpulseResponse> out;
  for (int b = params.min_bounces; b <= params.max_bounces; ++b)
    out.emplace(b, make_response(scene, params,
                                 std::move(per_bounce[std::size_t(b - params.min_bounces)])));
  return out;
}

}  // namespace nlos
