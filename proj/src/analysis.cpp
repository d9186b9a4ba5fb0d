#include "nlospf/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace nlos {

double point_rect_distance(const Point3& p, const PlanarSurface& rect) {
  const Vec3 d = p - rect.origin;
  const double uu = dot(rect.edge_u, rect.edge_u);
  const double vv = dot(rect.edge_v, rect.edge_v);
  const double uv = dot(rect.edge_u, rect.edge_v);
  const double du = dot(d, rect.edge_u);
  const double dv = dot(d, rect.edge_v);
  const double det = uu * vv - uv * uv;
  double u = (du * vv - dv * uv) / det;
  double v = (dv * uu - du * uv) / det;
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  return distance(p, rect.point(u, v));
}

double footprint_magnitude(const TimeSlice& slice, const PlanarSurface& rect,
                           double dist_tol) {
  const auto& g = slice.grid;
  const double cell = g.cell_area();
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_u; ++i)
    for (std::size_t j = 0; j < g.n_v; ++j)
      for (std::size_t k = 0; k < g.n_w; ++k)
        if (point_rect_distance(g.point(i, j, k), rect) <= dist_tol)
          sum += slice.magnitude[g.index(i, j, k)] * cell;
  return sum;
}

std::vector<std::uint8_t> rects_to_mask(const VoxelGrid& grid,
                                        const std::vector<std::array<double, 4>>& rects) {
  std::vector<std::uint8_t> mask(grid.count(), 0);
  for (std::size_t i = 0; i < grid.n_u; ++i)
    for (std::size_t j = 0; j < grid.n_v; ++j) {
      const double u = (double(i) + 0.5) / double(grid.n_u);
      const double v = (double(j) + 0.5) / double(grid.n_v);
      for (const auto& r : rects)
        if (u >= r[0] && u <= r[2] && v >= r[1] && v <= r[3]) {
          for (std::size_t k = 0; k < grid.n_w; ++k) mask[grid.index(i, j, k)] = 1;
          break;
        }
    }
  return mask;
}

std::vector<std::uint8_t> binarize(const std::vector<double>& magnitude,
                                   double rel_threshold) {
  const double peak =
      magnitude.empty() ? 0.0 : *std::max_element(magnitude.begin(), magnitude.end());
  std::vector<std::uint8_t> out(magnitude.size(), 0);
  if (peak <= 0.0) return out;
  const double floor_mag = rel_threshold * peak;
  for (std::size_t i = 0; i < magnitude.size(); ++i)
    out[i] = magnitude[i] >= floor_mag ? 1 : 0;
  return out;
}

double normalized_cross_correlation(const std::vector<std::uint8_t>& a,
                                    const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size() || a.empty())
    throw DimensionMismatch("normalized_cross_correlation: size mismatch");
  const double n = double(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace nlos
