#include "nlospf/mirrors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlos {

namespace {

// A voxel is a candidate peak when no in-grid neighbor (along axes that have
// more than one sample) is strictly brighter.
bool is_local_max(const TimeSlice& img, std::size_t i, std::size_t j, std::size_t k) {
  const auto& g = img.grid;
  const double m = img.magnitude[g.index(i, j, k)];
  const long ni = long(g.n_u), nj = long(g.n_v), nk = long(g.n_w);
  for (long di = -1; di <= 1; ++di)
    for (long dj = -1; dj <= 1; ++dj)
      for (long dk = -1; dk <= 1; ++dk) {
        if (di == 0 && dj == 0 && dk == 0) continue;
        const long ii = long(i) + di, jj = long(j) + dj, kk = long(k) + dk;
        if (ii < 0 || ii >= ni || jj < 0 || jj >= nj || kk < 0 || kk >= nk) continue;
        if (img.magnitude[g.index(std::size_t(ii), std::size_t(jj), std::size_t(kk))] > m)
          return false;
      }
  return true;
}

}  // namespace

std::vector<Peak> detect_peaks(const TimeSlice& img, double suppression_radius,
                               double rel_threshold) {
  if (suppression_radius <= 0.0)
    throw ConfigError("detect_peaks: suppression_radius must be > 0");
  if (rel_threshold <= 0.0 || rel_threshold >= 1.0)
    throw ConfigError("detect_peaks: rel_threshold must be in (0,1)");

  const double global_max =
      img.magnitude.empty()
          ? 0.0
          : *std::max_element(img.magnitude.begin(), img.magnitude.end());
  if (global_max <= 0.0) return {};
  const double floor_mag = rel_threshold * global_max;

  std::vector<Peak> candidates;
  const auto& g = img.grid;
  for (std::size_t i = 0; i < g.n_u; ++i)
    for (std::size_t j = 0; j < g.n_v; ++j)
      for (std::size_t k = 0; k < g.n_w; ++k) {
        const std::size_t v = g.index(i, j, k);
        if (img.magnitude[v] < floor_mag) continue;
        if (!is_local_max(img, i, j, k)) continue;
        candidates.push_back(Peak{g.point(i, j, k), img.magnitude[v], v});
      }

  std::sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    return a.voxel < b.voxel;
  });

  std::vector<Peak> out;
  for (const Peak& c : candidates) {
    bool suppressed = false;
    for (const Peak& kept : out)
      if (distance(c.position, kept.position) <= suppression_radius) {
        suppressed = true;
        break;
      }
    if (!suppressed) out.push_back(c);
  }
  return out;
}

PlaneEstimate infer_plane(const Point3& p, const Point3& p_mirror) {
  const Vec3 diff = p - p_mirror;
  if (norm(diff) < 1e-6)
    throw DegenerateError("infer_plane: point and mirror image coincide");
  PlaneEstimate est;
  est.center = 0.5 * (p + p_mirror);
  est.normal = Dir3(diff);
  est.source_pair = {p, p_mirror};
  return est;
}

SecondaryAperture extract_secondary_aperture(const FocalStackImage& f_cc_volume,
                                             double rel_threshold,
                                             const PhasorField& response) {
  if (rel_threshold <= 0.0 || rel_threshold > 1.0)
    throw ConfigError("extract_secondary_aperture: rel_threshold must be in (0,1]");
  const TimeSlice slice = evaluate_at_time(f_cc_volume, 0.0);
  const double global_max =
      slice.magnitude.empty()
          ? 0.0
          : *std::max_element(slice.magnitude.begin(), slice.magnitude.end());
  if (global_max <= 0.0)
    throw EmptyApertureError("extract_secondary_aperture: volume image is zero");
  const double floor_mag = rel_threshold * global_max;

  SecondaryAperture ap;
  const auto& g = f_cc_volume.grid;
  const double face_area = g.cell_area();
  for (std::size_t i = 0; i < g.n_u; ++i)
    for (std::size_t j = 0; j < g.n_v; ++j)
      for (std::size_t k = 0; k < g.n_w; ++k)
        if (slice.magnitude[g.index(i, j, k)] >= floor_mag) {
          ap.points.push_back(g.point(i, j, k));
          ap.weights.push_back(face_area);
        }
  if (ap.points.empty())
    throw EmptyApertureError("extract_secondary_aperture: nothing passed the threshold");

  ap.field = propagate(response, ap.points);
  ap.field.weights = ap.weights;
  return ap;
}

SecondaryAperture extract_secondary_aperture(const FocalStackImage& f_cc_volume,
                                             double rel_threshold,
                                             const ImpulseResponse& h,
                                             const IlluminationPulse& pulse) {
  const FrequencyBand band = pulse_spectrum(pulse, h.dt, default_dft_len(h.n_bins));
  return extract_secondary_aperture(f_cc_volume, rel_threshold, scene_response(h, band));
}

namespace {

PhasorField as_field(const SecondaryAperture& ap) {
  if (ap.points.empty())
    throw EmptyApertureError("secondary camera: aperture has no points");
  if (ap.field.points.size() != ap.points.size() ||
      ap.field.values.size() != ap.points.size() * ap.field.band.size())
    throw DimensionMismatch("secondary camera: field shape mismatch");
  PhasorField f = ap.field;
  f.points = ap.points;
  f.weights = ap.weights;
  return f;
}

}  // namespace

FocalStackImage transient_camera_secondary(const SecondaryAperture& ap,
                                           const VoxelGrid& target) {
  return transient_camera(as_field(ap), target);
}

FocalStackImage confocal_camera_secondary(const SecondaryAperture& ap,
                                          const Point3& laser_point,
                                          const VoxelGrid& target) {
  return confocal_camera(as_field(ap), laser_point, target);
}

InferenceResult infer_plane_from_slice(const TimeSlice& slice, const Point3& known_point,
                                       double suppression_radius, double rel_threshold,
                                       double match_radius) {
  InferenceResult result;
  result.peaks = detect_peaks(slice, suppression_radius, rel_threshold);
  if (result.peaks.size() < 2) {
    result.note = "fewer than two peaks detected";
    return result;
  }
  std::size_t known_idx = result.peaks.size();
  for (std::size_t i = 0; i < result.peaks.size(); ++i)
    if (distance(result.peaks[i].position, known_point) <= match_radius) {
      known_idx = i;
      break;
    }
  if (known_idx == result.peaks.size()) {
    result.note = "no detected peak matches the known illuminated point; "
                  "mirror pairing is ambiguous";
    return result;
  }
  // Strongest peak that is not the known point is taken as its mirror image.
  for (std::size_t i = 0; i < result.peaks.size(); ++i) {
    if (i == known_idx) continue;
    PlaneEstimate est = infer_plane(known_point, result.peaks[i].position);
    est.peak_magnitude = result.peaks[i].magnitude;
    result.estimate = est;
    result.note = "paired known point with peak " + std::to_string(i);
    return result;
  }
  result.note = "no partner peak available";
  return result;
}

TwoCornerImage two_corner_image(const ImpulseResponse& h, const IlluminationPulse& pulse,
                                const Point3& mirror_point, const Dir3& mirror_normal,
                                const VoxelGrid& target) {
  TwoCornerImage out{confocal_camera(h, pulse, target), mirror_point, mirror_normal};
  return out;
}

}  // namespace nlos
