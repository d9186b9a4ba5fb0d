#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlospf/phasor.hpp"

namespace nlos {

/// Hidden plane inferred from a point and its mirror image.
struct PlaneEstimate {
  Point3 center;                        // midpoint of the pair
  Dir3 normal;                          // parallel to the pair difference
  std::pair<Point3, Point3> source_pair;
  double peak_magnitude = 0.0;
};

/// A hidden surface promoted to a computational camera aperture: selected
/// points, their area elements, and the transient-camera phasors there.
struct SecondaryAperture {
  std::vector<Point3> points;
  std::vector<double> weights;  // area elements [m^2]
  PhasorField field;
};

struct Peak {
  Point3 position;
  double magnitude = 0.0;
  std::size_t voxel = 0;
};

/// Local maxima above rel_threshold * global max, greedily non-max-suppressed
/// within suppression_radius, sorted by magnitude descending (ties broken by
/// voxel index ascending). May return an empty list.
std::vector<Peak> detect_peaks(const TimeSlice& img, double suppression_radius,
                               double rel_threshold);

/// Plane halfway between a point and its mirror image:
/// center = (p + p_mirror)/2, normal = (p - p_mirror)/|p - p_mirror|.
PlaneEstimate infer_plane(const Point3& p, const Point3& p_mirror);

/// Thresholds |f_cc(xv, t=0)| over the volume at rel_threshold * max, keeps
/// the passing voxels as aperture points with voxel-face area weights, and
/// evaluates the transient camera of (h, pulse) at exactly those points.
SecondaryAperture extract_secondary_aperture(const FocalStackImage& f_cc_volume,
                                             double rel_threshold,
                                             const ImpulseResponse& h,
                                             const IlluminationPulse& pulse);

/// Same extraction against a precomputed aperture response (avoids a second
/// pass over the histogram when the caller already has it).
SecondaryAperture extract_secondary_aperture(const FocalStackImage& f_cc_volume,
                                             double rel_threshold,
                                             const PhasorField& response);

/// Transient camera with the aperture moved onto the secondary surface:
/// f_tcM(xw, w) = sum_xm rsd(xm, xw, w) f_tc(xm, w) dA.
FocalStackImage transient_camera_secondary(const SecondaryAperture& ap,
                                           const VoxelGrid& target);

/// Confocal camera at the secondary aperture: adds the illumination-leg
/// kernel rsd(xl, xw, w) per target point.
FocalStackImage confocal_camera_secondary(const SecondaryAperture& ap,
                                          const Point3& laser_point,
                                          const VoxelGrid& target);

/// Result of inference from a time slice: the estimate when the known
/// illuminated point matched a detected peak, plus diagnostics either way.
struct InferenceResult {
  std::optional<PlaneEstimate> estimate;
  std::vector<Peak> peaks;
  std::string note;
};

/// Pairs the known illuminated point with the strongest other peak. The
/// match succeeds when some detected peak lies within match_radius of the
/// known point; otherwise the ambiguity is reported, never auto-resolved.
InferenceResult infer_plane_from_slice(const TimeSlice& slice, const Point3& known_point,
                                       double suppression_radius, double rel_threshold,
                                       double match_radius);

struct TwoCornerImage {
  FocalStackImage image;
  Point3 mirror_point;
  Dir3 mirror_normal;
};

/// Fifth-bounce imaging around two corners: a plain confocal camera evaluated
/// on a grid placed where the mirror image of the target forms behind the
/// intermediate surface. The mirror plane is recorded as metadata.
TwoCornerImage two_corner_image(const ImpulseResponse& h, const IlluminationPulse& pulse,
                                const Point3& mirror_point, const Dir3& mirror_normal,
                                const VoxelGrid& target);

}  // namespace nlos
