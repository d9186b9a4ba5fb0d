#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "nlospf/phasor.hpp"

namespace nlos {

/// Shortest distance from a point to a finite rectangle.
double point_rect_distance(const Point3& p, const PlanarSurface& rect);

/// Sum of |f| * cell_area over voxels within dist_tol of the rectangle.
double footprint_magnitude(const TimeSlice& slice, const PlanarSurface& rect,
                           double dist_tol);

/// Binary mask over a planar grid from fractional-coordinate rectangles
/// (u0, v0, u1, v1 in [0,1], u along axis_u).
std::vector<std::uint8_t> rects_to_mask(const VoxelGrid& grid,
                                        const std::vector<std::array<double, 4>>& rects);

/// Thresholds magnitudes at rel_threshold * max into {0,1}.
std::vector<std::uint8_t> binarize(const std::vector<double>& magnitude,
                                   double rel_threshold);

/// Normalized cross-correlation (Pearson) of two equal-length arrays.
/// Returns 0 when either side has zero variance.
double normalized_cross_correlation(const std::vector<std::uint8_t>& a,
                                    const std::vector<std::uint8_t>& b);

}  // namespace nlos
