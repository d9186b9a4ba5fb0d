#pragma once
#include <string>
#include <vector>

#include "nlospf/phasor.hpp"

namespace nlos {

/// 8-bit grayscale PNG of a planar magnitude image, normalized to the
/// per-image maximum. log_scale maps four decades below the peak.
void write_png_gray(const std::string& path, std::size_t width, std::size_t height,
                    const std::vector<double>& values, bool log_scale = false);

/// Planar time slice as PNG (rows = u index, columns = v index).
void write_slice_png(const std::string& path, const TimeSlice& slice,
                     bool log_scale = false);

/// Raw float dump: magic "NLOSF1\0", u32 n_u, n_v, n_w (little endian),
/// then n_u*n_v*n_w f32 values in [u][v][w] order.
void write_raw_image(const std::string& path, std::size_t n_u, std::size_t n_v,
                     std::size_t n_w, const std::vector<double>& values);
std::vector<float> read_raw_image(const std::string& path, std::size_t& n_u,
                                  std::size_t& n_v, std::size_t& n_w);

/// Per-voxel CSV: indices, position, magnitude, real, imaginary.
void write_slice_csv(const std::string& path, const TimeSlice& slice);

}  // namespace nlos
