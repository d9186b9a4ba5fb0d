#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "nlospf/scene.hpp"

namespace nlos {

/// Time-resolved impulse response H(xl, xs, t) on the relay aperture.
///
/// Time origin is the relay surface: bin b spans [b*dt, (b+1)*dt) measured
/// along paths that start at the illuminated point and end at the sensing
/// point; device<->relay legs are never included.
struct ImpulseResponse {
  RelayAperture relay;
  double dt = 0.0;          // seconds per bin
  std::size_t n_bins = 0;
  std::vector<double> values;  // [s_u][s_v][t], size n_u*n_v*n_bins

  std::size_t point_count() const { return relay.count(); }
  std::size_t series_index(std::size_t su, std::size_t sv) const {
    return su * relay.n_v + sv;
  }
  double& at(std::size_t su, std::size_t sv, std::size_t bin) {
    return values[(su * relay.n_v + sv) * n_bins + bin];
  }
  double at(std::size_t su, std::size_t sv, std::size_t bin) const {
    return values[(su * relay.n_v + sv) * n_bins + bin];
  }
  const double* series(std::size_t point_index) const {
    return values.data() + point_index * n_bins;
  }

  double total_energy() const;

  /// All values finite and >= 0, shape consistent.
  void validate() const;
};

/// Writes/reads the NLOSH1 binary dataset format:
///   magic "NLOSH1\0" (7 bytes), then little-endian
///   f64 dt, u32 n_u, u32 n_v, u32 n_bins,
///   f64x3 grid_origin, step_u, step_v, normal, laser_point,
///   then n_u*n_v*n_bins f32 values in [s_u][s_v][t] row-major order.
void save_impulse_response(const ImpulseResponse& h, const std::string& path);
ImpulseResponse load_impulse_response(const std::string& path);

/// Convolves each time series with a Gaussian of the given FWHM (seconds).
/// Total energy is preserved; out-of-window kernel mass folds into the edge
/// bins. fwhm == 0 returns the input unchanged.
ImpulseResponse convolve_sensor_response(const ImpulseResponse& h, double fwhm);

}  // namespace nlos
