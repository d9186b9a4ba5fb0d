#pragma once
#include <complex>
#include <cstddef>
#include <vector>

#include "nlospf/impulse.hpp"
#include "nlospf/scene.hpp"

namespace nlos {

using Complex = std::complex<double>;

/// Illumination pulse: complex carrier with a Gaussian envelope. Both the
/// central wavelength and the envelope deviation are optical lengths [m].
struct IlluminationPulse {
  double lambda_c = 0.03;
  double sigma = 0.03;

  /// Sample value at time t [s]: e^{i 2 pi ct/lambda_c - (ct/sigma)^2 / 2}.
  Complex sample(double t) const;
};

/// Retained slice of the pulse spectrum. Frequencies are contiguous DFT bins
/// k0 .. k0+size-1 of an implicit length-dft_len transform at resolution
/// 1/(dft_len*dt), so omegas[j] = (k0+j) / (dft_len*dt).
struct FrequencyBand {
  double dt = 0.0;
  std::size_t dft_len = 0;
  std::size_t k0 = 0;
  std::vector<Complex> weights;  // pulse spectrum per retained bin
  std::vector<double> omegas;    // Hz

  std::size_t size() const { return weights.size(); }
  double delta_omega() const { return 1.0 / (double(dft_len) * dt); }
};

/// Complex amplitudes per spatial point per retained frequency.
struct PhasorField {
  std::vector<Point3> points;
  std::vector<double> weights;  // per-point area element [m^2]
  FrequencyBand band;
  std::vector<Complex> values;  // [point][omega]

  Complex& at(std::size_t p, std::size_t w) { return values[p * band.size() + w]; }
  Complex at(std::size_t p, std::size_t w) const { return values[p * band.size() + w]; }
};

/// Complex per-voxel per-frequency image; evaluable at any time t.
struct FocalStackImage {
  VoxelGrid grid;
  FrequencyBand band;
  std::vector<Complex> values;  // [voxel][omega]

  Complex& at(std::size_t v, std::size_t w) { return values[v * band.size() + w]; }
  Complex at(std::size_t v, std::size_t w) const { return values[v * band.size() + w]; }
};

/// One time frame of a focal-stack image.
struct TimeSlice {
  VoxelGrid grid;
  double t = 0.0;
  std::vector<Complex> values;
  std::vector<double> magnitude;
};

/// Smallest power of two >= 2*n_bins (zero padding against circular
/// wraparound of the illumination convolution).
std::size_t default_dft_len(std::size_t n_bins);

/// DFT of the sampled pulse, truncated to the contiguous run of bins around
/// the carrier whose magnitude stays above truncation_eps * peak.
/// Throws BandEmptyError when the carrier is unresolvable at this dt.
FrequencyBand pulse_spectrum(const IlluminationPulse& pulse, double dt,
                             std::size_t dft_len, double truncation_eps = 1e-3);

/// Frequency-domain response of the scene to the pulse at every aperture
/// point: P(xs, w) = P(xl, w) * H(xl, xs, w) on the retained band.
PhasorField scene_response(const ImpulseResponse& h, const FrequencyBand& band);

/// Rayleigh-Sommerfeld propagation factor e^{ik|b-a|} / |b-a| with
/// k = 2 pi omega / c. Throws SingularityError below 1e-9 m separation.
Complex rsd_kernel(const Point3& a, const Point3& b, double omega);

/// Huygens superposition: each target value is the area-weighted sum of
/// source values propagated by the RSD kernel.
PhasorField propagate(const PhasorField& field, const std::vector<Point3>& targets);

/// Virtual camera focusing the aperture response at each grid point:
/// f_tc(xv, w) = sum_xs rsd(xs, xv, w) P(xs, w) dA.
FocalStackImage transient_camera(const ImpulseResponse& h, const IlluminationPulse& pulse,
                                 const VoxelGrid& grid);
FocalStackImage transient_camera(const PhasorField& response, const VoxelGrid& grid);

/// Confocal camera: additionally delays the illumination leg per voxel,
/// f_cc(xv, w) = rsd(xl, xv, w) * f_tc(xv, w), computed in its own loop.
FocalStackImage confocal_camera(const ImpulseResponse& h, const IlluminationPulse& pulse,
                                const VoxelGrid& grid);
FocalStackImage confocal_camera(const PhasorField& response, const Point3& laser_point,
                                const VoxelGrid& grid);

/// Inverse transform restricted to the retained band:
/// f(v, t) = sum_w values[v][w] e^{+i 2 pi w t}.
TimeSlice evaluate_at_time(const FocalStackImage& img, double t);

}  // namespace nlos
