#include "nlospf/phasor.hpp"

#include <algorithm>
#include <cmath>

#include "nlospf/parallel.hpp"

namespace nlos {

Complex IlluminationPulse::sample(double t) const {
  const double optical = kSpeedOfLight * t;  // meters
  const double envelope = std::exp(-0.5 * (optical / sigma) * (optical / sigma));
  return std::polar(envelope, 2.0 * M_PI * optical / lambda_c);
}

std::size_t default_dft_len(std::size_t n_bins) {
  std::size_t n = 1;
  while (n < 2 * n_bins) n <<= 1;
  return n;
}

FrequencyBand pulse_spectrum(const IlluminationPulse& pulse, double dt,
                             std::size_t dft_len, double truncation_eps) {
  if (pulse.lambda_c <= 0.0 || pulse.sigma <= 0.0)
    throw ConfigError("pulse: lambda_c and sigma must be > 0");
  if (dt <= 0.0 || dft_len < 2) throw ConfigError("pulse_spectrum: bad dt or dft_len");
  if (truncation_eps <= 0.0 || truncation_eps >= 1.0)
    throw ConfigError("pulse_spectrum: truncation_eps must be in (0,1)");

  const double carrier = kSpeedOfLight / pulse.lambda_c;           // Hz
  const double nyquist = 0.5 / dt;
  if (carrier >= nyquist)
    throw BandEmptyError("carrier " + std::to_string(carrier) +
                         " Hz at or above Nyquist; lambda_c unresolvable at this dt");

  const std::size_t n = dft_len;
  const std::size_t half = n / 2;
  // The pulse is centered at t = 0 with wrap-around for negative times.
  // Samples outside +-9.3 sigma_t are below 2e-19 and are skipped.
  const double sigma_t = pulse.sigma / kSpeedOfLight;
  const std::size_t reach = std::min<std::size_t>(
      half, std::size_t(std::ceil(9.3 * sigma_t / dt)) + 1);

  std::vector<Complex> spectrum(half + 1, Complex{0.0, 0.0});
  auto accumulate_sample = [&](std::size_t idx, double t) {
    const Complex p = pulse.sample(t);
    // e^{-2 pi i k idx / n} stepped over k by repeated rotation.
    const Complex step = std::polar(1.0, -2.0 * M_PI * double(idx) / double(n));
    Complex w = p;
    for (std::size_t k = 0; k <= half; ++k) {
      spectrum[k] += w;
      w *= step;
    }
  };
  accumulate_sample(0, 0.0);
  for (std::size_t m = 1; m <= reach; ++m) {
    accumulate_sample(m, double(m) * dt);
    if (m < half) accumulate_sample(n - m, -double(m) * dt);
  }

  std::size_t peak = 0;
  double peak_mag = 0.0;
  for (std::size_t k = 0; k <= half; ++k) {
    const double m = std::abs(spectrum[k]);
    if (m > peak_mag) {
      peak_mag = m;
      peak = k;
    }
  }
  if (peak_mag <= 0.0) throw BandEmptyError("pulse spectrum is identically zero");

  const double floor_mag = truncation_eps * peak_mag;
  std::size_t lo = peak;
  while (lo > 0 && std::abs(spectrum[lo - 1]) >= floor_mag) --lo;
  std::size_t hi = peak;
  while (hi < half && std::abs(spectrum[hi + 1]) >= floor_mag) ++hi;

  FrequencyBand band;
  band.dt = dt;
  band.dft_len = dft_len;
  band.k0 = lo;
  band.weights.assign(spectrum.begin() + lo, spectrum.begin() + hi + 1);
  band.omegas.resize(band.weights.size());
  for (std::size_t j = 0; j < band.omegas.size(); ++j)
    band.omegas[j] = double(lo + j) / (double(n) * dt);
  return band;
}

PhasorField scene_response(const ImpulseResponse& h, const FrequencyBand& band) {
  if (band.dt != h.dt)
    throw DimensionMismatch("scene_response: band dt differs from histogram dt");
  if (band.dft_len < h.n_bins)
    throw DimensionMismatch("scene_response: dft_len shorter than histogram");

  PhasorField field;
  field.points = h.relay.points();
  field.weights.assign(field.points.size(), h.relay.cell_area());
  field.band = band;
  const std::size_t nw = band.size();
  field.values.assign(field.points.size() * nw, Complex{0.0, 0.0});

  const std::size_t n = band.dft_len;
  parallel_for(field.points.size(), [&](std::size_t p) {
    const double* series = h.series(p);
    Complex* out = field.values.data() + p * nw;
    for (std::size_t b = 0; b < h.n_bins; ++b) {
      const double v = series[b];
      if (v == 0.0) continue;
      // Phase of bin b at DFT bin k: -2 pi k b / n. k*b is reduced mod n in
      // exact integer arithmetic before entering sin/cos.
      const std::size_t kb0 = (band.k0 * b) % n;
      Complex w = std::polar(v, -2.0 * M_PI * double(kb0) / double(n));
      const Complex step = std::polar(1.0, -2.0 * M_PI * double(b % n) / double(n));
      for (std::size_t j = 0; j < nw; ++j) {
        out[j] += w;
        w *= step;
      }
    }
    for (std::size_t j = 0; j < nw; ++j) out[j] *= band.weights[j];
  });
  return field;
}

Complex rsd_kernel(const Point3& a, const Point3& b, double omega) {
  const double r = distance(a, b);
  if (r < 1e-9) throw SingularityError("rsd_kernel: points closer than 1e-9 m");
  const double k = 2.0 * M_PI * omega / kSpeedOfLight;
  return std::polar(1.0 / r, k * r);
}

namespace {

// Shared inner loop: target value accumulation with per-frequency RSD phases
// generated by incremental rotation over the contiguous band.
void propagate_into(const PhasorField& field, const std::vector<Point3>& targets,
                    const Point3* confocal_point, std::vector<Complex>& out) {
  const std::size_t nw = field.band.size();
  const double dw = field.band.delta_omega();
  const double w0 = field.band.omegas.empty() ? 0.0 : field.band.omegas[0];
  out.assign(targets.size() * nw, Complex{0.0, 0.0});

  parallel_for(targets.size(), [&](std::size_t ti) {
    Complex* acc = out.data() + ti * nw;
    const Point3& tgt = targets[ti];
    for (std::size_t s = 0; s < field.points.size(); ++s) {
      const double r = distance(field.points[s], tgt);
      if (r < 1e-9)
        throw SingularityError("propagate: target coincides with a source point");
      const double phase0 = 2.0 * M_PI * w0 * r / kSpeedOfLight;
      const double dphase = 2.0 * M_PI * dw * r / kSpeedOfLight;
      Complex k = std::polar(field.weights[s] / r, phase0);
      const Complex step = std::polar(1.0, dphase);
      const Complex* src = field.values.data() + s * nw;
      for (std::size_t j = 0; j < nw; ++j) {
        acc[j] += src[j] * k;
        k *= step;
      }
    }
    if (confocal_point) {
      const double r = distance(*confocal_point, tgt);
      if (r < 1e-9)
        throw SingularityError("confocal_camera: voxel coincides with the laser point");
      const double phase0 = 2.0 * M_PI * w0 * r / kSpeedOfLight;
      const double dphase = 2.0 * M_PI * dw * r / kSpeedOfLight;
      Complex k = std::polar(1.0 / r, phase0);
      const Complex step = std::polar(1.0, dphase);
      for (std::size_t j = 0; j < nw; ++j) {
        acc[j] *= k;
        k *= step;
      }
    }
  });
}

void check_grid_off_relay(const VoxelGrid& grid, const RelayAperture& relay) {
  bool pos = false, neg = false;
  for (const Point3& p : grid.points()) {
    const double d = dot(p - relay.grid_origin, relay.normal.vec());
    if (d > 1e-9) pos = true;
    if (d < -1e-9) neg = true;
    if ((pos && neg) || std::abs(d) <= 1e-9)
      throw ConfigError("imaging grid intersects the relay plane");
  }
}

}  // namespace

PhasorField propagate(const PhasorField& field, const std::vector<Point3>& targets) {
  if (field.points.empty()) throw DimensionMismatch("propagate: empty source field");
  PhasorField out;
  out.points = targets;
  out.weights.assign(targets.size(), 1.0);
  out.band = field.band;
  propagate_into(field, targets, nullptr, out.values);
  return out;
}

FocalStackImage transient_camera(const PhasorField& response, const VoxelGrid& grid) {
  grid.validate();
  FocalStackImage img;
  img.grid = grid;
  img.band = response.band;
  propagate_into(response, grid.points(), nullptr, img.values);
  return img;
}

FocalStackImage transient_camera(const ImpulseResponse& h, const IlluminationPulse& pulse,
                                 const VoxelGrid& grid) {
  check_grid_off_relay(grid, h.relay);
  const FrequencyBand band = pulse_spectrum(pulse, h.dt, default_dft_len(h.n_bins));
  return transient_camera(scene_response(h, band), grid);
}

FocalStackImage confocal_camera(const PhasorField& response, const Point3& laser_point,
                                const VoxelGrid& grid) {
  grid.validate();
  FocalStackImage img;
  img.grid = grid;
  img.band = response.band;
  propagate_into(response, grid.points(), &laser_point, img.values);
  return img;
}

FocalStackImage confocal_camera(const ImpulseResponse& h, const IlluminationPulse& pulse,
                                const VoxelGrid& grid) {
  check_grid_off_relay(grid, h.relay);
  const FrequencyBand band = pulse_spectrum(pulse, h.dt, default_dft_len(h.n_bins));
  return confocal_camera(scene_response(h, band), h.relay.laser_point, grid);
}

TimeSlice evaluate_at_time(const FocalStackImage& img, double t) {
  TimeSlice slice;
  slice.grid = img.grid;
  slice.t = t;
  const std::size_t nv = img.grid.count();
  const std::size_t nw = img.band.size();
  slice.values.assign(nv, Complex{0.0, 0.0});
  slice.magnitude.assign(nv, 0.0);
  const double w0 = img.band.omegas.empty() ? 0.0 : img.band.omegas[0];
  const double dw = img.band.delta_omega();
  const Complex rot0 = std::polar(1.0, 2.0 * M_PI * w0 * t);
  const Complex step = std::polar(1.0, 2.0 * M_PI * dw * t);
  parallel_for(nv, [&](std::size_t v) {
    const Complex* src = img.values.data() + v * nw;
    Complex acc{0.0, 0.0};
    Complex rot = rot0;
    for (std::size_t j = 0; j < nw; ++j) {
      acc += src[j] * rot;
      rot *= step;
    }
    slice.values[v] = acc;
    slice.magnitude[v] = std::abs(acc);
  });
  return slice;
}

}  // namespace nlos
