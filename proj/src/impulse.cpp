#include "nlospf/impulse.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace nlos {

static_assert(std::endian::native == std::endian::little,
              "NLOSH1 I/O assumes a little-endian host");

double ImpulseResponse::total_energy() const {
  double e = 0.0;
  for (double v : values) e += v;
  return e;
}

void ImpulseResponse::validate() const {
  relay.validate();
  if (dt <= 0.0) throw ConfigError("impulse response: dt must be > 0");
  if (values.size() != relay.count() * n_bins)
    throw DimensionMismatch("impulse response: value array size mismatch");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ConfigError("impulse response: values must be finite and >= 0");
}

namespace {

constexpr char kMagic[7] = {'N', 'L', 'O', 'S', 'H', '1', '\0'};

template <typename T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

void write_vec3(std::ostream& os, const Vec3& v) {
  write_raw(os, v.x);
  write_raw(os, v.y);
  write_raw(os, v.z);
}

Vec3 read_vec3(std::istream& is) {
  Vec3 v;
  v.x = read_raw<double>(is);
  v.y = read_raw<double>(is);
  v.z = read_raw<double>(is);
  return v;
}

}  // namespace

void save_impulse_response(const ImpulseResponse& h, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_raw(os, h.dt);
  write_raw(os, std::uint32_t(h.relay.n_u));
  write_raw(os, std::uint32_t(h.relay.n_v));
  write_raw(os, std::uint32_t(h.n_bins));
  write_vec3(os, h.relay.grid_origin);
  write_vec3(os, h.relay.step_u);
  write_vec3(os, h.relay.step_v);
  write_vec3(os, h.relay.normal.vec());
  write_vec3(os, h.relay.laser_point);
  std::vector<float> buf(h.values.size());
  for (std::size_t i = 0; i < h.values.size(); ++i) buf[i] = float(h.values[i]);
  os.write(reinterpret_cast<const char*>(buf.data()),
           std::streamsize(buf.size() * sizeof(float)));
  if (!os) throw IoError("short write: " + path);
}

ImpulseResponse load_impulse_response(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  char magic[7];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError("not an NLOSH1 dataset: " + path);
  ImpulseResponse h;
  h.dt = read_raw<double>(is);
  h.relay.n_u = read_raw<std::uint32_t>(is);
  h.relay.n_v = read_raw<std::uint32_t>(is);
  h.n_bins = read_raw<std::uint32_t>(is);
  h.relay.grid_origin = read_vec3(is);
  h.relay.step_u = read_vec3(is);
  h.relay.step_v = read_vec3(is);
  h.relay.normal = Dir3(read_vec3(is));
  h.relay.laser_point = read_vec3(is);
  if (!is) throw IoError("truncated NLOSH1 header: " + path);
  const std::size_t n = h.relay.count() * h.n_bins;
  std::vector<float> buf(n);
  is.read(reinterpret_cast<char*>(buf.data()), std::streamsize(n * sizeof(float)));
  if (!is) throw IoError("truncated NLOSH1 payload: " + path);
  h.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) h.values[i] = double(buf[i]);
  return h;
}

ImpulseResponse convolve_sensor_response(const ImpulseResponse& h, double fwhm) {
  if (fwhm < 0.0) throw ConfigError("sensor fwhm must be >= 0");
  if (fwhm == 0.0) return h;
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const int half = std::max(1, int(std::ceil(5.0 * sigma / h.dt)));
  std::vector<double> kernel(2 * half + 1);
  double ksum = 0.0;
  for (int j = -half; j <= half; ++j) {
    const double t = j * h.dt;
    kernel[j + half] = std::exp(-0.5 * (t / sigma) * (t / sigma));
    ksum += kernel[j + half];
  }
  for (double& k : kernel) k /= ksum;

  ImpulseResponse out = h;
  const std::size_t np = h.point_count();
  const int nb = int(h.n_bins);
  for (std::size_t p = 0; p < np; ++p) {
    const double* src = h.series(p);
    double* dst = out.values.data() + p * h.n_bins;
    std::fill(dst, dst + h.n_bins, 0.0);
    for (int b = 0; b < nb; ++b) {
      const double v = src[b];
      if (v == 0.0) continue;
      for (int j = -half; j <= half; ++j) {
        int idx = b + j;
        if (idx < 0) idx = 0;          // fold out-of-window mass into the
        if (idx >= nb) idx = nb - 1;   // boundary bins to conserve energy
        dst[idx] += v * kernel[j + half];
      }
    }
  }
  return out;
}

}  // namespace nlos
