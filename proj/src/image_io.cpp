#include "nlospf/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace nlos {

void write_png_gray(const std::string& path, std::size_t width, std::size_t height,
                    const std::vector<double>& values, bool log_scale) {
  if (values.size() != width * height)
    throw DimensionMismatch("write_png_gray: value count != width*height");
  const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());

  std::vector<unsigned char> bytes(values.size(), 0);
  if (peak > 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      double v = std::max(0.0, values[i]) / peak;
      if (log_scale) v = v <= 1e-4 ? 0.0 : 1.0 + std::log10(v) / 4.0;
      bytes[i] = static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
    }
  }

  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw IoError("cannot open for writing: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    std::fclose(fp);
    throw IoError("libpng failure writing: " + path);
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t row = 0; row < height; ++row)
    png_write_row(png, const_cast<png_bytep>(bytes.data() + row * width));
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

void write_slice_png(const std::string& path, const TimeSlice& slice, bool log_scale) {
  if (slice.grid.n_w != 1)
    throw DimensionMismatch("write_slice_png: PNG export needs a planar grid");
  write_png_gray(path, slice.grid.n_v, slice.grid.n_u, slice.magnitude, log_scale);
}

namespace {
constexpr char kRawMagic[7] = {'N', 'L', 'O', 'S', 'F', '1', '\0'};
}

void write_raw_image(const std::string& path, std::size_t n_u, std::size_t n_v,
                     std::size_t n_w, const std::vector<double>& values) {
  if (values.size() != n_u * n_v * n_w)
    throw DimensionMismatch("write_raw_image: value count mismatch");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(kRawMagic, sizeof(kRawMagic));
  const std::uint32_t dims[3] = {std::uint32_t(n_u), std::uint32_t(n_v), std::uint32_t(n_w)};
  os.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  std::vector<float> buf(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) buf[i] = float(values[i]);
  os.write(reinterpret_cast<const char*>(buf.data()),
           std::streamsize(buf.size() * sizeof(float)));
  if (!os) throw IoError("short write: " + path);
}

std::vector<float> read_raw_image(const std::string& path, std::size_t& n_u,
                                  std::size_t& n_v, std::size_t& n_w) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  char magic[7];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kRawMagic, sizeof(kRawMagic)) != 0)
    throw IoError("not an NLOSF1 image: " + path);
  std::uint32_t dims[3];
  is.read(reinterpret_cast<char*>(dims), sizeof(dims));
  n_u = dims[0];
  n_v = dims[1];
  n_w = dims[2];
  std::vector<float> buf(std::size_t(dims[0]) * dims[1] * dims[2]);
  is.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size() * sizeof(float)));
  if (!is) throw IoError("truncated NLOSF1 image: " + path);
  return buf;
}

void write_slice_csv(const std::string& path, const TimeSlice& slice) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "i,j,k,x,y,z,magnitude,real,imag\n";
  char buf[256];
  const auto& g = slice.grid;
  for (std::size_t i = 0; i < g.n_u; ++i)
    for (std::size_t j = 0; j < g.n_v; ++j)
      for (std::size_t k = 0; k < g.n_w; ++k) {
        const Point3 p = g.point(i, j, k);
        const std::size_t v = g.index(i, j, k);
        std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                      i, j, k, p.x, p.y, p.z, slice.magnitude[v],
                      slice.values[v].real(), slice.values[v].imag());
        os << buf;
      }
  if (!os) throw IoError("short write: " + path);
}

}  // namespace nlos
