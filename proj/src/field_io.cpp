#include "ist/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace ist {

static_assert(std::endian::native == std::endian::little,
              "ISTF writer assumes a little-endian host");

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
double get_f64(std::istream& is) {
  double v;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("ISTF: cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path, std::uint32_t* dim) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("ISTF: cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "ISTF", 4) != 0) throw IoError("ISTF: bad magic in " + path);
  if (get_u32(is) != 1) throw IoError("ISTF: unsupported version in " + path);
  *dim = get_u32(is);
  return is;
}

void put_samples(std::ostream& os, const std::vector<cd>& v) {
  for (const cd& z : v) {
    put_f64(os, z.real());
    put_f64(os, z.imag());
  }
}

void get_samples(std::istream& is, std::vector<cd>& v) {
  for (cd& z : v) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    z = cd(re, im);
  }
  if (!is) throw IoError("ISTF: truncated sample payload");
}

}  // namespace

void write_istf(const std::string& path, const ComplexField1D& f) {
  auto os = open_out(path);
  os.write("ISTF", 4);
  put_u32(os, 1);
  put_u32(os, 1);
  put_u32(os, std::uint32_t(f.grid.n));
  put_f64(os, f.grid.half_width);
  put_samples(os, f.v);
  if (!os) throw IoError("ISTF: write failed: " + path);
}

void write_istf(const std::string& path, const ComplexField2D& f) {
  auto os = open_out(path);
  os.write("ISTF", 4);
  put_u32(os, 1);
  put_u32(os, 2);
  put_u32(os, std::uint32_t(f.grid.n1));
  put_u32(os, std::uint32_t(f.grid.n2));
  put_f64(os, f.grid.half_width1);
  put_f64(os, f.grid.half_width2);
  put_samples(os, f.v);
  if (!os) throw IoError("ISTF: write failed: " + path);
}

ComplexField1D read_istf_1d(const std::string& path) {
  std::uint32_t dim;
  auto is = open_in(path, &dim);
  if (dim != 1) throw IoError("ISTF: expected a 1D snapshot: " + path);
  const std::uint32_t n = get_u32(is);
  const double L = get_f64(is);
  ComplexField1D f(Grid1D(int(n), L));
  get_samples(is, f.v);
  return f;
}

ComplexField2D read_istf_2d(const std::string& path) {
  std::uint32_t dim;
  auto is = open_in(path, &dim);
  if (dim != 2) throw IoError("ISTF: expected a 2D snapshot: " + path);
  const std::uint32_t n1 = get_u32(is);
  const std::uint32_t n2 = get_u32(is);
  const double L1 = get_f64(is);
  const double L2 = get_f64(is);
  ComplexField2D f(Grid2D(int(n1), int(n2), L1, L2));
  get_samples(is, f.v);
  return f;
}

int istf_dimension(const std::string& path) {
  std::uint32_t dim;
  open_in(path, &dim);
  return int(dim);
}

}  // namespace ist
