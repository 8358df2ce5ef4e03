#include "anspde/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "anspde/field_ops.hpp"

namespace anspde {

namespace {
constexpr char kMagic[4] = {'A', 'N', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}
void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), 8);
}
std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
}  // namespace

void write_snapshot(const std::string& path, const VectorField& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open snapshot file for writing: " + path);
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  for (int d = 0; d < 3; ++d) put_u32(os, std::uint32_t(f.grid->resolution()[d]));
  for (int d = 0; d < 3; ++d) put_f64(os, f.grid->box_lengths()[d]);
  for (int c = 0; c < 3; ++c) {
    static_assert(sizeof(std::complex<double>) == 16);
    os.write(reinterpret_cast<const char*>(f.comp[c].data()),
             std::streamsize(sizeof(std::complex<double>) * f.comp[c].size()));
  }
  if (!os) throw std::runtime_error("snapshot write failed: " + path);
}

VectorField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open snapshot file: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not an ANSF snapshot: " + path);
  const std::uint32_t version = get_u32(is);
  if (version != kVersion) throw std::runtime_error("unsupported ANSF version");
  std::array<int, 3> n;
  for (int d = 0; d < 3; ++d) n[d] = int(get_u32(is));
  std::array<double, 3> len;
  for (int d = 0; d < 3; ++d) len[d] = get_f64(is);
  VectorField f = VectorField::zero(Grid::make(n, len));
  for (int c = 0; c < 3; ++c) {
    is.read(reinterpret_cast<char*>(f.comp[c].data()),
            std::streamsize(sizeof(std::complex<double>) * f.comp[c].size()));
  }
  if (!is) throw std::runtime_error("snapshot truncated: " + path);
  f.divfree = max_relative_divergence(f) <= 1e-10;
  return f;
}

}  // namespace anspde
