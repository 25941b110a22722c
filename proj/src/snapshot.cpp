#include "focf/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace focf {

namespace {

constexpr char kMagic[5] = {'F', 'O', 'C', 'F', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>((v >> (8 * k)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | b[k];
  return v;
}

void put_f64(std::ostream& os, double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, 8);
  put_u64(os, v);
}

double get_f64(std::istream& is) {
  std::uint64_t v = get_u64(is);
  double x;
  std::memcpy(&x, &v, 8);
  return x;
}

void put_plane(std::ostream& os, const Plane& p) {
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) put_f64(os, p(i, j));
}

Plane get_plane(std::istream& is, int n1, int n2) {
  Plane p(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) p(i, j) = get_f64(is);
  return p;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const MetricField2& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open snapshot for writing: " + path.string());
  os.write(kMagic, 5);
  put_u64(os, 2);
  put_u64(os, static_cast<std::uint64_t>(g.grid.n1));
  put_u64(os, static_cast<std::uint64_t>(g.grid.n2));
  put_f64(os, g.grid.len1);
  put_f64(os, g.grid.len2);
  put_plane(os, g.g11);
  put_plane(os, g.g12);
  put_plane(os, g.g22);
  if (!os) throw Error("snapshot write failed: " + path.string());
}

MetricField2 read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open snapshot: " + path.string());
  char magic[5];
  is.read(magic, 5);
  if (!is || std::memcmp(magic, kMagic, 5) != 0)
    throw Error("bad snapshot magic: " + path.string());
  std::uint64_t n = get_u64(is);
  if (n != 2) throw Error("unsupported snapshot dimension");
  int n1 = static_cast<int>(get_u64(is));
  int n2 = static_cast<int>(get_u64(is));
  double l1 = get_f64(is);
  double l2 = get_f64(is);
  MetricField2 g(Grid2(n1, n2, l1, l2));
  g.g11 = get_plane(is, n1, n2);
  g.g12 = get_plane(is, n1, n2);
  g.g22 = get_plane(is, n1, n2);
  if (!is) throw Error("snapshot truncated: " + path.string());
  return g;
}

}  // namespace focf
