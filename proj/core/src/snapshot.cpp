#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "reslab/errors.hpp"
#include "reslab/spectral_transform.hpp"

namespace reslab {

namespace {

constexpr char kMagic[8] = {'F', 'H', 'S', 'T', 'A', 'T', 'E', '1'};

template <class T>
void put(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw IoError("snapshot: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const SpectralState& state, const Grid& grid) {
  if (state.samples() != grid.n()) throw InvalidArgument("write_snapshot: state does not match grid");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("snapshot: cannot open " + path + " for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(state.modes()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(grid.n()));
  put<double>(os, grid.length());
  put<double>(os, state.time);
  for (const auto& z : state.data()) {
    put<double>(os, z.real());
    put<double>(os, z.imag());
  }
  if (!os) throw IoError("snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("snapshot: cannot open " + path);
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("snapshot: bad magic in " + path);
  }
  const auto P = get<std::uint32_t>(is);
  const auto n = get<std::uint32_t>(is);
  Snapshot s;
  s.length_x1 = get<double>(is);
  const double time = get<double>(is);
  if (P > (1u << 16) || n > (1u << 24)) throw IoError("snapshot: implausible header in " + path);
  s.n_x1 = static_cast<int>(n);
  s.state = SpectralState(static_cast<int>(P), static_cast<int>(n));
  s.state.time = time;
  for (auto& z : s.state.data()) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    z = {re, im};
  }
  return s;
}

}  // namespace reslab
