#include "fdnl/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "fdnl/util.hpp"

namespace fdnl {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint codec assumes a little-endian host");

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

std::uint32_t get_u32(const std::string& s, std::size_t off) {
  std::uint32_t v;
  std::memcpy(&v, s.data() + off, 4);
  return v;
}

}  // namespace

std::string encode_field(const SpectralField& u) {
  std::string out;
  out.reserve(16 + u.c.size() * 16);
  out.append("FDNL", 4);
  put_u32(out, kCheckpointVersion);
  put_u32(out, (std::uint32_t)u.spec.d);
  put_u32(out, (std::uint32_t)u.spec.N);
  for (const cplx& z : u.c) {
    double re = z.real(), im = z.imag();
    char b[16];
    std::memcpy(b, &re, 8);
    std::memcpy(b + 8, &im, 8);
    out.append(b, 16);
  }
  return out;
}

void save_field(const std::filesystem::path& path, const SpectralField& u) {
  atomic_write_file(path, encode_field(u));
}

SpectralField load_field(const std::filesystem::path& path, int q) {
  std::string s = read_file(path);
  if (s.size() < 16 || s.compare(0, 4, "FDNL") != 0)
    throw IoError("checkpoint: bad magic in " + path.string());
  std::uint32_t version = get_u32(s, 4);
  if (version != kCheckpointVersion)
    throw IoError("checkpoint: unsupported version " + std::to_string(version));
  TorusSpec spec;
  spec.d = (int)get_u32(s, 8);
  spec.N = (int)get_u32(s, 12);
  spec.q = q;
  spec.validate();
  std::size_t modes = spec.mode_count();
  if (s.size() != 16 + modes * 16)
    throw IoError("checkpoint: truncated payload in " + path.string());
  SpectralField u = SpectralField::zero(spec);
  for (std::size_t i = 0; i < modes; ++i) {
    double re, im;
    std::memcpy(&re, s.data() + 16 + i * 16, 8);
    std::memcpy(&im, s.data() + 16 + i * 16 + 8, 8);
    u.c[i] = cplx(re, im);
  }
  return u;
}

}  // namespace fdnl
