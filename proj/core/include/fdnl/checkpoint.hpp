#pragma once

#include <filesystem>

#include "fdnl/torus.hpp"

namespace fdnl {

// Binary field checkpoint, byte-exact layout:
//   bytes 0..3   magic "FDNL"
//   u32 LE       version (currently 1)
//   u32 LE       d
//   u32 LE       N
//   then (2N+1)^d coefficient pairs (re, im), IEEE-754 binary64 LE,
//   lexicographic wavevector order with each axis running -N..N.
// The grid oversampling q is runtime policy, not state, so it is not
// stored; load_field assigns the caller-supplied q.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_field(const std::filesystem::path& path, const SpectralField& u);
SpectralField load_field(const std::filesystem::path& path, int q = 4);

// In-memory encoding (exact file bytes), used for content hashes.
std::string encode_field(const SpectralField& u);

}  // namespace fdnl
