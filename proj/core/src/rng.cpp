#include "fdnl/rng.hpp"

#include <cmath>

namespace fdnl {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
  // Mix the pair through splitmix64 so neighbouring ids give unrelated
  // streams; the all-zero state is unreachable from this construction.
  std::uint64_t x = master_seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
  for (auto& word : s_) word = splitmix64(x);
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform01() {
  // 53 random bits into (0, 1]; flip to [2^-53, 1] never returning 0.
  return double((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::pair<double, double> RngStream::normal_pair() {
  double u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  auto [a, b] = normal_pair();
  spare_ = b;
  has_spare_ = true;
  return a;
}

}  // namespace fdnl
