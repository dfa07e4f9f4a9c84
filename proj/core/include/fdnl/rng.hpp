#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace fdnl {

// Counter-free deterministic stream RNG (xoshiro256++ seeded through
// splitmix64). Every stochastic object in the library draws from a
// stream derived from (master seed, trajectory id), so a trajectory's
// sample path is a pure function of those two integers no matter how
// many sibling trajectories run concurrently. Normal variates come from
// our own Box-Muller so the sequence does not depend on the C++ standard
// library implementation.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  // Uniform in (0, 1), never exactly 0 (safe under log()).
  double uniform01();
  // Independent standard normal pair (Box-Muller).
  std::pair<double, double> normal_pair();
  // Single standard normal; caches the spare from the last pair.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fdnl
