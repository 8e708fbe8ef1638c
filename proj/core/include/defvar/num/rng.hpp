#pragma once

#include <cstdint>

namespace defvar::num {

/// Counter-based random stream: stream i of seed s draws its n-th variate
/// from splitmix64(mix(s) ^ mix(i * GOLDEN) + n * GOLDEN). Trajectories can
/// therefore run in parallel and still reproduce bit-identically in any
/// execution order. Gaussians come from a Box-Muller pair (no rejection, so
/// the variate count per step is fixed).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  double uniform();   // [0, 1)
  double gaussian();  // standard normal

 private:
  std::uint64_t next_u64();

  std::uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace defvar::num
