#pragma once

#include <cstdint>

#include "defvar/num/types.hpp"

namespace defvar::num {

struct SbmParams {
  double m = 1.0;
  double gamma0 = 1.0;
  double D0 = 0.5;
  double tau = 1.0;
  double alpha = 0.5;  // 0 < alpha <= 1; alpha = 1 is the OU limit
  double x0 = 0.0;
  double v0 = 0.0;
};

/// Euler-Maruyama ensemble for the scaled-Brownian-motion Langevin equation
///   m x'' + gamma(t) x' = sqrt(2 D(t)) gamma(t) zeta(t),
///   gamma(t) = gamma0 (1+t/tau)^(alpha-1), D(t) = D0 (1+t/tau)^(alpha-1),
/// with independent per-trajectory counter-based streams derived from
/// (seed, index). Results are bit-identical for a fixed seed regardless of
/// thread count. Checkpoints are ~max_checkpoints evenly spaced grid times.
EnsembleStats simulate_langevin_sbm(const SbmParams& p, std::size_t ensemble,
                                    std::uint64_t seed, double t1, double dt,
                                    std::size_t max_checkpoints = 200,
                                    unsigned threads = 0);

/// Deterministic moment-equation oracle for the same linear SDE: RK4 on the
/// closed system for <x>, <v>, <x^2>, <xv>, <v^2>; returns MSD(t) = <x^2> -
/// <x>^2 and <v^2> on the same checkpoint grid.
struct MomentOracle {
  std::vector<double> t;
  std::vector<double> msd;
  std::vector<double> mean_v2;
};
MomentOracle sbm_moment_oracle(const SbmParams& p, double t1, double dt,
                               std::size_t max_checkpoints = 200);

/// Single deterministic trajectory (D0 = 0 reference path).
std::vector<double> sbm_deterministic_x(const SbmParams& p, double t1, double dt,
                                        std::size_t max_checkpoints = 200);

}  // namespace defvar::num
