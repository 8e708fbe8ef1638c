#pragma once

#include <array>

#include "defvar/num/types.hpp"

namespace defvar::num {

struct LlgParams {
  std::array<double, 3> H = {0.0, 0.0, 1.0};  // external field (H_eff)
  double g = -1.0;                            // gyromagnetic-like parameter
  double kappa_c = 0.0;                       // damping product kappa*c
  std::array<double, 3> m0 = {1.0, 0.0, 0.0};
};

/// Explicit Landau-Lifshitz form with gamma = -1/g, alpha = kappa_c * gamma:
///   dm/dt = -gamma/(1+alpha^2) m x H - alpha gamma/(1+alpha^2) m x (m x H)
/// integrated with RK4 plus per-step projection back to |m| = 1. Throws
/// NormDrift when a step moves |m| by more than 1e-8 before projection is
/// unable to fix it. Columns: t, m1, m2, m3, norm, energy (-m.H).
Trajectory simulate_llg(const LlgParams& p, double t1, double dt);

/// Pointwise residual of the implicit LLG form
///   dm/dt - (1/g) m x H_eff + (kappa c / g) m x dm/dt
/// evaluated along a trajectory with centered differences; returns the max
/// norm over interior points.
double llg_implicit_residual(const Trajectory& traj, const LlgParams& p);

}  // namespace defvar::num
