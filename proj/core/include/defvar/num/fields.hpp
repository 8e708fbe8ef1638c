#pragma once

#include <functional>
#include <span>

#include "defvar/num/types.hpp"

namespace defvar::num {

struct RcdParams {
  std::vector<double> K;      // diagonal diffusivity per dimension
  std::vector<double> gamma;  // flow velocity per dimension
  double beta = 0.0;
  // source f(t, x); x has one entry per dimension
  std::function<double(double, std::span<const double>)> f;
};

struct GridSpec {
  std::vector<double> x0;
  std::vector<double> dx;
  std::vector<size_t> points;
  Boundary boundary = Boundary::Periodic;
};

/// Method-of-lines reaction-convection-diffusion in n = 1, 2 or 3 space
/// dimensions: dU/dt + gamma . grad U - div(K grad U) + beta U = f.
/// Upwind convection, central diffusion, RK4 in time. The explicit-scheme
/// stability bound dt <= 1 / (2 sum K_i/dx_i^2 + sum |gamma_i|/dx_i) is
/// checked up front (CFLViolation). For n > 1 the snapshots are stored
/// flattened in row-major order and FieldGrid reflects the first dimension.
FieldGrid simulate_rcd(const RcdParams& p, const GridSpec& grid,
                       std::span<const double> u0, double t1, double dt,
                       size_t snapshots = 11);

enum class FpVariant { Linear, Nonlinear1, Nonlinear2 };

struct FpParams {
  std::function<double(double)> drift;  // f(x)
  double D = 1.0;
  double mu = 1.0;  // Nonlinear1 / Nonlinear2
  double nu = 1.0;  // Nonlinear2
  FpVariant variant = FpVariant::Linear;
};

/// Conservative finite-volume Fokker-Planck solver on a uniform 1-D grid.
/// Linear: dP/dt = -d/dx(f P) + D d2P/dx2, flux form with centered
/// averages so the discrete normalization telescopes exactly up to boundary
/// flux. Nonlinear1 evolves P with diffusion flux D P^(mu-1) dP/dx plus the
/// non-divergence sink -(1/2)(mu-1) D (dP/dx)^2 P^(mu-2) produced by the
/// derivation. Nonlinear2 evolves Q = P^mu conservatively with flux
/// f Q - D P^(nu-1) dP/dx. Negative densities are clamped and counted in
/// meta["negative_clamps"]. The "norm" conserved series records the
/// variant's conserved integral (int P, or int P^mu for Nonlinear2).
FieldGrid simulate_fokker_planck(const FpParams& p, double x0, double dx,
                                 size_t points, Boundary boundary,
                                 std::span<const double> p0, double t1,
                                 double dt, size_t snapshots = 11);

/// Heat-kernel reference solution on an unbounded domain (used against
/// periodic runs whose support stays away from the boundary).
double heat_kernel_solution(double K, double t, double x, double sigma0,
                            double amplitude);

}  // namespace defvar::num
