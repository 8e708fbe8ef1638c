#pragma once

#include <span>

#include "defvar/num/types.hpp"

namespace defvar::num {

enum class KdvScheme { PseudoSpectral, ZabuskyKruskal };

/// Periodic KdV integrator for phi_t + phi_xxx - 6 phi phi_x = 0.
/// PseudoSpectral: integrating-factor RK4 in Fourier space with 2/3-rule
/// dealiasing (grid size must be a power of two). ZabuskyKruskal: the
/// classic conservative leapfrog as an independent cross-check scheme,
/// bootstrapped with one RK4 step. Records int(phi) dx and int(phi^2) dx
/// per snapshot. Throws CFLViolation when dt is outside the scheme's
/// stability bound and NonFiniteState on blow-up.
FieldGrid simulate_kdv(std::span<const double> phi0, double x0, double dx,
                       double t1, double dt,
                       KdvScheme scheme = KdvScheme::PseudoSpectral,
                       size_t snapshots = 11);

/// One-soliton profile phi(x, t) = -(c/2) sech^2(sqrt(c) (x - c t) / 2).
double kdv_soliton(double c, double x, double t);

}  // namespace defvar::num
