#pragma once

#include <optional>
#include <string>
#include <vector>

#include "defvar/expr.hpp"

namespace defvar {

/// One dynamical variable of a Lagrangian: a dependent function together
/// with the interval-start symbol per independent variable (for the
/// interval-form kernels and the a -> b limit).
struct DynamicalVar {
  std::string name;                      // "x", "phi", ...
  std::vector<std::string> independents; // {"t"} or {"x","t"}
  std::vector<Expr> interval_starts;     // lower endpoints, aligned with independents
};

struct LagrangianSpec {
  Expr lagrangian;
  std::vector<DynamicalVar> variables;
  std::vector<std::string> sources;  // functions that are never varied (noise, drives)
};

/// Result of a deformed Euler-Lagrange derivation. The pre-limit residual is
/// fully expanded (all deformed operators resolved to kernel factors); the
/// post-limit residual and dropped terms are filled in by the limit passes.
struct ELResult {
  std::string variable;
  Expr pre_limit;
  Expr post_limit;
  std::vector<Expr> dropped_terms;
  std::vector<std::string> limits_applied;
};

/// Functional partial dL/d(slot) with the slot subtree treated as an
/// independent variable; derivative and deformed nodes other than the slot
/// itself are opaque.
Expr slot_partial(const Expr& lagrangian, const Expr& slot);

/// Four-term deformed E-L residual for a particle variable y(t):
///   dL/dy - D1[dL/d(D1 y)] - D1[k * dL/d(Dk y)] + D2[k * dL/d(Dk(D1 y))]
/// with one kernel-weighted term per distinct deformed slot found in L.
/// Deformed operators applied to composite expressions (e.g. Dk(P^mu)) are
/// expanded before slot extraction. post_limit is initialized to pre_limit.
ELResult euler_lagrange_particle(const LagrangianSpec& spec, const std::string& y);

/// Field form: the same four-term pattern summed over the field's
/// independent coordinates, with per-coordinate interval kernels.
ELResult euler_lagrange_field(const LagrangianSpec& spec, const std::string& phi);

/// One ELResult per dynamical variable (doubled-variable Lagrangians).
std::vector<ELResult> euler_lagrange_system(const LagrangianSpec& spec);

struct IntervalLimitResult {
  Expr post;
  std::vector<Expr> dropped;  // terms proportional to positive powers of (v - a)
};

/// The a -> b limit: after full expansion, drops every additive term that
/// carries a strictly positive power of `interval` (= v - a as an expression).
/// Terms with exponents linear in a single symbol are sign-determined under
/// the 0 < alpha < 1 convention. A negative power throws LimitSingular.
IntervalLimitResult take_limit_interval(const Expr& e, const Expr& interval);

/// The alpha -> 1 limit: substitutes the symbol and re-simplifies.
Expr take_limit_alpha(const Expr& e, const std::string& alpha);

/// Legendre transform for a Lagrangian quadratic in the deformed velocity
/// D_k q: eliminates D_k q via the conjugate momentum and rewrites it as
/// k(t) * p / m so the Hamiltonian comes out in (q, p, t). Throws
/// NonInvertibleMomentum when d2L/d(Dk q)^2 vanishes.
Expr legendre_transform(const LagrangianSpec& spec, const std::string& q);

/// Second-order equation of motion obtained from Hamilton's equations
/// qdot = dH/dp, pdot = -dH/dq by eliminating p (requires dH/dp linear in p).
Expr hamilton_equation_of_motion(const Expr& hamiltonian, const std::string& q,
                                 const std::string& p, const std::string& t);

}  // namespace defvar
