#pragma once

#include <functional>

#include "defvar/expr.hpp"

namespace defvar {

/// Symbolic kernel factor k(v): (v-a)^(1-alpha), e^(-lambda v) or
/// e^(-lambda v/2), l0 (1+v/l0)^(1-alpha), or 1.
Expr kernel_factor(const Kernel& k, const std::string& var);

/// Rewrites every deformed-operator node D_k[v](f) to k(v) * df/dv,
/// recursively, resolving OpDeriv wrappers along the way; result simplified.
Expr expand_deformed(const Expr& e);

/// Numeric deformed derivative via the defining limit quotient
/// [f(x + h k(x)) - f(x)] / h. Kernel parameters must be numeric.
/// Cross-validates expand_deformed. Throws EvalSingularity at x = a for a
/// conformable kernel with alpha < 1.
double eval_deformed_numeric(const std::function<double(double)>& f,
                             const Kernel& k, double x, double h);

}  // namespace defvar
