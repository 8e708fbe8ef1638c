#pragma once

#include <map>
#include <string>

#include "defvar/expr.hpp"
#include "defvar/num/types.hpp"

namespace defvar::num {

/// Evaluates a symbolic residual (equation written as expression = 0) on a
/// numeric solution using 4th-order central finite-difference stencils, and
/// returns max |residual| over interior points normalized by the largest
/// additive-term magnitude. Symbols other than the grid coordinates must be
/// supplied in `symbol_values`; free functions other than `varname` raise
/// SymbolMismatch.
double residual_check(const Expr& equation, const Trajectory& traj,
                      const std::string& varname,
                      const std::map<std::string, double>& symbol_values);

/// FieldGrid overload; the function argument named "t" is the snapshot time,
/// any other symbol argument is the space coordinate. Requires at least five
/// uniformly spaced snapshots for the time stencil.
double residual_check(const Expr& equation, const FieldGrid& grid,
                      const std::string& varname,
                      const std::map<std::string, double>& symbol_values);

}  // namespace defvar::num
