#pragma once

#include "defvar/expr.hpp"

namespace defvar {

/// Canonical normal form: nested sums/products flattened, constants folded,
/// like terms collected, powers of identical bases merged, children in
/// canonical order. Idempotent. Products of sums are NOT distributed; use
/// expand() for that.
Expr simplify(const Expr& e);

/// Full distribution of products and positive integer powers over sums,
/// applied recursively, then simplified. Non-integer powers of sums are
/// kept atomic.
Expr expand(const Expr& e);

/// Multiplies by -1 if the canonically first term of the simplified
/// expression has a negative leading coefficient. Residuals compare up to
/// overall sign; this picks the representative.
Expr sign_normalize(const Expr& e);

}  // namespace defvar
