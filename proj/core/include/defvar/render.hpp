#pragma once

#include <map>
#include <string>
#include <vector>

#include "defvar/expr.hpp"

namespace defvar {

enum class Format { Plain, Latex, Sexpr };

/// Deterministic text rendering. Sexpr output round-trips exactly through
/// parse(); plain output re-parses to an equivalent expression.
std::string render(const Expr& e, Format format = Format::Plain);

/// Parses the documented expression grammar (see docs/grammar.md): infix
/// arithmetic, f(args), primes f'(t), d/dv and d^n/dv^n operators, d(expr,v)
/// call form, D[kernel,v](expr) deformed derivatives, exp(u), and the sexpr
/// serialization. Returns a canonical expression; throws ParseError.
Expr parse(const std::string& text);

/// Like parse(), but bare identifiers listed in `dynamical` are promoted to
/// dependent functions of the given independent variables, so that
/// "1/2*m*d(x,t)^2" with x declared over t reads as x(t).
Expr parse(const std::string& text,
           const std::map<std::string, std::vector<std::string>>& dynamical);

}  // namespace defvar
