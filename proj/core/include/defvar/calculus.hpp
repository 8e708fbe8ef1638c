#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>

#include "defvar/expr.hpp"

namespace defvar {

/// Exact symbolic derivative w.r.t. the variable named `v`, applied `order`
/// times. Deformed-operator nodes are not expanded; their derivative is kept
/// as an OpDeriv wrapper until expand_deformed() resolves it.
Expr differentiate(const Expr& e, const std::string& v, int order = 1);

/// Numeric bindings for evaluation. Symbols bind to values; dependent
/// functions bind to callables of their evaluated arguments. Every free
/// symbol/function of the evaluated expression must be bound.
struct Bindings {
  std::map<std::string, double> values;
  std::map<std::string, std::function<double(std::span<const double>)>> functions;

  Bindings& set(const std::string& name, double v) {
    values[name] = v;
    return *this;
  }
  Bindings& set_fn(const std::string& name,
                   std::function<double(std::span<const double>)> f) {
    functions[name] = std::move(f);
    return *this;
  }
};

/// IEEE double evaluation. Derivatives of callable-bound functions are
/// estimated by nested central differences (documented accuracy ~1e-6).
double evaluate(const Expr& e, const Bindings& b);

struct EquivalenceResult {
  bool equivalent = false;
  enum class Path { Structural, Sampled } path = Path::Structural;
  int trials_run = 0;
};

/// True iff simplify(a - b) == 0, or, failing that, |eval(a) - eval(b)| <=
/// tol * (1 + |eval(a)|) at `trials` seeded random non-singular binding
/// points. Symbols and unresolved function/derivative/deformed nodes are
/// sampled as independent positive reals.
EquivalenceResult equivalent_detail(const Expr& a, const Expr& b, int trials,
                                    unsigned long long seed, double tol);
bool equivalent(const Expr& a, const Expr& b, int trials = 24,
                unsigned long long seed = 1234, double tol = 1e-9);

}  // namespace defvar
