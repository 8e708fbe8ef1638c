#include <cmath>
#include <numbers>

#include "defvar/calculus.hpp"
#include "defvar/kernel.hpp"

namespace defvar {

namespace {

struct FnEval {
  const std::function<double(std::span<const double>)>* fn;
};

double eval_rec(const Expr& e, const Bindings& b);

// Nested central differences for derivatives of callable-bound functions.
// Step sizes chosen to balance truncation against roundoff; accuracy is
// adequate for cross-checks (~1e-6 for first/second order).
double fd_slot_derivative(const std::function<double(std::span<const double>)>& fn,
                          std::vector<double> args, std::vector<int> orders) {
  for (size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] > 0) {
      int total = 0;
      for (int o : orders) total += o;
      double h = total <= 1 ? 1e-5 : (total == 2 ? 1e-4 : 1e-3);
      std::vector<int> rest = orders;
      rest[i] -= 1;
      std::vector<double> hi = args, lo = args;
      hi[i] += h;
      lo[i] -= h;
      return (fd_slot_derivative(fn, hi, rest) - fd_slot_derivative(fn, lo, rest)) /
             (2.0 * h);
    }
  }
  return fn(args);
}

double eval_func(const Node& n, const Bindings& b, const std::vector<int>* orders) {
  auto it = b.functions.find(n.name);
  std::vector<double> argv;
  argv.reserve(n.args.size());
  for (const Expr& a : n.args) argv.push_back(eval_rec(a, b));
  if (it == b.functions.end()) {
    // A zero-ary style binding through values is allowed for convenience.
    auto vit = b.values.find(n.name);
    if (vit != b.values.end() && !orders) return vit->second;
    throw UnboundSymbol("function '" + n.name + "' is not bound");
  }
  if (!orders) return it->second(argv);
  return fd_slot_derivative(it->second, argv, *orders);
}

double eval_rec(const Expr& e, const Bindings& b) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number:
      return n.number.to_double();
    case Kind::Euler:
      return std::numbers::e;
    case Kind::Symbol: {
      auto it = b.values.find(n.name);
      if (it == b.values.end())
        throw UnboundSymbol("symbol '" + n.name + "' is not bound");
      return it->second;
    }
    case Kind::Func:
      return eval_func(n, b, nullptr);
    case Kind::Deriv:
      return eval_func(n.args[0].node(), b, &n.orders);
    case Kind::OpDeriv:
    case Kind::Deformed:
      // Resolve the deformed operator, then evaluate the expanded form.
      return eval_rec(expand_deformed(e), b);
    case Kind::Pow: {
      double base = eval_rec(n.args[0], b);
      double ex = eval_rec(n.args[1], b);
      if (base == 0.0 && ex < 0.0)
        throw EvalSingularity("0 raised to a negative power");
      bool integer_exp = ex == std::floor(ex);
      if (base < 0.0 && !integer_exp)
        throw EvalSingularity("negative base with fractional exponent");
      double r = std::pow(base, ex);
      if (!std::isfinite(r)) throw EvalSingularity("non-finite power");
      return r;
    }
    case Kind::Product: {
      double r = 1.0;
      for (const Expr& a : n.args) r *= eval_rec(a, b);
      return r;
    }
    case Kind::Sum: {
      double r = 0.0;
      for (const Expr& a : n.args) r += eval_rec(a, b);
      return r;
    }
  }
  throw DefvarError("unreachable node kind in evaluate");
}

}  // namespace

double evaluate(const Expr& e, const Bindings& b) {
  double r = eval_rec(e, b);
  if (!std::isfinite(r)) throw EvalSingularity("non-finite result");
  return r;
}

}  // namespace defvar
