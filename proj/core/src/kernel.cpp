#include "defvar/kernel.hpp"

#include <cmath>

#include "defvar/calculus.hpp"
#include "defvar/simplify.hpp"

namespace defvar {

Expr kernel_factor(const Kernel& k, const std::string& var) {
  switch (k.tag) {
    case Kernel::Tag::Identity:
      return number(1);
    case Kernel::Tag::ConformableInterval: {
      Expr one_minus_alpha = number(1) - *k.alpha;
      return make_pow(sym(var) - *k.lower, one_minus_alpha);
    }
    case Kernel::Tag::LambdaExp: {
      Expr rate = k.halved ? *k.lambda / number(2) : *k.lambda;
      return exp_of(-(rate * sym(var)));
    }
    case Kernel::Tag::Hausdorff: {
      Expr one_minus_alpha = number(1) - *k.alpha;
      Expr base = number(1) + sym(var) / *k.l0;
      return *k.l0 * make_pow(base, one_minus_alpha);
    }
  }
  return number(1);
}

namespace {

Expr expand_rec(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number:
    case Kind::Euler:
    case Kind::Symbol:
      return e;
    case Kind::Func: {
      std::vector<Expr> args;
      args.reserve(n.args.size());
      for (const Expr& a : n.args) args.push_back(expand_rec(a));
      return func(n.name, args);
    }
    case Kind::Deriv:
      return func_deriv(expand_rec(n.args[0]), n.orders);
    case Kind::OpDeriv:
      return differentiate(expand_rec(n.args[0]), n.var, n.op_order);
    case Kind::Deformed: {
      Expr inner = expand_rec(n.args[0]);
      return make_product(
          {kernel_factor(n.kernel, n.var), differentiate(inner, n.var)});
    }
    case Kind::Pow:
      return make_pow(expand_rec(n.args[0]), expand_rec(n.args[1]));
    case Kind::Product: {
      std::vector<Expr> fs;
      fs.reserve(n.args.size());
      for (const Expr& a : n.args) fs.push_back(expand_rec(a));
      return make_product(std::move(fs));
    }
    case Kind::Sum: {
      std::vector<Expr> ts;
      ts.reserve(n.args.size());
      for (const Expr& a : n.args) ts.push_back(expand_rec(a));
      return make_sum(std::move(ts));
    }
  }
  return e;
}

}  // namespace

Expr expand_deformed(const Expr& e) { return simplify(expand_rec(e)); }

double eval_deformed_numeric(const std::function<double(double)>& f,
                             const Kernel& k, double x, double h) {
  if (h <= 0.0) throw DefvarError("eval_deformed_numeric requires h > 0");
  if (k.tag == Kernel::Tag::ConformableInterval) {
    Bindings b;
    b.set("__x", x);
    double a = evaluate(*k.lower, b);
    double alpha = evaluate(*k.alpha, b);
    if (x == a && alpha < 1.0)
      throw EvalSingularity(
          "deformed derivative quotient degenerates at the interval start");
  }
  Bindings b;
  b.set("__x", x);
  double kv = evaluate(kernel_factor(k, "__x"), b);
  return (f(x + h * kv) - f(x)) / h;
}

}  // namespace defvar
