#include <vector>

#include "defvar/calculus.hpp"
#include "defvar/simplify.hpp"

namespace defvar {

namespace {

Expr d1(const Expr& e, const std::string& v);

// Chain rule over the argument slots of a dependent function.
Expr chain_over_args(const Expr& fnode, const std::vector<int>& base_orders,
                     const std::string& v) {
  const Node& f = fnode.node();
  std::vector<Expr> terms;
  for (size_t i = 0; i < f.args.size(); ++i) {
    Expr da = d1(f.args[i], v);
    if (da.is_zero()) continue;
    std::vector<int> orders = base_orders;
    orders[i] += 1;
    terms.push_back(make_product({func_deriv(fnode, orders), da}));
  }
  return make_sum(std::move(terms));
}

Expr d1(const Expr& e, const std::string& v) {
  if (!depends_on(e, v)) return number(0);
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number:
    case Kind::Euler:
      return number(0);
    case Kind::Symbol:
      return n.name == v ? number(1) : number(0);
    case Kind::Func:
      return chain_over_args(e, std::vector<int>(n.args.size(), 0), v);
    case Kind::Deriv:
      return chain_over_args(n.args[0], n.orders, v);
    case Kind::OpDeriv:
      if (n.var == v) return op_deriv(n.args[0], v, n.op_order + 1);
      return op_deriv(e, v, 1);
    case Kind::Deformed:
      // Left unexpanded; expand_deformed resolves the wrapper.
      return op_deriv(e, v, 1);
    case Kind::Sum: {
      std::vector<Expr> ts;
      ts.reserve(n.args.size());
      for (const Expr& a : n.args) ts.push_back(d1(a, v));
      return make_sum(std::move(ts));
    }
    case Kind::Product: {
      std::vector<Expr> terms;
      for (size_t i = 0; i < n.args.size(); ++i) {
        Expr di = d1(n.args[i], v);
        if (di.is_zero()) continue;
        std::vector<Expr> fs = n.args;
        fs[i] = di;
        terms.push_back(make_product(std::move(fs)));
      }
      return make_sum(std::move(terms));
    }
    case Kind::Pow: {
      const Expr& b = n.args[0];
      const Expr& ex = n.args[1];
      bool b_dep = depends_on(b, v);
      bool e_dep = depends_on(ex, v);
      if (b.kind() == Kind::Euler) {
        return make_product({e, d1(ex, v)});
      }
      if (b_dep && !e_dep) {
        Expr em1 = make_sum({ex, number(-1)});
        return make_product({ex, make_pow(b, em1), d1(b, v)});
      }
      if (!b_dep && e_dep)
        throw DefvarError(
            "derivative of a variable exponent over a non-constant base "
            "requires logarithms, which are outside the expression grammar");
      throw DefvarError(
          "derivative of b^e with both base and exponent variable is not "
          "supported");
    }
  }
  return number(0);
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& v, int order) {
  if (order <= 0) return simplify(e);
  Expr out = simplify(e);
  for (int i = 0; i < order; ++i) out = d1(out, v);
  return out;
}

}  // namespace defvar
