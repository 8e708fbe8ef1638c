#include "defvar/expr.hpp"

#include <algorithm>

namespace defvar {

namespace {

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

const NodePtr& zero_node() {
  static NodePtr z = make_node(Node{.kind = Kind::Number, .number = Rational(0)});
  return z;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Kind Expr::kind() const { return node_->kind; }

bool Expr::is_zero() const {
  return node_->kind == Kind::Number && node_->number.is_zero();
}
bool Expr::is_one() const {
  return node_->kind == Kind::Number && node_->number.is_one();
}
bool Expr::is_number() const { return node_->kind == Kind::Number; }

std::optional<Rational> Expr::as_number() const {
  if (node_->kind == Kind::Number) return node_->number;
  return std::nullopt;
}

bool Expr::same(const Expr& other) const { return compare(*this, other) == 0; }

Expr number(const Rational& r) {
  return Expr(make_node(Node{.kind = Kind::Number, .number = r}));
}
Expr number(long long n) { return number(Rational(n)); }
Expr number(long long n, long long d) { return number(Rational(n, d)); }

Expr euler() {
  static Expr e(make_node(Node{.kind = Kind::Euler}));
  return e;
}

Expr sym(const std::string& name) {
  return Expr(make_node(Node{.kind = Kind::Symbol, .name = name}));
}

Expr func(const std::string& name, const std::vector<Expr>& args) {
  return Expr(make_node(Node{.kind = Kind::Func, .name = name, .args = args}));
}

Expr func_deriv(const Expr& f, const std::vector<int>& orders) {
  if (f.kind() != Kind::Func)
    throw DefvarError("func_deriv expects a dependent-function node");
  if (orders.size() != f.node().args.size())
    throw DefvarError("func_deriv: order list must match argument count");
  bool all_zero = std::all_of(orders.begin(), orders.end(), [](int o) { return o == 0; });
  if (all_zero) return f;
  return Expr(make_node(Node{.kind = Kind::Deriv, .args = {f}, .orders = orders}));
}

Expr op_deriv(const Expr& inner, const std::string& var, int order) {
  if (order <= 0) return inner;
  return Expr(make_node(
      Node{.kind = Kind::OpDeriv, .args = {inner}, .op_order = order, .var = var}));
}

Expr deformed(const Kernel& k, const std::string& var, const Expr& inner) {
  return Expr(make_node(
      Node{.kind = Kind::Deformed, .args = {inner}, .var = var, .kernel = k}));
}

Expr raw_sum(std::vector<Expr> terms) {
  return Expr(make_node(Node{.kind = Kind::Sum, .args = std::move(terms)}));
}
Expr raw_product(std::vector<Expr> factors) {
  return Expr(make_node(Node{.kind = Kind::Product, .args = std::move(factors)}));
}
Expr raw_pow(const Expr& base, const Expr& exp) {
  return Expr(make_node(Node{.kind = Kind::Pow, .args = {base, exp}}));
}

Expr pow(const Expr& base, const Expr& exp) { return make_pow(base, exp); }
Expr pow(const Expr& base, long long num, long long den) {
  return make_pow(base, number(Rational(num, den)));
}
Expr exp_of(const Expr& u) { return make_pow(euler(), u); }

Expr operator+(const Expr& a, const Expr& b) { return make_sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) {
  return make_sum({a, make_product({number(-1), b})});
}
Expr operator*(const Expr& a, const Expr& b) { return make_product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  return make_product({a, make_pow(b, number(-1))});
}
Expr Expr::operator-() const { return make_product({number(-1), *this}); }

// ---- Kernel ----------------------------------------------------------------

Kernel Kernel::conformable(const Expr& alpha, const Expr& lower) {
  Kernel k;
  k.tag = Tag::ConformableInterval;
  k.alpha = std::make_shared<const Expr>(alpha);
  k.lower = std::make_shared<const Expr>(lower);
  return k;
}
Kernel Kernel::lambda_exp(const Expr& lambda, bool halved) {
  Kernel k;
  k.tag = Tag::LambdaExp;
  k.lambda = std::make_shared<const Expr>(lambda);
  k.halved = halved;
  return k;
}
Kernel Kernel::hausdorff(const Expr& alpha, const Expr& l0) {
  Kernel k;
  k.tag = Tag::Hausdorff;
  k.alpha = std::make_shared<const Expr>(alpha);
  k.l0 = std::make_shared<const Expr>(l0);
  return k;
}

namespace {
int cmp_expr_ptr(const std::shared_ptr<const Expr>& a,
                 const std::shared_ptr<const Expr>& b) {
  if (!a && !b) return 0;
  if (!a) return -1;
  if (!b) return 1;
  return compare(*a, *b);
}

int compare_kernel(const Kernel& a, const Kernel& b) {
  if (a.tag != b.tag) return a.tag < b.tag ? -1 : 1;
  if (int c = cmp_expr_ptr(a.alpha, b.alpha)) return c;
  if (int c = cmp_expr_ptr(a.lower, b.lower)) return c;
  if (int c = cmp_expr_ptr(a.lambda, b.lambda)) return c;
  if (int c = cmp_expr_ptr(a.l0, b.l0)) return c;
  if (a.halved != b.halved) return a.halved ? 1 : -1;
  return 0;
}
}  // namespace

bool Kernel::operator==(const Kernel& o) const { return compare_kernel(*this, o) == 0; }

// ---- ordering & queries ----------------------------------------------------

namespace {
int kind_rank(Kind k) {
  switch (k) {
    case Kind::Number: return 0;
    case Kind::Euler: return 1;
    case Kind::Symbol: return 2;
    case Kind::Func: return 3;
    case Kind::Deriv: return 4;
    case Kind::OpDeriv: return 5;
    case Kind::Deformed: return 6;
    case Kind::Pow: return 7;
    case Kind::Product: return 8;
    case Kind::Sum: return 9;
  }
  return 10;
}
}  // namespace

int compare(const Expr& a, const Expr& b) {
  if (a.ptr() == b.ptr()) return 0;
  const Node& na = a.node();
  const Node& nb = b.node();
  if (na.kind != nb.kind)
    return kind_rank(na.kind) < kind_rank(nb.kind) ? -1 : 1;
  switch (na.kind) {
    case Kind::Number: {
      if (na.number == nb.number) return 0;
      return na.number < nb.number ? -1 : 1;
    }
    case Kind::Euler:
      return 0;
    case Kind::Symbol:
      return na.name.compare(nb.name) < 0 ? -1 : (na.name == nb.name ? 0 : 1);
    case Kind::Func: {
      if (int c = na.name.compare(nb.name)) return c < 0 ? -1 : 1;
      break;
    }
    case Kind::Deriv: {
      if (na.orders != nb.orders) return na.orders < nb.orders ? -1 : 1;
      break;
    }
    case Kind::OpDeriv: {
      if (int c = na.var.compare(nb.var)) return c < 0 ? -1 : 1;
      if (na.op_order != nb.op_order) return na.op_order < nb.op_order ? -1 : 1;
      break;
    }
    case Kind::Deformed: {
      if (int c = na.var.compare(nb.var)) return c < 0 ? -1 : 1;
      if (int c = compare_kernel(na.kernel, nb.kernel)) return c;
      break;
    }
    default:
      break;
  }
  if (na.args.size() != nb.args.size())
    return na.args.size() < nb.args.size() ? -1 : 1;
  for (size_t i = 0; i < na.args.size(); ++i)
    if (int c = compare(na.args[i], nb.args[i])) return c;
  return 0;
}

namespace {

std::vector<Expr> kernel_exprs(const Kernel& k) {
  std::vector<Expr> out;
  for (const auto& p : {k.alpha, k.lower, k.lambda, k.l0})
    if (p) out.push_back(*p);
  return out;
}

template <typename Fn>
void visit_children(const Expr& e, Fn&& fn) {
  for (const Expr& c : e.node().args) fn(c);
  if (e.kind() == Kind::Deformed)
    for (const Expr& c : kernel_exprs(e.node().kernel)) fn(c);
}

}  // namespace

bool contains(const Expr& e, const Expr& inside) {
  if (e.same(inside)) return true;
  bool found = false;
  visit_children(e, [&](const Expr& c) { found = found || contains(c, inside); });
  return found;
}

bool depends_on(const Expr& e, const std::string& v) {
  switch (e.kind()) {
    case Kind::Symbol:
      return e.node().name == v;
    case Kind::OpDeriv:
    case Kind::Deformed:
      if (e.node().var == v) return true;
      break;
    default:
      break;
  }
  bool dep = false;
  visit_children(e, [&](const Expr& c) { dep = dep || depends_on(c, v); });
  return dep;
}

namespace {
void collect_symbols(const Expr& e, std::vector<std::string>& out) {
  if (e.kind() == Kind::Symbol) {
    if (std::find(out.begin(), out.end(), e.node().name) == out.end())
      out.push_back(e.node().name);
  }
  visit_children(e, [&](const Expr& c) { collect_symbols(c, out); });
}
}  // namespace

std::vector<std::string> free_symbols(const Expr& e) {
  std::vector<std::string> out;
  collect_symbols(e, out);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

Kernel substitute_kernel(const Kernel& k, const Expr& target, const Expr& repl,
                         bool slot_mode);

Expr substitute_impl(const Expr& e, const Expr& target, const Expr& repl,
                     bool slot_mode) {
  if (e.same(target)) return repl;
  const Node& n = e.node();
  if (slot_mode && (n.kind == Kind::Deriv || n.kind == Kind::OpDeriv ||
                    n.kind == Kind::Deformed))
    return e;  // derivative slots are atomic for variational partials
  switch (n.kind) {
    case Kind::Number:
    case Kind::Euler:
    case Kind::Symbol:
      return e;
    case Kind::Func: {
      std::vector<Expr> args;
      args.reserve(n.args.size());
      bool changed = false;
      for (const Expr& a : n.args) {
        Expr s = substitute_impl(a, target, repl, slot_mode);
        changed = changed || !s.same(a);
        args.push_back(s);
      }
      return changed ? func(n.name, args) : e;
    }
    case Kind::Deriv: {
      Expr inner = substitute_impl(n.args[0], target, repl, slot_mode);
      if (inner.same(n.args[0])) return e;
      if (inner.kind() != Kind::Func)
        throw DefvarError("substitution replaced a function inside a derivative "
                          "with a non-function expression");
      return func_deriv(inner, n.orders);
    }
    case Kind::OpDeriv: {
      Expr inner = substitute_impl(n.args[0], target, repl, slot_mode);
      return inner.same(n.args[0]) ? e : op_deriv(inner, n.var, n.op_order);
    }
    case Kind::Deformed: {
      Expr inner = substitute_impl(n.args[0], target, repl, slot_mode);
      Kernel k = substitute_kernel(n.kernel, target, repl, slot_mode);
      if (inner.same(n.args[0]) && k == n.kernel) return e;
      return deformed(k, n.var, inner);
    }
    case Kind::Pow:
      return make_pow(substitute_impl(n.args[0], target, repl, slot_mode),
                      substitute_impl(n.args[1], target, repl, slot_mode));
    case Kind::Product: {
      std::vector<Expr> fs;
      fs.reserve(n.args.size());
      for (const Expr& a : n.args) fs.push_back(substitute_impl(a, target, repl, slot_mode));
      return make_product(std::move(fs));
    }
    case Kind::Sum: {
      std::vector<Expr> ts;
      ts.reserve(n.args.size());
      for (const Expr& a : n.args) ts.push_back(substitute_impl(a, target, repl, slot_mode));
      return make_sum(std::move(ts));
    }
  }
  return e;
}

Kernel substitute_kernel(const Kernel& k, const Expr& target, const Expr& repl,
                         bool slot_mode) {
  Kernel out = k;
  auto sub = [&](std::shared_ptr<const Expr>& p) {
    if (p) p = std::make_shared<const Expr>(substitute_impl(*p, target, repl, slot_mode));
  };
  sub(out.alpha);
  sub(out.lower);
  sub(out.lambda);
  sub(out.l0);
  return out;
}

}  // namespace

Expr substitute(const Expr& e, const Expr& target, const Expr& replacement) {
  return substitute_impl(e, target, replacement, /*slot_mode=*/false);
}

Expr substitute_slot(const Expr& e, const Expr& target, const Expr& replacement) {
  return substitute_impl(e, target, replacement, /*slot_mode=*/true);
}

}  // namespace defvar
