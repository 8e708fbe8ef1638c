#include "defvar/variational.hpp"

#include <algorithm>

#include "defvar/calculus.hpp"
#include "defvar/kernel.hpp"
#include "defvar/render.hpp"
#include "defvar/simplify.hpp"

namespace defvar {

namespace {

const DynamicalVar& find_var(const LagrangianSpec& spec, const std::string& name);

}  // namespace

Expr slot_partial(const Expr& lagrangian, const Expr& slot) {
  static const char* kMarker = "__slot__";
  Expr marker = sym(kMarker);
  Expr g = substitute_slot(lagrangian, slot, marker);
  Expr dg = differentiate(g, kMarker);
  return simplify(substitute(dg, marker, slot));
}

namespace {

const DynamicalVar& find_var(const LagrangianSpec& spec, const std::string& name) {
  for (const auto& v : spec.variables)
    if (v.name == name) return v;
  throw UnknownVariable("'" + name + "' is not a declared dynamical variable");
}

Expr var_func(const DynamicalVar& v) {
  std::vector<Expr> args;
  args.reserve(v.independents.size());
  for (const auto& iv : v.independents) args.push_back(sym(iv));
  return func(v.name, args);
}

bool is_func_of(const Expr& e, const std::string& name) {
  return e.kind() == Kind::Func && e.node().name == name;
}

// First-order ordinary-derivative slot of a dynamical variable, or nullopt.
bool is_first_deriv_of(const Expr& e, const std::string& name) {
  if (e.kind() != Kind::Deriv) return false;
  const Node& n = e.node();
  if (!is_func_of(n.args[0], name)) return false;
  int total = 0;
  for (int o : n.orders) total += o;
  return total == 1;
}

bool is_dynamical(const LagrangianSpec& spec, const std::string& name) {
  for (const auto& v : spec.variables)
    if (v.name == name) return true;
  return false;
}

// Deformed operators over anything other than a bare dynamical variable or
// its first ordinary derivative cannot be treated as independent variational
// slots; they are expanded to kernel-weighted ordinary derivatives up front.
Expr normalize_lagrangian(const Expr& e, const LagrangianSpec& spec) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Deformed: {
      Expr inner = normalize_lagrangian(n.args[0], spec);
      bool slot_shape = false;
      if (inner.kind() == Kind::Func && is_dynamical(spec, inner.node().name))
        slot_shape = true;
      if (inner.kind() == Kind::Deriv &&
          is_first_deriv_of(inner, inner.node().args[0].node().name) &&
          is_dynamical(spec, inner.node().args[0].node().name))
        slot_shape = true;
      if (slot_shape) return deformed(n.kernel, n.var, inner);
      return expand_deformed(deformed(n.kernel, n.var, inner));
    }
    case Kind::OpDeriv:
      return expand_deformed(e);
    case Kind::Sum: {
      std::vector<Expr> ts;
      for (const Expr& a : n.args) ts.push_back(normalize_lagrangian(a, spec));
      return make_sum(std::move(ts));
    }
    case Kind::Product: {
      std::vector<Expr> fs;
      for (const Expr& a : n.args) fs.push_back(normalize_lagrangian(a, spec));
      return make_product(std::move(fs));
    }
    case Kind::Pow:
      return make_pow(normalize_lagrangian(n.args[0], spec),
                      normalize_lagrangian(n.args[1], spec));
    default:
      return e;
  }
}

void collect_deformed_slots(const Expr& e, const std::string& var_name,
                            std::vector<Expr>& first_order,
                            std::vector<Expr>& second_order) {
  const Node& n = e.node();
  if (n.kind == Kind::Deformed) {
    auto push_unique = [](std::vector<Expr>& v, const Expr& x) {
      for (const Expr& y : v)
        if (y.same(x)) return;
      v.push_back(x);
    };
    const Expr& inner = n.args[0];
    if (is_func_of(inner, var_name)) push_unique(first_order, e);
    if (is_first_deriv_of(inner, var_name)) push_unique(second_order, e);
    return;  // no nested deformed slots after normalization
  }
  for (const Expr& c : n.args)
    collect_deformed_slots(c, var_name, first_order, second_order);
}

void validate_deformed_vars(const Expr& L, const LagrangianSpec& spec) {
  std::vector<std::string> known;
  for (const auto& v : spec.variables)
    for (const auto& iv : v.independents) known.push_back(iv);
  struct Walk {
    const std::vector<std::string>& known;
    void operator()(const Expr& e) const {
      if (e.kind() == Kind::Deformed) {
        const std::string& v = e.node().var;
        if (std::find(known.begin(), known.end(), v) == known.end())
          throw MissingKernel("deformed derivative w.r.t. '" + v +
                              "', which is not an independent variable of any "
                              "dynamical variable");
      }
      for (const Expr& c : e.node().args) (*this)(c);
    }
  };
  Walk{known}(L);
}

// Shared four-term residual. For a particle there is a single coordinate;
// for a field the ordinary and deformed terms are summed over coordinates.
ELResult derive_residual(const LagrangianSpec& spec, const std::string& yname) {
  const DynamicalVar& y = find_var(spec, yname);
  Expr L = normalize_lagrangian(simplify(spec.lagrangian), spec);
  validate_deformed_vars(L, spec);

  Expr y_fn = var_func(y);
  std::vector<Expr> terms;

  // dL/dy
  terms.push_back(slot_partial(L, y_fn));

  // - d_mu [ dL/d(d_mu y) ]
  for (size_t i = 0; i < y.independents.size(); ++i) {
    std::vector<int> orders(y.independents.size(), 0);
    orders[i] = 1;
    Expr slot = func_deriv(y_fn, orders);
    Expr p = slot_partial(L, slot);
    if (p.is_zero()) continue;
    terms.push_back(-differentiate(expand_deformed(p), y.independents[i]));
  }

  // deformed slots
  std::vector<Expr> first_order, second_order;
  collect_deformed_slots(L, yname, first_order, second_order);

  // - d_mu [ k_mu * dL/d(Dk y) ]
  for (const Expr& slot : first_order) {
    const Node& d = slot.node();
    Expr p = slot_partial(L, slot);
    if (p.is_zero()) continue;
    Expr bracket = expand_deformed(make_product({kernel_factor(d.kernel, d.var), p}));
    terms.push_back(-differentiate(bracket, d.var));
  }

  // + d_mu^2 [ k_mu * dL/d(Dk(d_mu y)) ]
  for (const Expr& slot : second_order) {
    const Node& d = slot.node();
    Expr p = slot_partial(L, slot);
    if (p.is_zero()) continue;
    Expr bracket = expand_deformed(make_product({kernel_factor(d.kernel, d.var), p}));
    terms.push_back(differentiate(bracket, d.var, 2));
  }

  ELResult out;
  out.variable = yname;
  out.pre_limit = simplify(expand_deformed(make_sum(std::move(terms))));
  out.post_limit = out.pre_limit;
  return out;
}

}  // namespace

ELResult euler_lagrange_particle(const LagrangianSpec& spec, const std::string& y) {
  const DynamicalVar& v = find_var(spec, y);
  if (v.independents.size() != 1)
    throw UnknownVariable("particle path expects a single independent variable");
  return derive_residual(spec, y);
}

ELResult euler_lagrange_field(const LagrangianSpec& spec, const std::string& phi) {
  const DynamicalVar& v = find_var(spec, phi);
  if (v.independents.empty())
    throw UnknownVariable("field variable needs at least one coordinate");
  return derive_residual(spec, phi);
}

std::vector<ELResult> euler_lagrange_system(const LagrangianSpec& spec) {
  std::vector<ELResult> out;
  out.reserve(spec.variables.size());
  for (const auto& v : spec.variables) out.push_back(derive_residual(spec, v.name));
  return out;
}

namespace {

// Sign of an interval-power exponent. Rational exponents are compared to
// zero; exponents linear in one symbol are classified under the convention
// that the symbol lies in the open interval (0, 1).
enum class ExpSign { Zero, Positive, Negative };

ExpSign exponent_sign(const Expr& e) {
  Expr s = simplify(e);
  if (auto r = s.as_number()) {
    if (r->is_zero()) return ExpSign::Zero;
    return r->is_negative() ? ExpSign::Negative : ExpSign::Positive;
  }
  // c0 + c1 * sigma over sigma in (0,1): bounded by the endpoint values.
  Rational c0(0), c1(0);
  std::string symname;
  std::vector<Expr> ts = s.kind() == Kind::Sum ? s.node().args : std::vector<Expr>{s};
  for (const Expr& t : ts) {
    if (auto r = t.as_number()) {
      c0 += *r;
      continue;
    }
    Rational coeff(1);
    Expr core = t;
    if (t.kind() == Kind::Product && t.node().args.size() == 2 &&
        t.node().args[0].is_number()) {
      coeff = *t.node().args[0].as_number();
      core = t.node().args[1];
    }
    if (core.kind() != Kind::Symbol)
      throw LimitSingular("cannot determine the sign of interval exponent " +
                          render(s));
    if (!symname.empty() && core.node().name != symname)
      throw LimitSingular("interval exponent depends on several symbols: " +
                          render(s));
    symname = core.node().name;
    c1 += coeff;
  }
  Rational at0 = c0;
  Rational at1 = c0 + c1;
  Rational zero(0);
  if (at0 >= zero && at1 >= zero && (at0 > zero || at1 > zero))
    return ExpSign::Positive;
  if (at0 <= zero && at1 <= zero && (at0 < zero || at1 < zero))
    return ExpSign::Negative;
  if (at0 == zero && at1 == zero) return ExpSign::Zero;
  throw LimitSingular("interval exponent " + render(s) +
                      " changes sign over the admissible parameter range");
}

}  // namespace

namespace {

// Substitutes a symbol in algebraic positions only (sums, products, powers),
// leaving functions, derivative nodes and deformed operators untouched. The
// a -> b limit shrinks the interval while the dynamical functions stay at
// the generic point, so their arguments must not be rewritten.
Expr algebraic_substitute(const Expr& e, const std::string& var, const Expr& repl) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Symbol:
      return n.name == var ? repl : e;
    case Kind::Sum: {
      std::vector<Expr> ts;
      for (const Expr& c : n.args) ts.push_back(algebraic_substitute(c, var, repl));
      return make_sum(std::move(ts));
    }
    case Kind::Product: {
      std::vector<Expr> fs;
      for (const Expr& c : n.args) fs.push_back(algebraic_substitute(c, var, repl));
      return make_product(std::move(fs));
    }
    case Kind::Pow:
      return make_pow(algebraic_substitute(n.args[0], var, repl),
                      algebraic_substitute(n.args[1], var, repl));
    default:
      return e;
  }
}

// Splits the interval expression v - a into (variable name, lower endpoint).
std::pair<std::string, Expr> split_interval(const Expr& interval) {
  Expr s = simplify(interval);
  if (s.kind() == Kind::Symbol) return {s.node().name, number(0)};
  if (s.kind() == Kind::Sum) {
    std::string var;
    std::vector<Expr> rest;
    for (const Expr& t : s.node().args) {
      if (t.kind() == Kind::Symbol && var.empty()) {
        var = t.node().name;
      } else {
        rest.push_back(-t);
      }
    }
    if (!var.empty()) return {var, make_sum(std::move(rest))};
  }
  throw LimitSingular("interval must have the form v - a, got " + render(interval));
}

}  // namespace

IntervalLimitResult take_limit_interval(const Expr& e, const Expr& interval) {
  Expr xi = sym("__xi__");
  auto [var, lower] = split_interval(interval);
  // v -> xi + a makes every algebraic combination of (v - a) a polynomial
  // (or fractional power) in xi, robust to folded constants like 2v - 2a.
  Expr interval_expr = sym(var) - lower;
  Expr substituted = algebraic_substitute(simplify(e), var, xi + lower);
  Expr ex = expand(substituted);

  std::vector<Expr> terms =
      ex.kind() == Kind::Sum ? ex.node().args : std::vector<Expr>{ex};
  std::vector<Expr> kept;
  std::vector<Expr> dropped;
  for (const Expr& term : terms) {
    std::vector<Expr> exps;
    std::vector<Expr> factors = term.kind() == Kind::Product
                                    ? term.node().args
                                    : std::vector<Expr>{term};
    for (const Expr& f : factors) {
      if (f.same(xi)) {
        exps.push_back(number(1));
      } else if (f.kind() == Kind::Pow && f.node().args[0].same(xi)) {
        exps.push_back(f.node().args[1]);
      }
    }
    Expr total = make_sum(exps);
    ExpSign sign = exps.empty() ? ExpSign::Zero : exponent_sign(total);
    switch (sign) {
      case ExpSign::Zero:
        if (contains(term, xi) && exps.empty())
          throw LimitSingular(
              "interval expression occurs in a non-polynomial position: " +
              render(substitute(term, xi, interval_expr)));
        kept.push_back(term);
        break;
      case ExpSign::Positive:
        dropped.push_back(simplify(substitute(term, xi, interval_expr)));
        break;
      case ExpSign::Negative:
        throw LimitSingular("term with negative interval power survives the "
                            "limit: " +
                            render(substitute(term, xi, interval_expr)));
    }
  }
  IntervalLimitResult out;
  out.post = simplify(make_sum(std::move(kept)));
  if (contains(out.post, xi))
    throw LimitSingular("interval expression survived at zero net power");
  out.dropped = std::move(dropped);
  return out;
}

Expr take_limit_alpha(const Expr& e, const std::string& alpha) {
  return simplify(substitute(e, sym(alpha), number(1)));
}

namespace {

Expr find_single_deformed_velocity(const Expr& L, const std::string& q) {
  std::vector<Expr> first, second;
  collect_deformed_slots(L, q, first, second);
  if (first.size() != 1 || !second.empty())
    throw NonInvertibleMomentum(
        "Legendre transform expects exactly one deformed velocity slot of '" +
        q + "'");
  return first[0];
}

}  // namespace

Expr legendre_transform(const LagrangianSpec& spec, const std::string& q) {
  const DynamicalVar& v = find_var(spec, q);
  if (v.independents.size() != 1)
    throw UnknownVariable("Legendre transform expects a particle variable");
  Expr L = normalize_lagrangian(simplify(spec.lagrangian), spec);
  Expr slot = find_single_deformed_velocity(L, q);

  Expr p = sym("p");
  Expr dL = slot_partial(L, slot);
  Expr a = slot_partial(dL, slot);  // d2L/d(Dk q)^2
  if (a.is_zero() || contains(a, slot))
    throw NonInvertibleMomentum("Lagrangian is not quadratic in the deformed "
                                "velocity of '" + q + "'");
  Expr b = simplify(substitute_slot(dL, slot, number(0)));
  Expr slot_of_p = simplify((p - b) / a);

  Expr h = simplify(p * slot_of_p - substitute_slot(L, slot, slot_of_p));
  // Conjugate momentum -> kernel-weighted mechanical momentum p = m qdot.
  const Node& d = slot.node();
  Expr kf = kernel_factor(d.kernel, d.var);
  return simplify(substitute(h, p, make_product({kf, p})));
}

Expr hamilton_equation_of_motion(const Expr& hamiltonian, const std::string& q,
                                 const std::string& p, const std::string& t) {
  Expr qf = func(q, {sym(t)});
  Expr H = simplify(hamiltonian);

  Expr hp = differentiate(H, p);  // qdot as a function of (q, p, t)
  Expr a = differentiate(hp, p);
  if (a.is_zero() || depends_on(a, p))
    throw NonInvertibleMomentum("dH/dp must be linear in p");
  Expr b = simplify(substitute(hp, sym(p), number(0)));
  Expr qdot = func_deriv(qf, {1});
  Expr p_expr = simplify((qdot - b) / a);

  Expr hq = slot_partial(H, qf);
  Expr residual = simplify(differentiate(p_expr, t) +
                           substitute(hq, sym(p), p_expr));
  // Monic normalization on the second-derivative coefficient when possible.
  Expr q2 = func_deriv(qf, {2});
  Expr lead = slot_partial(residual, q2);
  if (!lead.is_zero() && !contains(lead, q2))
    residual = expand(simplify(residual / lead));
  return sign_normalize(residual);
}

}  // namespace defvar
