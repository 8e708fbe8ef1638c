#include "defvar/simplify.hpp"

#include <algorithm>
#include <utility>

namespace defvar {

namespace {

// Splits a canonical product into (rational constant, remaining factors).
std::pair<Rational, std::vector<Expr>> split_constant(const Expr& e) {
  if (auto r = e.as_number()) return {*r, {}};
  if (e.kind() == Kind::Product) {
    const auto& fs = e.node().args;
    if (!fs.empty() && fs[0].is_number())
      return {*fs[0].as_number(), {fs.begin() + 1, fs.end()}};
    return {Rational(1), fs};
  }
  return {Rational(1), {e}};
}

// (base, exponent) view of a factor.
std::pair<Expr, Expr> split_power(const Expr& e) {
  if (e.kind() == Kind::Pow) return {e.node().args[0], e.node().args[1]};
  return {e, number(1)};
}

bool is_integer_number(const Expr& e) {
  auto r = e.as_number();
  return r && r->is_integer();
}

}  // namespace

Expr make_pow(const Expr& base, const Expr& exp) {
  if (exp.is_zero()) return number(1);
  if (exp.is_one()) return base;
  if (base.is_one()) return base;
  if (auto be = base.as_number()) {
    if (auto ee = exp.as_number()) {
      if (ee->is_integer() && !(be->is_zero() && ee->is_negative()))
        return number(be->pow_int(ee->num()));
      if (be->is_zero() && !ee->is_negative()) return number(0);
      if (be->is_one()) return number(1);
    }
    // Non-integer exponent of a rational base stays symbolic.
  }
  if (base.kind() == Kind::Pow) {
    // (b^e2)^e -> b^(e2*e). Sound for integer e; for fractional or symbolic
    // e it is sound unless e2 is an even integer (where the inner power
    // erases the sign of b: (b^2)^(1/2) = |b|). Non-even inner exponents
    // already presume a positive base.
    const Expr& inner_exp = base.node().args[1];
    auto r2 = inner_exp.as_number();
    bool inner_even = r2 && r2->is_integer() && (r2->num() % 2 == 0);
    if (is_integer_number(exp) || !inner_even)
      return make_pow(base.node().args[0],
                      make_product({inner_exp, exp}));
  }
  if (base.kind() == Kind::Product) {
    bool integer_exp = is_integer_number(exp);
    bool has_negative_const = false;
    for (const Expr& f : base.node().args)
      if (auto r = f.as_number(); r && r->is_negative()) has_negative_const = true;
    // Distribute over factors. For non-integer exponents this assumes the
    // positive-real convention used throughout the catalog; blocked when a
    // negative constant factor is present.
    if (integer_exp || !has_negative_const) {
      std::vector<Expr> out;
      out.reserve(base.node().args.size());
      for (const Expr& f : base.node().args) out.push_back(make_pow(f, exp));
      return make_product(std::move(out));
    }
  }
  return raw_pow(base, exp);
}

Expr make_product(std::vector<Expr> factors) {
  Rational constant(1);
  // (base, accumulated exponent terms)
  std::vector<std::pair<Expr, std::vector<Expr>>> merged;

  auto add_power = [&](const Expr& b, const Expr& e) {
    for (auto& [mb, mes] : merged)
      if (compare(mb, b) == 0) {
        mes.push_back(e);
        return;
      }
    merged.push_back({b, {e}});
  };

  std::vector<Expr> work = std::move(factors);
  while (!work.empty()) {
    Expr f = work.back();
    work.pop_back();
    if (f.kind() == Kind::Product) {
      for (const Expr& c : f.node().args) work.push_back(c);
      continue;
    }
    if (auto r = f.as_number()) {
      constant *= *r;
      continue;
    }
    auto [b, e] = split_power(f);
    add_power(b, e);
  }
  if (constant.is_zero()) return number(0);

  std::vector<Expr> out;
  std::vector<Expr> respill;  // folded powers that need another merge round
  for (auto& [b, es] : merged) {
    Expr p = make_pow(b, make_sum(std::move(es)));
    if (auto r = p.as_number()) {
      constant *= *r;
      continue;
    }
    if (p.kind() == Kind::Product) {
      respill.push_back(p);
      continue;
    }
    out.push_back(p);
  }
  // Folding a group can itself produce a product (distribution inside
  // make_pow) or a power whose base now coincides with another factor
  // ((y^2)^(1/2) twice collapsing to y^2 next to a bare y). Re-run the
  // merge over everything in that case.
  bool dup_bases = false;
  for (size_t i = 0; i < out.size() && !dup_bases; ++i)
    for (size_t j = i + 1; j < out.size(); ++j)
      if (compare(split_power(out[i]).first, split_power(out[j]).first) == 0) {
        dup_bases = true;
        break;
      }
  if (!respill.empty() || dup_bases) {
    for (const Expr& f : out) respill.push_back(f);
    respill.push_back(number(constant));
    return make_product(std::move(respill));
  }
  if (constant.is_zero()) return number(0);

  std::sort(out.begin(), out.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  if (out.empty()) return number(constant);
  if (!constant.is_one() && out.size() == 1 && out[0].kind() == Kind::Sum) {
    std::vector<Expr> ts;
    ts.reserve(out[0].node().args.size());
    for (const Expr& s : out[0].node().args)
      ts.push_back(make_product({number(constant), s}));
    return make_sum(std::move(ts));
  }
  if (!constant.is_one()) {
    std::vector<Expr> with_c;
    with_c.reserve(out.size() + 1);
    with_c.push_back(number(constant));
    with_c.insert(with_c.end(), out.begin(), out.end());
    return raw_product(std::move(with_c));
  }
  if (out.size() == 1) return out[0];
  return raw_product(std::move(out));
}

Expr make_sum(std::vector<Expr> terms) {
  Rational constant(0);
  std::vector<std::pair<Expr, Rational>> collected;  // (key, coefficient)

  auto add_term = [&](const Expr& key, const Rational& coeff) {
    for (auto& [k, c] : collected)
      if (compare(k, key) == 0) {
        c += coeff;
        return;
      }
    collected.push_back({key, coeff});
  };

  std::vector<Expr> work = std::move(terms);
  while (!work.empty()) {
    Expr t = work.back();
    work.pop_back();
    if (t.kind() == Kind::Sum) {
      for (const Expr& c : t.node().args) work.push_back(c);
      continue;
    }
    if (auto r = t.as_number()) {
      constant += *r;
      continue;
    }
    // c * (A + B) flattens into the enclosing sum.
    if (t.kind() == Kind::Product && t.node().args.size() == 2 &&
        t.node().args[0].is_number() && t.node().args[1].kind() == Kind::Sum) {
      const Expr c = t.node().args[0];
      for (const Expr& s : t.node().args[1].node().args)
        work.push_back(make_product({c, s}));
      continue;
    }
    auto [coeff, rest] = split_constant(t);
    Expr key = rest.size() == 1 ? rest[0] : raw_product(std::move(rest));
    add_term(key, coeff);
  }

  std::vector<Expr> out;
  for (auto& [key, coeff] : collected) {
    if (coeff.is_zero()) continue;
    if (coeff.is_one()) {
      out.push_back(key);
    } else {
      std::vector<Expr> fs;
      fs.push_back(number(coeff));
      if (key.kind() == Kind::Product) {
        for (const Expr& f : key.node().args) fs.push_back(f);
      } else {
        fs.push_back(key);
      }
      out.push_back(raw_product(std::move(fs)));
    }
  }
  if (!constant.is_zero()) out.push_back(number(constant));
  std::sort(out.begin(), out.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  if (out.empty()) return number(0);
  if (out.size() == 1) return out[0];
  return raw_sum(std::move(out));
}

namespace {

Kernel simplify_kernel(const Kernel& k) {
  Kernel out = k;
  auto s = [](std::shared_ptr<const Expr>& p) {
    if (p) p = std::make_shared<const Expr>(simplify(*p));
  };
  s(out.alpha);
  s(out.lower);
  s(out.lambda);
  s(out.l0);
  return out;
}

}  // namespace

Expr simplify(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number:
    case Kind::Euler:
    case Kind::Symbol:
      return e;
    case Kind::Func: {
      std::vector<Expr> args;
      args.reserve(n.args.size());
      for (const Expr& a : n.args) args.push_back(simplify(a));
      return func(n.name, args);
    }
    case Kind::Deriv:
      return func_deriv(simplify(n.args[0]), n.orders);
    case Kind::OpDeriv:
      return op_deriv(simplify(n.args[0]), n.var, n.op_order);
    case Kind::Deformed:
      return deformed(simplify_kernel(n.kernel), n.var, simplify(n.args[0]));
    case Kind::Pow:
      return make_pow(simplify(n.args[0]), simplify(n.args[1]));
    case Kind::Product: {
      std::vector<Expr> fs;
      fs.reserve(n.args.size());
      for (const Expr& a : n.args) fs.push_back(simplify(a));
      return make_product(std::move(fs));
    }
    case Kind::Sum: {
      std::vector<Expr> ts;
      ts.reserve(n.args.size());
      for (const Expr& a : n.args) ts.push_back(simplify(a));
      return make_sum(std::move(ts));
    }
  }
  return e;
}

namespace {

// Product of two expanded expressions, distributing over top-level sums.
Expr expanded_product(const Expr& a, const Expr& b) {
  std::vector<Expr> as = a.kind() == Kind::Sum ? a.node().args : std::vector<Expr>{a};
  std::vector<Expr> bs = b.kind() == Kind::Sum ? b.node().args : std::vector<Expr>{b};
  std::vector<Expr> terms;
  terms.reserve(as.size() * bs.size());
  for (const Expr& x : as)
    for (const Expr& y : bs) terms.push_back(make_product({x, y}));
  return make_sum(std::move(terms));
}

}  // namespace

namespace {

Expr expand_once(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Sum: {
      std::vector<Expr> ts;
      ts.reserve(n.args.size());
      for (const Expr& a : n.args) ts.push_back(expand_once(a));
      return make_sum(std::move(ts));
    }
    case Kind::Product: {
      Expr acc = number(1);
      for (const Expr& a : n.args) acc = expanded_product(acc, expand_once(a));
      return acc;
    }
    case Kind::Pow: {
      Expr b = expand_once(n.args[0]);
      Expr ex = expand_once(n.args[1]);
      if (auto r = ex.as_number();
          r && r->is_integer() && r->num() > 1 && r->num() <= 16 &&
          b.kind() == Kind::Sum) {
        Expr acc = b;
        for (long long i = 1; i < r->num(); ++i) acc = expanded_product(acc, b);
        return acc;
      }
      return make_pow(b, ex);
    }
    default:
      return simplify(e);
  }
}

}  // namespace

Expr expand(const Expr& e) {
  // Power merging during canonicalization can create fresh integer powers
  // of sums (e.g. squaring (u^2)^(1/2)), so iterate to a fixpoint.
  Expr cur = expand_once(e);
  for (int i = 0; i < 8; ++i) {
    Expr next = expand_once(cur);
    if (next.same(cur)) return cur;
    cur = next;
  }
  return cur;
}

Expr sign_normalize(const Expr& e) {
  Expr s = simplify(e);
  if (s.is_zero()) return s;
  Expr neg = simplify(make_product({number(-1), s}));
  // Negation-invariant representative: the canonically smaller of e and -e.
  return compare(s, neg) <= 0 ? s : neg;
}

}  // namespace defvar
