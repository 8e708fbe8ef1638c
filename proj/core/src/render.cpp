#include "defvar/render.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace defvar {

namespace {

// ---- plain ------------------------------------------------------------

std::string plain(const Expr& e);

bool needs_parens_as_base(const Expr& e) {
  switch (e.kind()) {
    case Kind::Sum:
    case Kind::Product:
    case Kind::Pow:
      return true;
    case Kind::Number: {
      auto r = *e.as_number();
      return r.is_negative() || !r.is_integer();
    }
    default:
      return false;
  }
}

std::string plain_exponent(const Expr& e) {
  if (auto r = e.as_number(); r && r->is_integer() && !r->is_negative())
    return r->str();
  if (e.kind() == Kind::Symbol) return e.node().name;
  return "(" + plain(e) + ")";
}

std::pair<Rational, std::string> plain_term(const Expr& term);

std::string plain_kernel(const Kernel& k) {
  switch (k.tag) {
    case Kernel::Tag::Identity:
      return "id";
    case Kernel::Tag::ConformableInterval:
      return "conf(" + plain(*k.alpha) + "," + plain(*k.lower) + ")";
    case Kernel::Tag::LambdaExp:
      return std::string(k.halved ? "lexp2(" : "lexp(") + plain(*k.lambda) + ")";
    case Kernel::Tag::Hausdorff:
      return "haus(" + plain(*k.alpha) + "," + plain(*k.l0) + ")";
  }
  return "id";
}

std::string plain_deriv(const Node& n) {
  const Node& f = n.args[0].node();
  bool single = f.args.size() == 1;
  if (single) {
    std::string s = f.name;
    s.append(static_cast<size_t>(n.orders[0]), '\'');
    return s + "(" + plain(f.args[0]) + ")";
  }
  bool symbol_args = true;
  for (size_t i = 0; i < f.args.size(); ++i)
    if (n.orders[i] > 0 && f.args[i].kind() != Kind::Symbol) symbol_args = false;
  if (symbol_args) {
    std::string s = plain(n.args[0]);
    for (size_t i = 0; i < f.args.size(); ++i) {
      if (n.orders[i] == 0) continue;
      const std::string v = f.args[i].node().name;
      std::string op = n.orders[i] == 1
                           ? "d/d" + v
                           : "d^" + std::to_string(n.orders[i]) + "/d" + v + "^" +
                                 std::to_string(n.orders[i]);
      s = op + "(" + s + ")";
    }
    return s;
  }
  std::string s = "pd[";
  for (size_t i = 0; i < n.orders.size(); ++i)
    s += (i ? "," : "") + std::to_string(n.orders[i]);
  return s + "](" + plain(n.args[0]) + ")";
}

std::string join_coeff(const Rational& mag, const std::string& body) {
  if (body.empty()) return mag.str();
  if (mag.is_one()) return body;
  if (body.rfind("1/", 0) == 0) return mag.str() + body.substr(1);
  return mag.str() + "*" + body;
}

std::string plain_product(const Expr& e) {
  auto [coeff, body] = plain_term(e);
  if (coeff == Rational(-1) && !body.empty()) return "-" + body;
  if (coeff.is_negative()) return "-" + join_coeff(-coeff, body);
  return join_coeff(coeff, body);
}

// Renders the non-constant part of a product, folding negative exponents
// into a denominator; returns (rational coefficient, body text).
std::pair<Rational, std::string> plain_term(const Expr& term) {
  if (auto r = term.as_number()) return {*r, ""};
  std::vector<Expr> factors =
      term.kind() == Kind::Product ? term.node().args : std::vector<Expr>{term};
  Rational coeff(1);
  std::vector<std::string> num;
  std::vector<std::string> den;
  for (const Expr& f : factors) {
    if (auto r = f.as_number()) {
      coeff *= *r;
      continue;
    }
    if (f.kind() == Kind::Pow) {
      const Expr& b = f.node().args[0];
      const Expr& ex = f.node().args[1];
      if (auto r = ex.as_number(); r && r->is_negative()) {
        Expr inv = make_pow(b, number(-*r));
        std::string s = plain(inv);
        if (inv.kind() == Kind::Sum || inv.kind() == Kind::Product)
          s = "(" + s + ")";
        den.push_back(s);
        continue;
      }
    }
    std::string s = plain(f);
    if (f.kind() == Kind::Sum) s = "(" + s + ")";
    num.push_back(s);
  }
  std::string body;
  for (size_t i = 0; i < num.size(); ++i) body += (i ? "*" : "") + num[i];
  if (!den.empty()) {
    if (body.empty()) body = "1";
    std::string d;
    for (size_t i = 0; i < den.size(); ++i) d += (i ? "*" : "") + den[i];
    if (den.size() > 1) d = "(" + d + ")";
    body += "/" + d;
  }
  return {coeff, body};
}

std::string plain(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number:
      return n.number.str();
    case Kind::Euler:
      return "exp(1)";
    case Kind::Symbol:
      return n.name;
    case Kind::Func: {
      std::string s = n.name + "(";
      for (size_t i = 0; i < n.args.size(); ++i)
        s += (i ? "," : "") + plain(n.args[i]);
      return s + ")";
    }
    case Kind::Deriv:
      return plain_deriv(n);
    case Kind::OpDeriv: {
      std::string op =
          n.op_order == 1 ? "d/d" + n.var
                          : "d^" + std::to_string(n.op_order) + "/d" + n.var +
                                "^" + std::to_string(n.op_order);
      return op + "(" + plain(n.args[0]) + ")";
    }
    case Kind::Deformed:
      return "D[" + plain_kernel(n.kernel) + "," + n.var + "](" +
             plain(n.args[0]) + ")";
    case Kind::Pow: {
      if (n.args[0].kind() == Kind::Euler) return "exp(" + plain(n.args[1]) + ")";
      std::string b = plain(n.args[0]);
      if (needs_parens_as_base(n.args[0])) b = "(" + b + ")";
      return b + "^" + plain_exponent(n.args[1]);
    }
    case Kind::Product:
      return plain_product(e);
    case Kind::Sum: {
      std::string out;
      for (size_t i = 0; i < n.args.size(); ++i) {
        auto [coeff, body] = plain_term(n.args[i]);
        bool neg = coeff.is_negative();
        Rational mag = neg ? -coeff : coeff;
        std::string piece = join_coeff(mag, body);
        if (i == 0) {
          out = (neg ? "-" : "") + piece;
        } else {
          out += (neg ? " - " : " + ") + piece;
        }
      }
      return out;
    }
  }
  return "?";
}

// ---- latex ------------------------------------------------------------

std::string latex(const Expr& e);

std::string latex_name(const std::string& name) {
  static const std::array<const char*, 24> greek = {
      "alpha", "beta",  "gamma", "delta", "epsilon", "zeta", "eta",   "theta",
      "iota",  "kappa", "lambda", "mu",   "nu",      "xi",   "pi",    "rho",
      "sigma", "tau",   "upsilon", "phi", "chi",     "psi",  "omega", "Omega"};
  std::string base = name;
  std::string sub;
  size_t us = name.find('_');
  if (us != std::string::npos) {
    base = name.substr(0, us);
    sub = name.substr(us + 1);
  } else {
    size_t d = name.find_last_not_of("0123456789");
    if (d != std::string::npos && d + 1 < name.size()) {
      base = name.substr(0, d + 1);
      sub = name.substr(d + 1);
    }
  }
  for (const char* g : greek)
    if (base == g) {
      base = "\\" + base;
      break;
    }
  if (!sub.empty()) base += "_{" + sub + "}";
  return base;
}

std::string latex_func_head(const Expr& f) {
  return latex_name(f.node().name);
}

std::string latex_arg_head(const Expr& arg) {
  if (arg.kind() == Kind::Symbol || arg.kind() == Kind::Func)
    return latex_name(arg.node().name);
  return "u";
}

std::string latex_deriv(const Node& n) {
  const Node& f = n.args[0].node();
  int total = 0;
  for (int o : n.orders) total += o;
  bool partial = f.args.size() > 1;
  std::string dsym = partial ? "\\partial" : "d";
  std::string sep = partial ? " " : "";
  std::string top = dsym +
                    (total > 1 ? "^{" + std::to_string(total) + "}" : "") + sep +
                    latex_name(f.name);
  std::string bottom;
  for (size_t i = 0; i < f.args.size(); ++i) {
    if (n.orders[i] == 0) continue;
    bottom += dsym + sep + latex_arg_head(f.args[i]);
    if (n.orders[i] > 1) bottom += "^{" + std::to_string(n.orders[i]) + "}";
  }
  return "\\frac{" + top + "}{" + bottom + "}";
}

std::string latex_kernel_prefix(const Kernel& k, const std::string& var) {
  switch (k.tag) {
    case Kernel::Tag::Identity:
      return "D_{" + latex_name(var) + "}";
    case Kernel::Tag::ConformableInterval:
      return "{}_{" + latex(*k.lower) + "}D_{" + latex_name(var) + "}^{" +
             latex(*k.alpha) + "}";
    case Kernel::Tag::LambdaExp:
      return "\\mathcal{D}_{" + latex_name(var) + "}^{" +
             std::string(k.halved ? "\\lambda/2" : "\\lambda") + "}";
    case Kernel::Tag::Hausdorff:
      return "{}^{H}D_{" + latex_name(var) + "}^{" + latex(*k.alpha) + "}";
  }
  return "D";
}

std::pair<Rational, std::string> latex_term(const Expr& term);

std::string latex(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number: {
      if (n.number.is_integer()) return n.number.str();
      std::string s = "\\frac{" + std::to_string(std::abs(n.number.num())) +
                      "}{" + std::to_string(n.number.den()) + "}";
      return n.number.is_negative() ? "-" + s : s;
    }
    case Kind::Euler:
      return "e";
    case Kind::Symbol:
      return latex_name(n.name);
    case Kind::Func:
      return latex_func_head(e);
    case Kind::Deriv:
      return latex_deriv(n);
    case Kind::OpDeriv: {
      std::string ord =
          n.op_order > 1 ? "^{" + std::to_string(n.op_order) + "}" : "";
      return "\\frac{d" + ord + "}{d" + latex_name(n.var) + ord + "}\\left[" +
             latex(n.args[0]) + "\\right]";
    }
    case Kind::Deformed: {
      std::string inner = latex(n.args[0]);
      std::string pre = latex_kernel_prefix(n.kernel, n.var);
      if (n.args[0].kind() == Kind::Func) return pre + inner;
      return pre + "\\left(" + inner + "\\right)";
    }
    case Kind::Pow: {
      if (n.args[0].kind() == Kind::Euler)
        return "e^{" + latex(n.args[1]) + "}";
      std::string b = latex(n.args[0]);
      if (needs_parens_as_base(n.args[0]) || n.args[0].kind() == Kind::Deriv ||
          n.args[0].kind() == Kind::Deformed)
        b = "\\left(" + b + "\\right)";
      return b + "^{" + latex(n.args[1]) + "}";
    }
    case Kind::Product: {
      auto [coeff, body] = latex_term(e);
      std::string out;
      if (coeff == Rational(-1) && !body.empty())
        out = "-" + body;
      else if (coeff.is_one() && !body.empty())
        out = body;
      else {
        out = latex(number(coeff));
        if (!body.empty()) out += "\\," + body;
      }
      return out;
    }
    case Kind::Sum: {
      std::string out;
      for (size_t i = 0; i < n.args.size(); ++i) {
        auto [coeff, body] = latex_term(n.args[i]);
        bool neg = coeff.is_negative();
        Rational mag = neg ? -coeff : coeff;
        std::string piece;
        if (body.empty())
          piece = latex(number(mag));
        else if (mag.is_one())
          piece = body;
        else
          piece = latex(number(mag)) + "\\," + body;
        if (i == 0)
          out = (neg ? "-" : "") + piece;
        else
          out += (neg ? " - " : " + ") + piece;
      }
      return out;
    }
  }
  return "?";
}

std::pair<Rational, std::string> latex_term(const Expr& term) {
  if (auto r = term.as_number()) return {*r, ""};
  std::vector<Expr> factors =
      term.kind() == Kind::Product ? term.node().args : std::vector<Expr>{term};
  Rational coeff(1);
  std::vector<std::string> num;
  std::vector<std::string> den;
  for (const Expr& f : factors) {
    if (auto r = f.as_number()) {
      coeff *= *r;
      continue;
    }
    if (f.kind() == Kind::Pow) {
      const Expr& ex = f.node().args[1];
      if (auto r = ex.as_number(); r && r->is_negative()) {
        den.push_back(latex(make_pow(f.node().args[0], number(-*r))));
        continue;
      }
    }
    std::string s = latex(f);
    if (f.kind() == Kind::Sum) s = "\\left(" + s + "\\right)";
    num.push_back(s);
  }
  std::string body;
  for (size_t i = 0; i < num.size(); ++i) body += (i ? "\\," : "") + num[i];
  if (!den.empty()) {
    std::string d;
    for (size_t i = 0; i < den.size(); ++i) d += (i ? "\\," : "") + den[i];
    body = "\\frac{" + (body.empty() ? "1" : body) + "}{" + d + "}";
  }
  return {coeff, body};
}

// ---- sexpr ------------------------------------------------------------

std::string sexpr(const Expr& e);

std::string sexpr_kernel(const Kernel& k) {
  switch (k.tag) {
    case Kernel::Tag::Identity:
      return "id";
    case Kernel::Tag::ConformableInterval:
      return "(conf " + sexpr(*k.alpha) + " " + sexpr(*k.lower) + ")";
    case Kernel::Tag::LambdaExp:
      return std::string(k.halved ? "(lexp2 " : "(lexp ") + sexpr(*k.lambda) + ")";
    case Kernel::Tag::Hausdorff:
      return "(haus " + sexpr(*k.alpha) + " " + sexpr(*k.l0) + ")";
  }
  return "id";
}

std::string sexpr(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number:
      return n.number.str();
    case Kind::Euler:
      return "(euler)";
    case Kind::Symbol:
      return n.name;
    case Kind::Func: {
      std::string s = "(fn " + n.name;
      for (const Expr& a : n.args) s += " " + sexpr(a);
      return s + ")";
    }
    case Kind::Deriv: {
      std::string s = "(pd (";
      for (size_t i = 0; i < n.orders.size(); ++i)
        s += (i ? " " : "") + std::to_string(n.orders[i]);
      return s + ") " + sexpr(n.args[0]) + ")";
    }
    case Kind::OpDeriv:
      return "(od " + n.var + " " + std::to_string(n.op_order) + " " +
             sexpr(n.args[0]) + ")";
    case Kind::Deformed:
      return "(D " + sexpr_kernel(n.kernel) + " " + n.var + " " +
             sexpr(n.args[0]) + ")";
    case Kind::Pow:
      return "(^ " + sexpr(n.args[0]) + " " + sexpr(n.args[1]) + ")";
    case Kind::Product: {
      std::string s = "(*";
      for (const Expr& a : n.args) s += " " + sexpr(a);
      return s + ")";
    }
    case Kind::Sum: {
      std::string s = "(+";
      for (const Expr& a : n.args) s += " " + sexpr(a);
      return s + ")";
    }
  }
  return "?";
}

}  // namespace

std::string render(const Expr& e, Format format) {
  switch (format) {
    case Format::Plain:
      return plain(e);
    case Format::Latex:
      return latex(e);
    case Format::Sexpr:
      return sexpr(e);
  }
  return plain(e);
}

}  // namespace defvar
