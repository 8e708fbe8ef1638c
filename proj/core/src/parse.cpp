#include <cctype>
#include <cstdlib>

#include "defvar/calculus.hpp"
#include "defvar/render.hpp"
#include "defvar/simplify.hpp"

namespace defvar {

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;

  explicit Lexer(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw ParseError(std::string("expected '") + c + "'", pos);
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  bool ident_ahead() {
    char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) throw ParseError("expected identifier", pos);
    return text.substr(start, pos - start);
  }
  long long integer() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos == start) throw ParseError("expected integer", pos);
    return std::stoll(text.substr(start, pos - start));
  }
};

struct PlainParser {
  Lexer lex;
  const std::map<std::string, std::vector<std::string>>* dynamical = nullptr;

  explicit PlainParser(const std::string& t) : lex(t) {}

  Expr parse_all() {
    Expr e = expr();
    if (!lex.at_end()) throw ParseError("unexpected trailing input", lex.pos);
    return simplify(e);
  }

  Expr expr() {
    Expr e = term();
    while (true) {
      if (lex.eat('+')) {
        e = e + term();
      } else if (lex.eat('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    while (true) {
      if (lex.eat('*')) {
        e = e * unary();
      } else if (lex.eat('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (lex.eat('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (lex.eat('^')) return make_pow(base, unary());
    return base;
  }

  std::vector<Expr> arg_list() {
    lex.expect('(');
    std::vector<Expr> args;
    if (!lex.eat(')')) {
      args.push_back(expr());
      while (lex.eat(',')) args.push_back(expr());
      lex.expect(')');
    }
    return args;
  }

  Kernel kernel_spec() {
    std::string name = lex.ident();
    if (name == "id") return Kernel::identity();
    lex.expect('(');
    if (name == "conf" || name == "haus") {
      Expr a = expr();
      lex.expect(',');
      Expr b = expr();
      lex.expect(')');
      return name == "conf" ? Kernel::conformable(a, b) : Kernel::hausdorff(a, b);
    }
    if (name == "lexp" || name == "lexp2") {
      Expr l = expr();
      lex.expect(')');
      return Kernel::lambda_exp(l, name == "lexp2");
    }
    throw ParseError("unknown kernel '" + name + "'", lex.pos);
  }

  // d/dv(e), d^n/dv^n(e), or the call form d(e, v[, n]).
  Expr derivative_op() {
    if (lex.peek() == '(') {
      auto args = arg_list();
      if (args.size() < 2 || args.size() > 3)
        throw ParseError("d(expr, var[, order]) takes 2 or 3 arguments", lex.pos);
      if (args[1].kind() != Kind::Symbol)
        throw ParseError("second argument of d() must be a variable", lex.pos);
      int order = 1;
      if (args.size() == 3) {
        auto r = args[2].as_number();
        if (!r || !r->is_integer() || r->num() <= 0)
          throw ParseError("derivative order must be a positive integer", lex.pos);
        order = static_cast<int>(r->num());
      }
      return differentiate(args[0], args[1].node().name, order);
    }
    int order = 1;
    if (lex.eat('^')) order = static_cast<int>(lex.integer());
    lex.expect('/');
    std::string dv = lex.ident();
    if (dv.size() < 2 || dv[0] != 'd')
      throw ParseError("expected dVAR in derivative operator", lex.pos);
    std::string var = dv.substr(1);
    if (order > 1) {
      lex.expect('^');
      long long o2 = lex.integer();
      if (o2 != order)
        throw ParseError("mismatched derivative orders", lex.pos);
    }
    lex.expect('(');
    Expr inner = expr();
    lex.expect(')');
    return differentiate(inner, var, order);
  }

  Expr primary() {
    lex.skip_ws();
    char c = lex.peek();
    if (c == '(') {
      lex.expect('(');
      Expr e = expr();
      lex.expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number_literal();
    if (!lex.ident_ahead()) throw ParseError("unexpected character", lex.pos);
    size_t save = lex.pos;
    std::string name = lex.ident();
    if (name == "d" && (lex.peek() == '/' || lex.peek() == '^' || lex.peek() == '(')) {
      return derivative_op();
    }
    if (name == "D" && lex.peek() == '[') {
      lex.expect('[');
      Kernel k = kernel_spec();
      lex.expect(',');
      std::string var = lex.ident();
      lex.expect(']');
      lex.expect('(');
      Expr inner = expr();
      lex.expect(')');
      return deformed(k, var, inner);
    }
    if (name == "exp" && lex.peek() == '(') {
      auto args = arg_list();
      if (args.size() != 1) throw ParseError("exp() takes one argument", lex.pos);
      return exp_of(args[0]);
    }
    // primes: f''(args)
    int primes = 0;
    while (lex.peek() == '\'') {
      lex.expect('\'');
      ++primes;
    }
    if (lex.peek() == '(') {
      auto args = arg_list();
      Expr f = func(name, args);
      if (primes == 0) return f;
      if (args.size() != 1)
        throw ParseError("prime notation requires a single-argument function",
                         lex.pos);
      return func_deriv(f, {primes});
    }
    if (primes > 0)
      throw ParseError("prime notation requires an argument list", lex.pos);
    lex.pos = save;
    std::string b = lex.ident();
    if (dynamical) {
      auto it = dynamical->find(b);
      if (it != dynamical->end()) {
        std::vector<Expr> args;
        args.reserve(it->second.size());
        for (const auto& iv : it->second) args.push_back(sym(iv));
        return func(b, args);
      }
    }
    return sym(b);
  }

  Expr number_literal() {
    lex.skip_ws();
    long long ip = lex.integer();
    if (lex.pos < lex.text.size() && lex.text[lex.pos] == '.') {
      ++lex.pos;
      size_t start = lex.pos;
      long long frac = lex.integer();
      size_t digits = lex.pos - start;
      Rational den(1);
      for (size_t i = 0; i < digits; ++i) den *= Rational(10);
      return number(Rational(ip) + Rational(frac) / den);
    }
    return number(ip);
  }
};

// ---- sexpr ------------------------------------------------------------

struct SexprParser {
  Lexer lex;

  explicit SexprParser(const std::string& t) : lex(t) {}

  Expr parse_all() {
    Expr e = value();
    if (!lex.at_end()) throw ParseError("unexpected trailing input", lex.pos);
    return simplify(e);
  }

  std::string atom() {
    lex.skip_ws();
    size_t start = lex.pos;
    while (lex.pos < lex.text.size() && !std::isspace(static_cast<unsigned char>(
                                            lex.text[lex.pos])) &&
           lex.text[lex.pos] != '(' && lex.text[lex.pos] != ')')
      ++lex.pos;
    if (lex.pos == start) throw ParseError("expected atom", lex.pos);
    return lex.text.substr(start, lex.pos - start);
  }

  Expr number_atom(const std::string& a) {
    size_t slash = a.find('/');
    if (slash == std::string::npos) return number(std::stoll(a));
    return number(Rational(std::stoll(a.substr(0, slash)),
                           std::stoll(a.substr(slash + 1))));
  }

  bool looks_numeric(const std::string& a) {
    size_t i = a[0] == '-' ? 1 : 0;
    return i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]));
  }

  Kernel kernel_value() {
    lex.skip_ws();
    if (lex.peek() != '(') {
      std::string a = atom();
      if (a == "id") return Kernel::identity();
      throw ParseError("unknown kernel '" + a + "'", lex.pos);
    }
    lex.expect('(');
    std::string head = atom();
    if (head == "conf" || head == "haus") {
      Expr x = value();
      Expr y = value();
      lex.expect(')');
      return head == "conf" ? Kernel::conformable(x, y) : Kernel::hausdorff(x, y);
    }
    if (head == "lexp" || head == "lexp2") {
      Expr l = value();
      lex.expect(')');
      return Kernel::lambda_exp(l, head == "lexp2");
    }
    throw ParseError("unknown kernel '" + head + "'", lex.pos);
  }

  Expr value() {
    lex.skip_ws();
    if (lex.peek() != '(') {
      std::string a = atom();
      if (looks_numeric(a)) return number_atom(a);
      return sym(a);
    }
    lex.expect('(');
    std::string head = atom();
    std::vector<Expr> items;
    if (head == "euler") {
      lex.expect(')');
      return euler();
    }
    if (head == "fn") {
      std::string name = atom();
      while (lex.peek() != ')') items.push_back(value());
      lex.expect(')');
      return func(name, items);
    }
    if (head == "pd") {
      lex.expect('(');
      std::vector<int> orders;
      while (lex.peek() != ')') orders.push_back(static_cast<int>(std::stoll(atom())));
      lex.expect(')');
      Expr f = value();
      lex.expect(')');
      return func_deriv(f, orders);
    }
    if (head == "od") {
      std::string var = atom();
      int order = static_cast<int>(std::stoll(atom()));
      Expr inner = value();
      lex.expect(')');
      return op_deriv(inner, var, order);
    }
    if (head == "D") {
      Kernel k = kernel_value();
      std::string var = atom();
      Expr inner = value();
      lex.expect(')');
      return deformed(k, var, inner);
    }
    if (head == "exp") {
      Expr u = value();
      lex.expect(')');
      return exp_of(u);
    }
    while (lex.peek() != ')') items.push_back(value());
    lex.expect(')');
    if (head == "+") return make_sum(std::move(items));
    if (head == "*") return make_product(std::move(items));
    if (head == "^") {
      if (items.size() != 2) throw ParseError("(^ base exp) takes 2 items", lex.pos);
      return make_pow(items[0], items[1]);
    }
    throw ParseError("unknown sexpr head '" + head + "'", lex.pos);
  }
};

bool looks_like_sexpr(const std::string& text) {
  size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i >= text.size() || text[i] != '(') return false;
  ++i;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i >= text.size()) return false;
  char c = text[i];
  if (c == '+' || c == '*' || c == '^') return true;
  size_t start = i;
  while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                             text[i] == '_'))
    ++i;
  std::string head = text.substr(start, i - start);
  if (i < text.size() && text[i] == '(')
    return false;  // "(exp(..." is a parenthesized plain function call
  return head == "fn" || head == "pd" || head == "od" || head == "D" ||
         head == "euler" || head == "exp";
}

}  // namespace

Expr parse(const std::string& text) {
  if (looks_like_sexpr(text)) return SexprParser(text).parse_all();
  return PlainParser(text).parse_all();
}

Expr parse(const std::string& text,
           const std::map<std::string, std::vector<std::string>>& dynamical) {
  if (looks_like_sexpr(text)) return SexprParser(text).parse_all();
  PlainParser p(text);
  p.dynamical = &dynamical;
  return p.parse_all();
}

}  // namespace defvar
