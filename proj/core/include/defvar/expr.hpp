#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "defvar/rational.hpp"

namespace defvar {

class Expr;

/// Multiplicative kernel k(x) of a deformed derivative D_k f = k(x) f'.
/// The conformable-interval kernel is (x-a)^(1-alpha); the lambda-exp kernel
/// is e^(-lambda x) (or e^(-lambda x / 2) when halved); the Hausdorff kernel
/// is l0 (1 + x/l0)^(1-alpha); Identity reproduces the ordinary derivative.
struct Kernel {
  enum class Tag { ConformableInterval, LambdaExp, Hausdorff, Identity };

  Tag tag = Tag::Identity;
  std::shared_ptr<const Expr> alpha;   // ConformableInterval, Hausdorff
  std::shared_ptr<const Expr> lower;   // ConformableInterval: interval start a
  std::shared_ptr<const Expr> lambda;  // LambdaExp
  std::shared_ptr<const Expr> l0;      // Hausdorff
  bool halved = false;                 // LambdaExp: e^(-lambda x / 2)

  static Kernel identity() { return Kernel{}; }
  static Kernel conformable(const Expr& alpha, const Expr& lower);
  static Kernel lambda_exp(const Expr& lambda, bool halved = false);
  static Kernel hausdorff(const Expr& alpha, const Expr& l0);

  bool operator==(const Kernel& o) const;
};

enum class Kind {
  Number,    // exact rational constant
  Euler,     // the constant e (base of exp)
  Symbol,    // free symbol: m, gamma, alpha, ...
  Func,      // dependent function applied to argument expressions: x(t), U(x(t))
  Deriv,     // derivative of a Func w.r.t. its argument slots, e.g. x'(t), U''(x)
  OpDeriv,   // unexpanded d^n/dv^n applied to a deformed-operator expression
  Deformed,  // D_k[v](inner)
  Pow,       // base ^ exponent (exponent rational constant or opaque symbolic)
  Product,
  Sum,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression handle. Cheap to copy; all operations are pure.
class Expr {
 public:
  Expr();  // zero
  explicit Expr(NodePtr n) : node_(std::move(n)) {}

  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }

  Kind kind() const;
  bool is_zero() const;
  bool is_one() const;
  bool is_number() const;
  std::optional<Rational> as_number() const;

  bool same(const Expr& other) const;  // structural equality

  // Arithmetic builders (canonicalizing).
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;

 private:
  NodePtr node_;
};

struct Node {
  Kind kind = Kind::Number;
  Rational number;            // Number
  std::string name;           // Symbol, Func
  std::vector<Expr> args;     // Func args; Sum/Product children; Pow {base, exp};
                              // Deriv {func}; OpDeriv {inner}; Deformed {inner}
  std::vector<int> orders;    // Deriv: per-argument derivative orders
  int op_order = 0;           // OpDeriv: derivative order
  std::string var;            // OpDeriv / Deformed: differentiation variable
  Kernel kernel;              // Deformed
};

// ---- constructors ----------------------------------------------------------

Expr number(const Rational& r);
Expr number(long long n);
Expr number(long long n, long long d);
Expr euler();
Expr sym(const std::string& name);
/// Dependent function f(args...). Arguments are full expressions so that
/// chained dependencies like U(x(t)) are representable.
Expr func(const std::string& name, const std::vector<Expr>& args);
/// Derivative of a dependent function w.r.t. its argument slots.
Expr func_deriv(const Expr& f, const std::vector<int>& orders);
Expr op_deriv(const Expr& inner, const std::string& var, int order);
Expr deformed(const Kernel& k, const std::string& var, const Expr& inner);

/// Raw node constructors that bypass canonicalization; used by simplify itself.
Expr raw_sum(std::vector<Expr> terms);
Expr raw_product(std::vector<Expr> factors);
Expr raw_pow(const Expr& base, const Expr& exp);

// Canonicalizing constructors (always return simplified nodes).
Expr make_sum(std::vector<Expr> terms);
Expr make_product(std::vector<Expr> factors);
Expr make_pow(const Expr& base, const Expr& exp);
Expr pow(const Expr& base, const Expr& exp);
Expr pow(const Expr& base, long long num, long long den = 1);
/// e^(u) represented as Pow(Euler, u).
Expr exp_of(const Expr& u);

// ---- structural queries ----------------------------------------------------

/// Total deterministic order; 0 iff structurally equal.
int compare(const Expr& a, const Expr& b);

/// True if `inside` occurs as a subtree of `e` (descending everywhere).
bool contains(const Expr& e, const Expr& inside);

/// True if the value of `e` depends on the variable named `v` (symbols,
/// function arguments, derivative variables and kernels are all inspected).
bool depends_on(const Expr& e, const std::string& v);

/// All distinct symbol names occurring in `e`.
std::vector<std::string> free_symbols(const Expr& e);

/// Structural substitution: every subtree equal to `target` becomes
/// `replacement`; the result is re-canonicalized.
Expr substitute(const Expr& e, const Expr& target, const Expr& replacement);

/// Variational slot substitution: like substitute() but treats Deriv,
/// OpDeriv and Deformed nodes as atoms (never descends into them), so that
/// y and its derivative slots stay independent.
Expr substitute_slot(const Expr& e, const Expr& target, const Expr& replacement);

struct DefvarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnboundSymbol : DefvarError { using DefvarError::DefvarError; };
struct EvalSingularity : DefvarError { using DefvarError::DefvarError; };
struct ParseError : DefvarError {
  ParseError(const std::string& msg, size_t pos)
      : DefvarError(msg + " at position " + std::to_string(pos)), position(pos) {}
  size_t position;
};
struct AllPointsSingular : DefvarError { using DefvarError::DefvarError; };
struct LimitSingular : DefvarError { using DefvarError::DefvarError; };
struct UnknownVariable : DefvarError { using DefvarError::DefvarError; };
struct MissingKernel : DefvarError { using DefvarError::DefvarError; };
struct NonInvertibleMomentum : DefvarError { using DefvarError::DefvarError; };
struct UnknownSystem : DefvarError { using DefvarError::DefvarError; };
struct BadParameter : DefvarError { using DefvarError::DefvarError; };

}  // namespace defvar
