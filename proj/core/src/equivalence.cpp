#include <cmath>
#include <numbers>
#include <random>

#include "defvar/calculus.hpp"
#include "defvar/simplify.hpp"

namespace defvar {

namespace {

bool is_atom(const Expr& e) {
  switch (e.kind()) {
    case Kind::Symbol:
    case Kind::Func:
    case Kind::Deriv:
    case Kind::OpDeriv:
    case Kind::Deformed:
      return true;
    default:
      return false;
  }
}

void collect_atoms(const Expr& e, std::vector<Expr>& atoms) {
  if (is_atom(e)) {
    for (const Expr& a : atoms)
      if (a.same(e)) return;
    atoms.push_back(e);
    return;  // atoms are opaque: their internals are not sampled separately
  }
  for (const Expr& c : e.node().args) collect_atoms(c, atoms);
}

double eval_with_atoms(const Expr& e, const std::vector<Expr>& atoms,
                       const std::vector<double>& values) {
  if (is_atom(e)) {
    for (size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i].same(e)) return values[i];
    throw DefvarError("atom escaped collection in equivalence sampling");
  }
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number:
      return n.number.to_double();
    case Kind::Euler:
      return std::numbers::e;
    case Kind::Pow: {
      double b = eval_with_atoms(n.args[0], atoms, values);
      double x = eval_with_atoms(n.args[1], atoms, values);
      if (b == 0.0 && x < 0.0) throw EvalSingularity("0^negative");
      if (b < 0.0 && x != std::floor(x))
        throw EvalSingularity("negative base, fractional exponent");
      double r = std::pow(b, x);
      if (!std::isfinite(r)) throw EvalSingularity("non-finite");
      return r;
    }
    case Kind::Product: {
      double r = 1.0;
      for (const Expr& a : n.args) r *= eval_with_atoms(a, atoms, values);
      return r;
    }
    case Kind::Sum: {
      double r = 0.0;
      for (const Expr& a : n.args) r += eval_with_atoms(a, atoms, values);
      return r;
    }
    default:
      throw DefvarError("unexpected node in equivalence evaluation");
  }
}

}  // namespace

EquivalenceResult equivalent_detail(const Expr& a, const Expr& b, int trials,
                                    unsigned long long seed, double tol) {
  Expr diff = simplify(a - b);
  if (diff.is_zero()) return {true, EquivalenceResult::Path::Structural, 0};

  Expr sa = simplify(a);
  Expr sb = simplify(b);
  std::vector<Expr> atoms;
  collect_atoms(sa, atoms);
  collect_atoms(sb, atoms);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.5, 2.5);

  int done = 0;
  int attempts = 0;
  const int max_attempts = 60 * std::max(trials, 1) + 200;
  std::vector<double> values(atoms.size());
  while (done < trials) {
    if (++attempts > max_attempts)
      throw AllPointsSingular("no non-singular sample point found");
    for (double& v : values) v = dist(rng);
    double va, vb;
    try {
      va = eval_with_atoms(sa, atoms, values);
      vb = eval_with_atoms(sb, atoms, values);
    } catch (const EvalSingularity&) {
      continue;
    }
    if (!std::isfinite(va) || !std::isfinite(vb)) continue;
    if (std::abs(va - vb) > tol * (1.0 + std::abs(va)))
      return {false, EquivalenceResult::Path::Sampled, done + 1};
    ++done;
  }
  return {true, EquivalenceResult::Path::Sampled, done};
}

bool equivalent(const Expr& a, const Expr& b, int trials,
                unsigned long long seed, double tol) {
  return equivalent_detail(a, b, trials, seed, tol).equivalent;
}

}  // namespace defvar
