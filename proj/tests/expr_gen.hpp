#pragma once

#include <random>
#include <vector>

#include "defvar/calculus.hpp"
#include "defvar/expr.hpp"
#include "defvar/simplify.hpp"

namespace defvar::testing {

// Random smooth expressions over a small symbol pool. Exponents are kept
// positive-integer or 1/2 so that evaluation at positive sample points is
// never singular and derivatives stay smooth.
class ExprGen {
 public:
  explicit ExprGen(unsigned long long seed) : rng_(seed) {}

  Expr gen(int depth = 3) {
    if (depth <= 0) return leaf();
    switch (rng_() % 6) {
      case 0:
      case 1:
        return leaf();
      case 2: {
        std::vector<Expr> ts;
        for (int i = 0, n = 2 + int(rng_() % 2); i < n; ++i)
          ts.push_back(gen(depth - 1));
        return make_sum(std::move(ts));
      }
      case 3: {
        std::vector<Expr> fs;
        for (int i = 0, n = 2 + int(rng_() % 2); i < n; ++i)
          fs.push_back(gen(depth - 1));
        return make_product(std::move(fs));
      }
      case 4:
        return make_pow(gen(depth - 1), number(1 + (long long)(rng_() % 3)));
      default: {
        // fractional power over a squared base keeps samples real
        Expr b = gen(depth - 1);
        return make_pow(make_pow(b, number(2)), number(1, 2));
      }
    }
  }

  const std::vector<std::string>& symbols() const { return symbols_; }

  Bindings random_point() {
    Bindings b;
    std::uniform_real_distribution<double> d(0.4, 1.9);
    for (const auto& s : symbols_) b.set(s, d(rng_));
    return b;
  }

 private:
  Expr leaf() {
    switch (rng_() % 4) {
      case 0:
        return number((long long)(rng_() % 7) - 3);
      case 1:
        return number(Rational(1 + (long long)(rng_() % 5),
                               1 + (long long)(rng_() % 4)));
      default:
        return sym(symbols_[rng_() % symbols_.size()]);
    }
  }

  std::mt19937_64 rng_;
  std::vector<std::string> symbols_ = {"x", "y", "t"};
};

}  // namespace defvar::testing
