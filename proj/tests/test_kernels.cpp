#include <doctest.h>

#include <cmath>

#include "defvar/calculus.hpp"
#include "defvar/kernel.hpp"
#include "defvar/render.hpp"
#include "defvar/simplify.hpp"

using namespace defvar;

TEST_CASE("kernel factors") {
  Expr t = sym("t"), a = sym("a");
  CHECK(kernel_factor(Kernel::conformable(number(1, 2), a), "t")
            .same(pow(t - a, 1, 2)));
  CHECK(kernel_factor(Kernel::identity(), "t").is_one());
  Expr lam = sym("lambda");
  CHECK(kernel_factor(Kernel::lambda_exp(lam, true), "t")
            .same(exp_of(-(lam / number(2) * t))));
  CHECK(kernel_factor(Kernel::lambda_exp(lam, false), "t")
            .same(exp_of(-(lam * t))));
  Expr l0 = sym("l0"), alpha = sym("alpha");
  CHECK(kernel_factor(Kernel::hausdorff(alpha, l0), "x")
            .same(simplify(l0 * make_pow(number(1) + sym("x") / l0,
                                         number(1) - alpha))));
}

TEST_CASE("expand_deformed rewrites to kernel times derivative") {
  Expr t = sym("t");
  Kernel k = Kernel::conformable(number(1, 2), number(0));
  CHECK(expand_deformed(deformed(k, "t", pow(t, 2)))
            .same(simplify(number(2) * pow(t, 3, 2))));
  CHECK(expand_deformed(deformed(k, "t", sym("c"))).is_zero());

  Expr q = func("q", {t});
  Expr lam = sym("lambda");
  CHECK(expand_deformed(deformed(Kernel::lambda_exp(lam), "t", q))
            .same(simplify(exp_of(-(lam * t)) * func_deriv(q, {1}))));
}

TEST_CASE("degenerations reproduce the ordinary derivative") {
  Expr t = sym("t"), a = sym("a");
  Expr xf = func("x", {t});
  Kernel k1 = Kernel::conformable(number(1), a);
  CHECK(expand_deformed(deformed(k1, "t", xf)).same(func_deriv(xf, {1})));
  Kernel k0 = Kernel::lambda_exp(number(0));
  CHECK(expand_deformed(deformed(k0, "t", xf)).same(func_deriv(xf, {1})));
  // alpha = 1 Hausdorff degenerates to l0 * d/dx
  Kernel kh = Kernel::hausdorff(number(1), sym("l0"));
  CHECK(expand_deformed(deformed(kh, "x", func("u", {sym("x")})))
            .same(simplify(sym("l0") * func_deriv(func("u", {sym("x")}), {1}))));
}

TEST_CASE("deformed operator is linear and satisfies Leibniz") {
  Expr t = sym("t"), a = sym("a");
  Kernel k = Kernel::conformable(sym("alpha"), a);
  Expr f = func("f", {t});
  Expr g = func("g", {t});
  Expr c1 = sym("c1"), c2 = sym("c2");

  Expr lin_lhs = expand(expand_deformed(deformed(k, "t", c1 * f + c2 * g)));
  Expr lin_rhs = expand(c1 * expand_deformed(deformed(k, "t", f)) +
                        c2 * expand_deformed(deformed(k, "t", g)));
  CHECK(lin_lhs.same(lin_rhs));

  Expr leib_lhs = expand_deformed(deformed(k, "t", f * g));
  Expr leib_rhs = simplify(f * expand_deformed(deformed(k, "t", g)) +
                           g * expand_deformed(deformed(k, "t", f)));
  CHECK(equivalent(leib_lhs, leib_rhs));
}

TEST_CASE("numeric deformed derivative agrees with the symbolic expansion") {
  struct Case {
    Kernel kernel;
    const char* name;
  };
  std::vector<Case> kernels = {
      {Kernel::conformable(number(1, 2), number(0)), "conf"},
      {Kernel::lambda_exp(number(1, 4)), "lexp"},
      {Kernel::lambda_exp(number(1, 4), true), "lexp2"},
      {Kernel::hausdorff(number(1, 2), number(2)), "haus"},
      {Kernel::identity(), "id"},
  };
  Expr t = sym("t");
  Expr expr = pow(t, 3) + number(2) * t;  // smooth test function
  auto fn = [](double x) { return x * x * x + 2.0 * x; };

  for (const auto& c : kernels) {
    Expr symbolic = expand_deformed(deformed(c.kernel, "t", expr));
    for (int i = 0; i < 50; ++i) {
      double x = 0.3 + 0.05 * i;
      double numeric = eval_deformed_numeric(fn, c.kernel, x, 1e-7);
      double exact = evaluate(symbolic, Bindings{}.set("t", x));
      CHECK_MESSAGE(std::abs(numeric - exact) <= 1e-4 * (1.0 + std::abs(exact)),
                    c.name, " at x=", x);
    }
  }
}

TEST_CASE("numeric quotient special cases") {
  auto sq = [](double x) { return x * x; };
  Kernel k = Kernel::conformable(number(1, 2), number(0));
  // f = t^2, alpha = 1/2, a = 0: exact value 2 t^(3/2) = 16 at t = 4
  CHECK(eval_deformed_numeric(sq, k, 4.0, 1e-6) ==
        doctest::Approx(16.0).epsilon(1e-4));
  auto c5 = [](double) { return 5.0; };
  CHECK(eval_deformed_numeric(c5, k, 2.0, 1e-6) == doctest::Approx(0.0));
  auto cube = [](double x) { return x * x * x; };
  CHECK(eval_deformed_numeric(cube, Kernel::identity(), 2.0, 1e-7) ==
        doctest::Approx(12.0).epsilon(1e-5));
  CHECK_THROWS_AS(eval_deformed_numeric(sq, k, 0.0, 1e-6), EvalSingularity);
}
