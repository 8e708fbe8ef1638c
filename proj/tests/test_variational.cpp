#include <doctest.h>

#include "defvar/calculus.hpp"
#include "defvar/kernel.hpp"
#include "defvar/render.hpp"
#include "defvar/simplify.hpp"
#include "defvar/variational.hpp"

using namespace defvar;

namespace {

Expr t() { return sym("t"); }
Expr a() { return sym("a"); }

// Independent oracle for the classical Euler-Lagrange residual
// dL/dy - d/dt dL/d(y'), computed directly from the functional partials.
Expr classical_el(const Expr& L, const Expr& yf, const std::string& tv) {
  Expr ydot = func_deriv(yf, {1});
  return simplify(slot_partial(L, yf) -
                  differentiate(slot_partial(L, ydot), tv));
}

LagrangianSpec particle_spec(const Expr& L) {
  return {L, {{"x", {"t"}, {a()}}}, {}};
}

}  // namespace

TEST_CASE("classical degeneration matches the classical E-L oracle") {
  Expr xf = func("x", {t()});
  Expr xd = func_deriv(xf, {1});
  Expr U = func("U", {xf});

  // free particle
  {
    Expr L = number(1, 2) * sym("m") * pow(xd, 2);
    ELResult r = euler_lagrange_particle(particle_spec(L), "x");
    CHECK(sign_normalize(r.pre_limit)
              .same(sign_normalize(simplify(sym("m") * func_deriv(xf, {2})))));
    CHECK(r.pre_limit.same(classical_el(L, xf, "t")));
  }
  // potential + identity-kernel deformed slot degenerates to classical
  {
    Expr L = number(1, 2) * sym("m") * pow(xd, 2) - U +
             number(1, 2) * sym("g") *
                 pow(deformed(Kernel::identity(), "t", xf), 2);
    ELResult r = euler_lagrange_particle(particle_spec(L), "x");
    Expr classical = classical_el(
        simplify(number(1, 2) * sym("m") * pow(xd, 2) - U +
                 number(1, 2) * sym("g") * pow(xd, 2)),
        xf, "t");
    CHECK(equivalent(r.pre_limit, classical));
  }
}

TEST_CASE("section 5.1 four-term residual, pre- and post-limit") {
  Expr xf = func("x", {t()});
  Expr xd = func_deriv(xf, {1});
  Expr xdd = func_deriv(xf, {2});
  Expr U = func("U", {xf});
  Expr m = sym("m"), gamma = sym("gamma");
  Expr Dx = deformed(Kernel::conformable(number(1, 2), a()), "t", xf);
  Expr L = number(1, 2) * m * pow(xd, 2) - U + number(1, 2) * gamma * pow(Dx, 2);

  ELResult r = euler_lagrange_particle(particle_spec(L), "x");
  Expr pre_expected =
      m * xdd + func_deriv(U, {1}) + gamma * (xd + (t() - a()) * xdd);
  CHECK(sign_normalize(expand(r.pre_limit))
            .same(sign_normalize(expand(pre_expected))));

  auto lim = take_limit_interval(r.pre_limit, t() - a());
  Expr post_expected = m * xdd + func_deriv(U, {1}) + gamma * xd;
  CHECK(sign_normalize(lim.post).same(sign_normalize(simplify(post_expected))));

  // bookkeeping: post + dropped == pre
  Expr back = lim.post;
  for (const Expr& d : lim.dropped) back = back + d;
  CHECK(simplify(back - r.pre_limit).is_zero());
}

TEST_CASE("section 5.3 higher-order slot pre-limit form") {
  Expr xf = func("x", {t()});
  Expr xd = func_deriv(xf, {1});
  Expr U = func("U", {xf});
  Expr m = sym("m"), e = sym("e"), c = sym("c");
  Expr coeff6 = pow(e, 2) / (number(6) * pow(c, 3));
  Expr Dxd = deformed(Kernel::conformable(number(1, 2), a()), "t", xd);
  Expr L = number(1, 2) * m * pow(xd, 2) + U - coeff6 * pow(Dxd, 2);

  ELResult r = euler_lagrange_particle(particle_spec(L), "x");
  Expr coeff3 = pow(e, 2) / (number(3) * pow(c, 3));
  Expr expected = m * func_deriv(xf, {2}) - func_deriv(U, {1}) +
                  coeff3 * (number(2) * func_deriv(xf, {3}) +
                            (t() - a()) * func_deriv(xf, {4}));
  CHECK(sign_normalize(expand(r.pre_limit))
            .same(sign_normalize(expand(expected))));
}

TEST_CASE("take_limit_interval keeps, drops and rejects") {
  Expr xf = func("x", {t()});
  Expr xd = func_deriv(xf, {1});
  Expr xdd = func_deriv(xf, {2});
  Expr gamma = sym("gamma");

  auto lim = take_limit_interval(gamma * (xd + (t() - a()) * xdd), t() - a());
  CHECK(lim.post.same(simplify(gamma * xd)));
  CHECK(lim.dropped.size() == 1);

  Expr untouched = sym("m") * xdd + gamma * xd;
  CHECK(take_limit_interval(untouched, t() - a()).post.same(simplify(untouched)));

  CHECK_THROWS_AS(
      take_limit_interval(make_pow(t() - a(), number(-1, 2)) * xd, t() - a()),
      LimitSingular);
}

TEST_CASE("take_limit_interval handles folded constants") {
  // 2t - 2a is still proportional to (t - a) even though the subtree
  // (t - a) does not occur structurally.
  Expr e = number(2) * t() - number(2) * a() + sym("m");
  auto lim = take_limit_interval(e, t() - a());
  CHECK(lim.post.same(sym("m")));
}

TEST_CASE("take_limit_alpha") {
  Expr xf = func("x", {t()});
  Expr xd = func_deriv(xf, {1});
  Expr zf = func("z", {t()});
  Expr alpha = sym("alpha");
  Expr ta = t() - a();

  CHECK(take_limit_alpha(make_pow(ta, number(1) - alpha) * xd, "alpha")
            .same(simplify(xd)));
  CHECK(take_limit_alpha((number(1) - alpha) * make_pow(ta, -alpha) *
                             func_deriv(zf, {2}),
                         "alpha")
            .is_zero());
  CHECK(take_limit_alpha((number(2) - number(2) * alpha) *
                             make_pow(ta, number(1) - number(2) * alpha) *
                             func_deriv(xf, {2}),
                         "alpha")
            .is_zero());
}

TEST_CASE("legendre transform produces the CK Hamiltonian") {
  Expr q = func("q", {t()});
  Expr m = sym("m"), w0 = sym("omega0"), lam = sym("lambda");
  Kernel k = Kernel::lambda_exp(lam, true);
  Expr Dq = deformed(k, "t", q);
  Expr L = number(1, 2) * m * pow(Dq, 2) -
           number(1, 2) * m * exp_of(lam * t()) * pow(w0, 2) * pow(q, 2);
  LagrangianSpec spec{L, {{"q", {"t"}, {number(0)}}}, {}};

  Expr H = legendre_transform(spec, "q");
  Expr p = sym("p");
  Expr expected = exp_of(-(lam * t())) * pow(p, 2) / (number(2) * m) +
                  number(1, 2) * m * exp_of(lam * t()) * pow(w0, 2) * pow(q, 2);
  CHECK(equivalent(H, expected));

  // Legendre round trip: p^lambda (Dq) - H recovers the expanded Lagrangian.
  Expr qd = func_deriv(q, {1});
  Expr kf = kernel_factor(k, "t");
  Expr p_lambda = simplify(m * kf * qd);   // dL/d(Dq) expanded
  Expr H_mech = substitute(H, p, simplify(m * qd));  // p = m qdot
  Expr L_rec = simplify(p_lambda * (kf * qd) - H_mech);
  CHECK(equivalent(L_rec, expand_deformed(L)));

  // Hamilton flow eliminates p into the damped-oscillator equation.
  Expr eom = hamilton_equation_of_motion(H, "q", "p", "t");
  Expr target = func_deriv(q, {2}) + lam * qd + pow(w0, 2) * q;
  CHECK(sign_normalize(eom).same(sign_normalize(simplify(target))));

  // identity kernel: H = p^2 / 2m
  Expr L0 = number(1, 2) * m * pow(deformed(Kernel::identity(), "t", q), 2);
  LagrangianSpec spec0{L0, {{"q", {"t"}, {number(0)}}}, {}};
  CHECK(equivalent(legendre_transform(spec0, "q"),
                   pow(p, 2) / (number(2) * m)));

  // non-invertible momentum: L linear in the deformed velocity
  Expr Lbad = m * Dq;
  LagrangianSpec specbad{Lbad, {{"q", {"t"}, {number(0)}}}, {}};
  CHECK_THROWS_AS(legendre_transform(specbad, "q"), NonInvertibleMomentum);
}

TEST_CASE("errors: unknown variable and undeclared deformed variable") {
  Expr xf = func("x", {t()});
  Expr L = pow(func_deriv(xf, {1}), 2);
  CHECK_THROWS_AS(euler_lagrange_particle(particle_spec(L), "y"),
                  UnknownVariable);
  Expr Lbad =
      pow(deformed(Kernel::conformable(number(1, 2), a()), "s", xf), 2);
  CHECK_THROWS_AS(euler_lagrange_particle(particle_spec(Lbad), "x"),
                  MissingKernel);
}

TEST_CASE("decoupled two-variable system") {
  Expr xf = func("x", {t()});
  Expr zf = func("z", {t()});
  Expr L = number(1, 2) * pow(func_deriv(xf, {1}), 2) +
           number(1, 2) * pow(func_deriv(zf, {1}), 2);
  LagrangianSpec spec{L, {{"x", {"t"}, {a()}}, {"z", {"t"}, {a()}}}, {}};
  auto rs = euler_lagrange_system(spec);
  REQUIRE(rs.size() == 2);
  CHECK(sign_normalize(rs[0].pre_limit).same(func_deriv(xf, {2})));
  CHECK(sign_normalize(rs[1].pre_limit).same(func_deriv(zf, {2})));
}

TEST_CASE("classical field theory: wave equation") {
  Expr x = sym("x");
  Expr phi = func("phi", {x, t()});
  Expr L = number(1, 2) * pow(func_deriv(phi, {0, 1}), 2) -
           number(1, 2) * pow(func_deriv(phi, {1, 0}), 2);
  LagrangianSpec spec{L, {{"phi", {"x", "t"}, {sym("x_a"), a()}}}, {}};
  ELResult r = euler_lagrange_field(spec, "phi");
  Expr target = func_deriv(phi, {0, 2}) - func_deriv(phi, {2, 0});
  CHECK(sign_normalize(r.pre_limit).same(sign_normalize(simplify(target))));
}

TEST_CASE("interval limit agrees with substituting the interval to zero") {
  // When every occurrence of (t-a) is structural and no negative powers
  // appear, the a->b limit is exactly the substitution (t-a) -> 0.
  Expr xf = func("x", {t()});
  Expr xd = func_deriv(xf, {1});
  Expr xdd = func_deriv(xf, {2});
  Expr e = sym("m") * xdd + sym("gamma") * (xd + (t() - a()) * xdd) +
           make_pow(t() - a(), number(2)) * xf +
           make_pow(t() - a(), number(3, 2)) * xd;
  auto lim = take_limit_interval(e, t() - a());
  Expr subst = simplify(substitute(simplify(e), simplify(t() - a()), number(0)));
  CHECK(lim.post.same(subst));
}
