#include <doctest.h>

#include <map>
#include <string>

#include "defvar/catalog.hpp"
#include "defvar/render.hpp"
#include "defvar/simplify.hpp"

using namespace defvar;

// Golden post-limit residuals in sexpr form (deterministic canonical
// rendering). A change here means the canonical form produced by the
// derivation pipeline changed; verify it is intentional, then regenerate.
TEST_CASE("post-limit residuals match their golden sexpr forms") {
  const std::map<std::string, std::string> golden = {
      {"dissipative-oscillator",
       "(+ (pd (1) (fn U (fn x t))) (* gamma (pd (1) (fn x t))) (* m (pd (2) (fn x t))))"},
      {"langevin",
       "(+ (pd (1) (fn U (fn x t))) (* m (pd (2) (fn x t))) (* (fn gamma t) (pd (1) (fn x t))) (* -1 (fn gamma t) (fn zeta t) (^ 2 1/2) (^ (fn D t) 1/2)))"},
      {"abraham-lorentz",
       "(+ (pd (1) (fn U (fn x t))) (* -1 m (pd (2) (fn x t))) (* -2/3 (pd (3) (fn x t)) (^ c -3) (^ e 2)))"},
      {"galley-ald",
       "(+ (pd (1) (fn U (fn x t))) (* -1 m (pd (2) (fn x t))) (* -2/3 (pd (3) (fn x t)) (^ c -3) (^ e 2)))"},
      {"rcd",
       "(+ (fn f t x) (* -1 (pd (1 0) (fn U t x))) (* K (pd (0 2) (fn U t x))) (* -1 beta (fn U t x)) (* -1 gamma (pd (0 1) (fn U t x))))"},
      {"fp-linear",
       "(+ (pd (0 1) (fn P x t)) (* (fn P x t) (pd (1) (fn f x))) (* (fn f x) (pd (1 0) (fn P x t))) (* -1 D (pd (2 0) (fn P x t))))"},
      {"fp-nonlinear-1",
       "(+ (pd (0 1) (fn P x t)) (* (fn P x t) (pd (1) (fn f x))) (* (fn f x) (pd (1 0) (fn P x t))) (* -1 D (pd (2 0) (fn P x t)) (^ (fn P x t) (+ -1 mu))) (* 1/2 D (^ (fn P x t) (+ -2 mu)) (^ (pd (1 0) (fn P x t)) 2)) (* -1/2 D mu (^ (fn P x t) (+ -2 mu)) (^ (pd (1 0) (fn P x t)) 2)))"},
      {"fp-nonlinear-2",
       "(+ (* (pd (1) (fn f x)) (^ (fn P x t) mu)) (* mu (pd (0 1) (fn P x t)) (^ (fn P x t) (+ -1 mu))) (* -1 D (pd (2 0) (fn P x t)) (^ (fn P x t) (+ -1 nu))) (* 1/2 D (^ (fn P x t) (+ -2 nu)) (^ (pd (1 0) (fn P x t)) 2)) (* mu (fn f x) (pd (1 0) (fn P x t)) (^ (fn P x t) (+ -1 mu))) (* -1/2 D nu (^ (fn P x t) (+ -2 nu)) (^ (pd (1 0) (fn P x t)) 2)))"},
      {"kdv",
       "(+ (pd (0 1) (fn phi x t)) (pd (3 0) (fn phi x t)) (* -6 (fn phi x t) (pd (1 0) (fn phi x t))))"},
      {"kdv-deformed",
       "(+ (pd (3 0) (fn phi x t)) (* -6 (pd (1 0) (fn phi x t)) (^ (fn phi x t) nu)) (* mu (pd (0 1) (fn phi x t)) (^ (fn phi x t) (+ -1 mu))))"},
      {"llg",
       "(+ (fn H3 t) (* -2 g (fn m2 t) (pd (1) (fn m1 t))) (* -1 c kappa (pd (1) (fn m3 t))) (* 2 g (fn m1 t) (pd (1) (fn m2 t))))"},
      {"caldirola-kanai",
       "(+ (pd (2) (fn q t)) (* lambda (pd (1) (fn q t))) (* (fn q t) (^ omega0 2)))"},
  };
  for (const auto& info : list_systems()) {
    auto rep = verify(info.id);
    REQUIRE(rep.verdict == Verdict::Match);
    Expr post = sign_normalize(rep.results[0].post_limit);
    CHECK_MESSAGE(render(post, Format::Sexpr) == golden.at(info.id), info.id);
    // golden strings parse back to the same expression
    CHECK(parse(golden.at(info.id)).same(post));
  }
}
