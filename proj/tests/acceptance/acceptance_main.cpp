// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria mirror the repository's headline guarantees:
//   1. all twelve catalog derivations MATCH their targets
//   2. structural degenerations (alpha=1, lambda=0, gamma=0, eps=0, mu=nu=1)
//   3. numeric oracles (closed forms, heat kernel, OU variance, KdV soliton,
//      conservation, LLG precession)
//   4. stochastic ensemble vs moment oracle + bit-identical replay
//   5. randomized symbolic properties (100 cases each)
//   6. typo transparency via `verify --printed-target` (exit 1 with a diff)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "defvar/calculus.hpp"
#include "defvar/catalog.hpp"
#include "defvar/kernel.hpp"
#include "defvar/num/fields.hpp"
#include "defvar/num/kdv.hpp"
#include "defvar/num/llg.hpp"
#include "defvar/num/oscillators.hpp"
#include "defvar/num/residual.hpp"
#include "defvar/num/sde.hpp"
#include "defvar/render.hpp"
#include "defvar/simplify.hpp"
#include "defvar/variational.hpp"
#include "../expr_gen.hpp"

using namespace defvar;
using namespace defvar::num;

namespace {

int failures = 0;

struct Criterion {
  std::string name;
  std::vector<std::string> problems;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  explicit Criterion(std::string n) : name(std::move(n)) {}

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }

  void finish() {
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    if (problems.empty()) {
      std::printf("[PASS] %s (%.1fs)\n", name.c_str(), secs);
    } else {
      ++failures;
      std::printf("[FAIL] %s (%.1fs)\n", name.c_str(), secs);
      for (const auto& p : problems)
        std::printf("       - %s\n", p.c_str());
    }
  }
};

std::string run_cli(const std::string& args, int& exit_code) {
  std::string cmd = std::string(DEFVAR_CLI_PATH) + " " + args + " 2>&1";
  std::string out;
  char buf[4096];
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    exit_code = -1;
    return out;
  }
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

// ---- 1: catalog verification ------------------------------------------------

void criterion_catalog() {
  Criterion c("1. verify --all: 12/12 catalog systems MATCH (< 10 s)");
  auto t0 = std::chrono::steady_clock::now();
  auto systems = list_systems();
  c.require(systems.size() == 12, "catalog must list 12 systems");
  for (const auto& info : systems) {
    auto rep = verify(info.id);
    c.require(rep.verdict == Verdict::Match,
              info.id + ": " + to_string(rep.verdict) +
                  (rep.error.empty() ? "" : " (" + rep.error + ")"));
  }
  // named specializations: scaled Brownian motion and the nu = 1 reduction
  c.require(verify("langevin", sbm_params()).verdict == Verdict::Match,
            "langevin SBM specialization");
  c.require(verify("fp-nonlinear-2", {{"nu", number(1)}}).verdict ==
                Verdict::Match,
            "fp-nonlinear-2 nu=1 reduction");
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  c.require(secs < 10.0, "runtime exceeded 10 s");
  c.finish();
}

// ---- 2: structural degenerations --------------------------------------------

void criterion_degenerations() {
  Criterion c("2. degeneration suite (alpha=1, lambda=0, gamma=0, eps=0, "
              "mu=nu=1) (< 5 s)");
  auto t0 = std::chrono::steady_clock::now();

  // alpha = 1 and lambda = 0 kernels reproduce the ordinary derivative
  Expr t = sym("t");
  Expr xf = func("x", {t});
  c.require(expand_deformed(deformed(Kernel::conformable(number(1), sym("a")),
                                     "t", xf))
                .same(func_deriv(xf, {1})),
            "alpha=1 conformable kernel must degenerate");
  c.require(
      expand_deformed(deformed(Kernel::lambda_exp(number(0)), "t", xf))
          .same(func_deriv(xf, {1})),
      "lambda=0 kernel must degenerate");

  // gamma = 0: conservative oscillator
  {
    auto rep = verify("dissipative-oscillator", {{"gamma", number(0)}});
    c.require(rep.verdict == Verdict::Match, "gamma=0 verification");
    Expr target =
        sym("m") * func_deriv(xf, {2}) + func_deriv(func("U", {xf}), {1});
    c.require(equivalent(sign_normalize(rep.results[0].post_limit),
                         sign_normalize(simplify(target))),
              "gamma=0 equation must be conservative");
  }
  // eps = 0 (e = 0): Abraham-Lorentz loses the radiation term
  {
    auto rep = verify("abraham-lorentz", {{"e", number(0)}});
    c.require(rep.verdict == Verdict::Match, "e=0 verification");
    Expr target =
        sym("m") * func_deriv(xf, {2}) - func_deriv(func("U", {xf}), {1});
    c.require(equivalent(sign_normalize(rep.results[0].post_limit),
                         sign_normalize(simplify(target))),
              "e=0 equation must lose the x''' term");
  }
  // lambda = 0: CK Hamiltonian becomes the harmonic oscillator
  {
    Expr H0 = hamiltonian_of("caldirola-kanai", {{"lambda", number(0)}});
    Expr q = func("q", {t});
    Expr harmonic =
        pow(sym("p"), 2) / (number(2) * sym("m")) +
        number(1, 2) * sym("m") * pow(sym("omega0"), 2) * pow(q, 2);
    c.require(equivalent(H0, harmonic), "lambda=0 CK Hamiltonian");
  }
  // mu = 1: first nonlinear FP reduces to the linear one
  {
    auto nl = verify("fp-nonlinear-1", {{"mu", number(1)}});
    auto lin = verify("fp-linear");
    c.require(nl.verdict == Verdict::Match && lin.verdict == Verdict::Match,
              "mu=1 verification");
    c.require(equivalent(sign_normalize(nl.results[0].post_limit),
                         sign_normalize(lin.results[0].post_limit)),
              "mu=1 nonlinear FP must equal linear FP");
  }
  // mu = nu = 1: deformed KdV reduces to KdV
  {
    auto d = verify("kdv-deformed", {{"mu", number(1)}, {"nu", number(1)}});
    auto k = verify("kdv");
    c.require(d.verdict == Verdict::Match && k.verdict == Verdict::Match,
              "kdv reductions verification");
    c.require(sign_normalize(d.results[0].post_limit)
                  .same(sign_normalize(k.results[0].post_limit)),
              "mu=nu=1 deformed KdV must equal KdV");
  }
  // rcd with gamma = beta = 0, f = 0 is the heat equation
  {
    auto rep = verify("rcd", {{"gamma", number(0)},
                              {"beta", number(0)},
                              {"f", number(0)}});
    Expr U = func("U", {t, sym("x")});
    Expr heat = func_deriv(U, {1, 0}) - sym("K") * func_deriv(U, {0, 2});
    c.require(rep.verdict == Verdict::Match &&
                  equivalent(sign_normalize(rep.results[0].post_limit),
                             sign_normalize(simplify(heat))),
              "rcd must reduce to the heat equation");
  }
  // langevin with constant coefficients and zeta = 0 is the 5.1 equation
  {
    ParamMap p;
    p["gamma"] = sym("gamma0");
    p["D"] = sym("D0");
    p["zeta"] = number(0);
    auto rep = verify("langevin", p);
    Expr target = sym("m") * func_deriv(xf, {2}) +
                  func_deriv(func("U", {xf}), {1}) +
                  sym("gamma0") * func_deriv(xf, {1});
    c.require(rep.verdict == Verdict::Match &&
                  equivalent(sign_normalize(rep.results[0].post_limit),
                             sign_normalize(simplify(target))),
              "langevin must reduce to the dissipative oscillator");
  }

  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  c.require(secs < 5.0, "runtime exceeded 5 s");
  c.finish();
}

// ---- 3: numeric oracles ------------------------------------------------------

void criterion_numeric() {
  Criterion c("3. numeric oracle suite (closed forms, heat kernel, OU "
              "variance, KdV soliton, conservation, LLG) (< 5 min)");

  // damped oscillator vs closed form, <= 1e-6 over [0, 20]
  {
    auto traj = simulate_dissipative_oscillator(1.0, 0.2, 1.0, 1.0, 0.0, 20.0,
                                                1e-3);
    const auto& t = traj.col("t");
    const auto& x = traj.col("x");
    double worst = 0.0;
    for (size_t i = 0; i < traj.rows(); ++i)
      worst = std::max(worst,
                       std::abs(x[i] - damped_oscillator_closed_form(
                                           1.0, 0.2, 1.0, 1.0, 0.0, t[i])));
    c.require(worst <= 1e-6,
              "damped oscillator L-inf " + std::to_string(worst));
  }
  // CK Hamilton flow vs damped closed form, <= 1e-6
  {
    auto traj = simulate_caldirola_kanai(1.0, 1.0, 0.2, 1.0, 0.0, 20.0, 1e-3);
    const auto& t = traj.col("t");
    const auto& q = traj.col("q");
    double worst = 0.0;
    for (size_t i = 0; i < traj.rows(); ++i)
      worst = std::max(worst, std::abs(q[i] - caldirola_kanai_closed_form(
                                                  1.0, 0.2, 1.0, 0.0, t[i])));
    c.require(worst <= 1e-6, "CK flow L-inf " + std::to_string(worst));
  }
  // RCD heat kernel, <= 1e-3 at t = 0.1
  {
    const size_t n = 512;
    const double L = 40.0;
    GridSpec grid{{-L / 2}, {L / n}, {n}, Boundary::Periodic};
    RcdParams p;
    p.K = {1.0};
    p.gamma = {0.0};
    std::vector<double> u0(n);
    for (size_t i = 0; i < n; ++i) {
      double x = grid.x0[0] + grid.dx[0] * static_cast<double>(i);
      u0[i] = std::exp(-x * x / 2.0);
    }
    double dt = 0.4 * grid.dx[0] * grid.dx[0] / 2.0;
    auto g = simulate_rcd(p, grid, u0, 0.1, dt, 3);
    double worst = 0.0;
    for (size_t i = 0; i < n; ++i)
      worst = std::max(worst,
                       std::abs(g.snapshots.back()[i] -
                                heat_kernel_solution(1.0, g.times.back(),
                                                     g.x_at(i), 1.0, 1.0)));
    c.require(worst <= 1e-3, "heat kernel L-inf " + std::to_string(worst));
  }
  // OU stationary variance within 1%: deterministic FP solve and EM ensemble
  {
    FpParams p;
    p.D = 0.5;
    p.drift = [](double x) { return -x; };
    const size_t n = 240;
    double dx = 12.0 / n;
    std::vector<double> p0(n);
    double norm = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double x = -6.0 + dx * static_cast<double>(i);
      p0[i] = std::exp(-x * x / 0.25);
      norm += p0[i] * dx;
    }
    for (double& v : p0) v /= norm;
    double dt = 0.4 * dx * dx / (2.0 * p.D);
    auto g = simulate_fokker_planck(p, -6.0, dx, n, Boundary::Reflecting, p0,
                                    10.0, dt, 3);
    double mass = 0.0, var = 0.0;
    for (size_t i = 0; i < n; ++i) {
      mass += g.snapshots.back()[i] * dx;
      var += g.x_at(i) * g.x_at(i) * g.snapshots.back()[i] * dx;
    }
    var /= mass;
    c.require(std::abs(var - 0.5) / 0.5 <= 0.01,
              "FP stationary variance off by " +
                  std::to_string(std::abs(var - 0.5) / 0.5));
    const auto& nrm = g.conserved.at("norm");
    c.require(std::abs(nrm.back() - nrm.front()) <= 1e-6,
              "FP normalization drift " +
                  std::to_string(std::abs(nrm.back() - nrm.front())));

    SbmParams sp;
    sp.alpha = 1.0;
    sp.m = 1.0;
    sp.gamma0 = 1.0;
    sp.D0 = 0.5;
    auto st = simulate_langevin_sbm(sp, 10000, 424242, 40.0, 0.004, 200, 0);
    double v2 = 0.0;
    size_t cnt = 0;
    for (size_t i = st.t.size() / 2; i < st.t.size(); ++i) {
      v2 += st.mean_v2[i];
      ++cnt;
    }
    v2 /= static_cast<double>(cnt);
    c.require(std::abs(v2 - sp.D0) / sp.D0 <= 0.01,
              "EM OU stationary variance off by " +
                  std::to_string(std::abs(v2 - sp.D0) / sp.D0));
  }
  // KdV soliton: shape error <= 1e-3 after one box transit; conservation
  {
    const double cc = 4.0, L = 40.0;
    const size_t n = 512;
    double dx = L / n;
    std::vector<double> phi0(n);
    for (size_t i = 0; i < n; ++i)
      phi0[i] = kdv_soliton(cc, -L / 2 + dx * static_cast<double>(i), 0.0);
    auto g = simulate_kdv(phi0, -L / 2, dx, L / cc, 2e-4,
                          KdvScheme::PseudoSpectral, 11);
    double shape = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double xs = std::remainder(g.x_at(i) - cc * g.times.back(), L);
      shape = std::max(shape, std::abs(g.snapshots.back()[i] -
                                       kdv_soliton(cc, xs, 0.0)));
    }
    c.require(shape <= 1e-3, "KdV soliton shape error " + std::to_string(shape));
    const auto& m0 = g.conserved.at("int_phi");
    const auto& m1 = g.conserved.at("int_phi2");
    c.require(std::abs(m0.back() - m0.front()) <= 1e-8,
              "int(phi) drift " + std::to_string(std::abs(m0.back() - m0.front())));
    c.require(std::abs(m1.back() - m1.front()) <= 1e-5,
              "int(phi^2) drift " +
                  std::to_string(std::abs(m1.back() - m1.front())));
  }
  // LLG: norm drift <= 1e-8, precession frequency within 0.1% of |gamma| H
  {
    LlgParams p;
    p.g = -1.0;
    p.kappa_c = 0.0;
    p.H = {0.0, 0.0, 2.0};
    p.m0 = {0.6, 0.0, 0.8};
    auto traj = simulate_llg(p, 20.0, 1e-4);
    double drift = 0.0;
    for (double v : traj.col("norm")) drift = std::max(drift, std::abs(v - 1.0));
    c.require(drift <= 1e-8, "LLG norm drift " + std::to_string(drift));

    const auto& m1 = traj.col("m1");
    const auto& m2 = traj.col("m2");
    const auto& t = traj.col("t");
    double phase = 0.0, prev = std::atan2(m2.front(), m1.front());
    for (size_t i = 1; i < t.size(); ++i) {
      double cur = std::atan2(m2[i], m1[i]);
      double d = cur - prev;
      while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
      while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
      phase += d;
      prev = cur;
    }
    double omega = std::abs(phase) / (t.back() - t.front());
    double expected = 2.0;  // |gamma| H
    c.require(std::abs(omega - expected) / expected <= 1e-3,
              "LLG precession frequency off by " +
                  std::to_string(std::abs(omega - expected) / expected));
  }
  // symbolic targets hold on the numeric solutions (closing the loop)
  {
    auto traj =
        simulate_dissipative_oscillator(1.0, 0.3, 1.0, 1.0, 0.0, 20.0, 1e-3);
    ParamMap pm;
    pm["U"] = parse("1/2*k*x^2", system_variables("dissipative-oscillator"));
    auto rep = verify("dissipative-oscillator", pm);
    double r = residual_check(rep.results[0].post_limit, traj, "x",
                              {{"m", 1.0}, {"gamma", 0.3}, {"k", 1.0}});
    c.require(r <= 1e-4, "5.1 residual_check " + std::to_string(r));
  }
  c.finish();
}

// ---- 4: stochastic suite ------------------------------------------------------

void criterion_stochastic() {
  Criterion c("4. stochastic suite: SBM ensemble (N=10^4) within 3 sigma of "
              "the moment oracle; bit-identical replay (< 10 min)");
  SbmParams p;
  p.alpha = 0.5;
  p.D0 = 0.5;
  p.gamma0 = 1.0;
  p.tau = 1.0;
  const double t1 = 20.0, dt = 0.005;
  auto st = simulate_langevin_sbm(p, 10000, 20240601, t1, dt, 10, 0);
  auto oracle = sbm_moment_oracle(p, t1, dt, 10);
  c.require(st.t.size() == oracle.t.size(), "checkpoint grids must align");
  size_t checked = 0;
  for (size_t i = 0; i < st.t.size(); ++i) {
    if (st.t[i] == 0.0) continue;
    double sigma = std::max(st.msd_stderr[i], 1e-12);
    double dev = std::abs(st.msd[i] - oracle.msd[i]) / sigma;
    c.require(dev <= 3.0, "checkpoint t=" + std::to_string(st.t[i]) +
                              " deviates by " + std::to_string(dev) +
                              " sigma");
    ++checked;
  }
  c.require(checked >= 10, "need at least 10 checkpoints");

  auto st2 = simulate_langevin_sbm(p, 10000, 20240601, t1, dt, 10, 2);
  bool identical = st.msd == st2.msd && st.msd_stderr == st2.msd_stderr &&
                   st.mean_x == st2.mean_x;
  c.require(identical, "replay with a different thread count must be "
                       "bit-identical");
  c.finish();
}

// ---- 5: symbolic property suite ------------------------------------------------

void criterion_properties() {
  Criterion c("5. symbolic property suite: 100-case linearity, Leibniz, "
              "finite differences, idempotence, round-trips (< 30 s)");
  auto t0 = std::chrono::steady_clock::now();
  testing::ExprGen gen(777);

  int lin_fail = 0, leib_fail = 0, idem_fail = 0, rt_fail = 0, fd_fail = 0;
  int fd_done = 0;
  for (int i = 0; i < 100; ++i) {
    Expr f = gen.gen(3);
    Expr g = gen.gen(3);
    Expr lhs = differentiate(number(3, 2) * f - number(2) * g, "x");
    Expr rhs = simplify(number(3, 2) * differentiate(f, "x") -
                        number(2) * differentiate(g, "x"));
    if (!lhs.same(rhs)) ++lin_fail;

    Expr pl = differentiate(f * g, "x");
    Expr pr = simplify(f * differentiate(g, "x") + g * differentiate(f, "x"));
    if (!equivalent(pl, pr, 6, 100 + i)) ++leib_fail;

    Expr s = simplify(f);
    if (!simplify(s).same(s)) ++idem_fail;

    if (!parse(render(s, Format::Sexpr)).same(s)) ++rt_fail;
  }
  while (fd_done < 100) {
    Expr e = gen.gen(3);
    if (!depends_on(e, "x")) continue;
    Bindings b = gen.random_point();
    try {
      double v = evaluate(differentiate(e, "x"), b);
      Bindings bu = b, bd = b;
      bu.values["x"] += 1e-5;
      bd.values["x"] -= 1e-5;
      double fd = (evaluate(e, bu) - evaluate(e, bd)) / 2e-5;
      if (std::abs(v - fd) > 1e-6 * (1.0 + std::abs(v))) ++fd_fail;
      ++fd_done;
    } catch (const EvalSingularity&) {
      continue;
    }
  }
  c.require(lin_fail == 0, std::to_string(lin_fail) + " linearity failures");
  c.require(leib_fail == 0, std::to_string(leib_fail) + " Leibniz failures");
  c.require(idem_fail == 0, std::to_string(idem_fail) + " idempotence failures");
  c.require(rt_fail == 0, std::to_string(rt_fail) + " round-trip failures");
  c.require(fd_fail == 0, std::to_string(fd_fail) +
                              " finite-difference cross-check failures");
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  c.require(secs < 30.0, "runtime exceeded 30 s");
  c.finish();
}

// ---- 6: typo transparency ------------------------------------------------------

void criterion_typo_transparency() {
  Criterion c("6. typo transparency: printed-target verifications exit 1 "
              "with a diff expression");
  for (const char* id : {"kdv", "abraham-lorentz", "caldirola-kanai"}) {
    int code = 0;
    std::string out =
        run_cli(std::string("--json verify ") + id + " --printed-target", code);
    c.require(code == 1, std::string(id) + ": expected exit 1, got " +
                             std::to_string(code));
    bool has_diff = false;
    try {
      auto arr = nlohmann::json::parse(out);
      for (const auto& check : arr[0]["checks"])
        if (check.contains("diff")) has_diff = true;
    } catch (...) {
    }
    c.require(has_diff, std::string(id) + ": report must carry a diff "
                                          "expression");
  }
  c.finish();
}

}  // namespace

int main() {
  criterion_catalog();
  criterion_degenerations();
  criterion_numeric();
  criterion_stochastic();
  criterion_properties();
  criterion_typo_transparency();
  if (failures) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
