#include "defvar/catalog.hpp"

#include <algorithm>
#include <functional>

#include "defvar/calculus.hpp"
#include "defvar/kernel.hpp"
#include "defvar/render.hpp"
#include "defvar/simplify.hpp"

namespace defvar {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Match: return "MATCH";
    case Verdict::Mismatch: return "MISMATCH";
    case Verdict::Singular: return "SINGULAR";
  }
  return "?";
}

Expr substitute_function(const Expr& e, const std::string& name,
                         const Expr& replacement) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Func: {
      if (n.name == name) return replacement;
      std::vector<Expr> args;
      for (const Expr& a : n.args)
        args.push_back(substitute_function(a, name, replacement));
      return func(n.name, args);
    }
    case Kind::Deriv: {
      const Node& f = n.args[0].node();
      if (f.name == name) {
        Expr out = replacement;
        for (size_t i = 0; i < f.args.size(); ++i) {
          for (int o = 0; o < n.orders[i]; ++o) {
            if (f.args[i].kind() == Kind::Symbol)
              out = differentiate(out, f.args[i].node().name);
            else
              out = slot_partial(out, f.args[i]);
          }
        }
        return out;
      }
      Expr inner = substitute_function(n.args[0], name, replacement);
      return func_deriv(inner, n.orders);
    }
    case Kind::OpDeriv:
      return op_deriv(substitute_function(n.args[0], name, replacement), n.var,
                      n.op_order);
    case Kind::Deformed:
      return deformed(n.kernel, n.var,
                      substitute_function(n.args[0], name, replacement));
    case Kind::Pow:
      return make_pow(substitute_function(n.args[0], name, replacement),
                      substitute_function(n.args[1], name, replacement));
    case Kind::Product: {
      std::vector<Expr> fs;
      for (const Expr& a : n.args)
        fs.push_back(substitute_function(a, name, replacement));
      return make_product(std::move(fs));
    }
    case Kind::Sum: {
      std::vector<Expr> ts;
      for (const Expr& a : n.args)
        ts.push_back(substitute_function(a, name, replacement));
      return make_sum(std::move(ts));
    }
    default:
      return e;
  }
}

namespace {

enum class DeriveKind { Particle, Field, System, Hamiltonian };

struct RecipeStep {
  enum class Op { IntervalLimit, AlphaLimit, Collapse } op;
  Expr interval;          // IntervalLimit
  std::string alpha;      // AlphaLimit
  Expr from, to;          // Collapse
  std::string label;
};

struct TargetSpec {
  std::string label;
  Expr corrected;
  std::optional<Expr> pre_corrected;  // expected pre-limit form, when pinned
};

// Post-derivation function specializations (name -> replacement).
using FuncSubs = std::vector<std::pair<std::string, Expr>>;

struct SystemDefinition {
  LagrangianSpec spec;
  DeriveKind kind = DeriveKind::Particle;
  std::vector<std::string> derive_vars;
  std::vector<RecipeStep> recipe;
  std::vector<TargetSpec> targets;       // aligned with derive_vars
  std::optional<Expr> collapsed_target;  // galley
  std::optional<Expr> hamiltonian_target;
  std::optional<Expr> eom_target;  // Hamilton-flow equation of motion
  FuncSubs func_subs;
  std::vector<std::string> notes;
};

struct EntryMeta {
  std::string id;
  std::string section;
  std::string description;
  std::vector<std::string> params;
  bool has_printed_variant = false;
};

const Expr& T() { static Expr e = sym("t"); return e; }
const Expr& X() { static Expr e = sym("x"); return e; }
const Expr& A() { static Expr e = sym("a"); return e; }
const Expr& XA() { static Expr e = sym("x_a"); return e; }

Expr half() { return number(1, 2); }

Expr param_or(const ParamMap& p, const std::string& key, const Expr& dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

void check_params(const ParamMap& given, const std::vector<std::string>& allowed) {
  for (const auto& [k, v] : given) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw BadParameter("unknown parameter '" + k + "'");
  }
}

Kernel conf_half(const Expr& lower) {
  return Kernel::conformable(half(), lower);
}

// ---- 5.1 dissipative oscillator -------------------------------------------

SystemDefinition def_dissipative(const ParamMap& p, bool printed) {
  Expr m = param_or(p, "m", sym("m"));
  Expr gamma = param_or(p, "gamma", sym("gamma"));
  Expr x = func("x", {T()});
  Expr xd = func_deriv(x, {1});
  Expr xdd = func_deriv(x, {2});
  Expr U = func("U", {x});
  Expr Dx = deformed(conf_half(A()), "t", x);

  Expr friction_sign = printed ? number(-1) : number(1);
  Expr L = half() * m * pow(xd, 2) - U + friction_sign * half() * gamma * pow(Dx, 2);

  SystemDefinition d;
  d.spec = {L, {{"x", {"t"}, {A()}}}, {}};
  d.kind = DeriveKind::Particle;
  d.derive_vars = {"x"};
  d.recipe = {{RecipeStep::Op::IntervalLimit, T() - A(), "", {}, {}, "a->b"}};
  Expr Uprime = func_deriv(U, {1});
  d.targets = {{"post-limit",
                m * xdd + Uprime + gamma * xd,
                m * xdd + Uprime + gamma * (xd + (T() - A()) * xdd)}};
  if (auto it = p.find("U"); it != p.end()) d.func_subs.push_back({"U", it->second});
  d.notes = {
      "friction coupling enters the Lagrangian as +gamma/2 (Dt^{1/2}x)^2; the "
      "printed -gamma/2 yields anti-damping -gamma*x' under the deformed E-L"};
  return d;
}

// ---- 5.2 Langevin / scaled Brownian motion ---------------------------------

SystemDefinition def_langevin(const ParamMap& p, bool printed) {
  Expr m = param_or(p, "m", sym("m"));
  Expr x = func("x", {T()});
  Expr xd = func_deriv(x, {1});
  Expr xdd = func_deriv(x, {2});
  Expr U = func("U", {x});
  Expr gamma_t = func("gamma", {T()});
  Expr D_t = func("D", {T()});
  Expr zeta = func("zeta", {T()});
  Expr Dx = deformed(conf_half(A()), "t", x);
  Expr noise_amp = make_pow(number(2) * D_t, half());

  Expr s = printed ? number(-1) : number(1);
  Expr L = half() * m * pow(xd, 2) - U + s * half() * gamma_t * pow(Dx, 2) +
           s * noise_amp * gamma_t * x * zeta;

  SystemDefinition d;
  d.spec = {L, {{"x", {"t"}, {A()}}}, {"zeta", "gamma", "D"}};
  d.kind = DeriveKind::Particle;
  d.derive_vars = {"x"};
  d.recipe = {{RecipeStep::Op::IntervalLimit, T() - A(), "", {}, {}, "a->b"}};
  Expr Uprime = func_deriv(U, {1});
  Expr gd = func_deriv(gamma_t, {1});
  d.targets = {{"post-limit",
                m * xdd + Uprime + gamma_t * xd - noise_amp * gamma_t * zeta,
                m * xdd + Uprime + gd * (T() - A()) * xd +
                    gamma_t * (xd + (T() - A()) * xdd) -
                    noise_amp * gamma_t * zeta}};
  for (const char* key : {"U", "gamma", "D", "zeta"})
    if (auto it = p.find(key); it != p.end())
      d.func_subs.push_back({key, it->second});
  d.notes = {
      "friction and noise couplings enter the Lagrangian with + signs so the "
      "deformed E-L reproduces the printed Langevin equation",
      "the d(gamma)/dt * (t-a) * x' cross term is dropped by the a->b limit "
      "exactly as in the text"};
  return d;
}

// ---- 5.3 Abraham-Lorentz ----------------------------------------------------

SystemDefinition def_abraham_lorentz(const ParamMap& p, bool printed) {
  Expr m = param_or(p, "m", sym("m"));
  Expr e = param_or(p, "e", sym("e"));
  Expr c = param_or(p, "c", sym("c"));
  Expr x = func("x", {T()});
  Expr xd = func_deriv(x, {1});
  Expr xdd = func_deriv(x, {2});
  Expr x3 = func_deriv(x, {3});
  Expr x4 = func_deriv(x, {4});
  Expr U = func("U", {x});
  Expr coeff6 = pow(e, 2) / (number(6) * pow(c, 3));
  Expr coeff3 = pow(e, 2) / (number(3) * pow(c, 3));
  Expr Dxd = deformed(conf_half(A()), "t", xd);

  // Potential and radiation couplings signed so that Eq. (4) reproduces the
  // printed equation of motion (the printed Lagrangian is inconsistent with
  // the printed result).
  Expr L = half() * m * pow(xd, 2) + U - coeff6 * pow(Dxd, 2);

  SystemDefinition d;
  d.spec = {L, {{"x", {"t"}, {A()}}}, {}};
  d.kind = DeriveKind::Particle;
  d.derive_vars = {"x"};
  d.recipe = {{RecipeStep::Op::IntervalLimit, T() - A(), "", {}, {}, "a->b"}};
  Expr Uprime = func_deriv(U, {1});
  Expr corrected = m * xdd - Uprime + number(2) * coeff3 * x3;
  Expr pre = m * xdd - Uprime + coeff3 * (number(2) * x3 + (T() - A()) * x4);
  if (printed) {
    // dU(x)/dt as printed instead of dU/dx.
    Expr printed_target = m * xdd - Uprime * xd + number(2) * coeff3 * x3;
    d.targets = {{"post-limit", printed_target, pre}};
  } else {
    d.targets = {{"post-limit", corrected, pre}};
  }
  if (auto it = p.find("U"); it != p.end()) d.func_subs.push_back({"U", it->second});
  d.notes = {
      "target uses dU/dx; the printed dU(x)/dt is dimensionally inconsistent "
      "with section 5.1",
      "Lagrangian signs adjusted (+U, -e^2/6c^3) so the printed equation of "
      "motion follows from the deformed E-L"};
  return d;
}

// ---- 5.4 adapted Galley (doubled variable) ---------------------------------

SystemDefinition def_galley(const ParamMap& p, bool printed) {
  Expr m = param_or(p, "m", sym("m"));
  Expr e = param_or(p, "e", sym("e"));
  Expr c = param_or(p, "c", sym("c"));
  Expr alpha = sym("alpha");
  Expr x = func("x", {T()});
  Expr z = func("z", {T()});
  Expr xd = func_deriv(x, {1});
  Expr zd = func_deriv(z, {1});
  Expr xdd = func_deriv(x, {2});
  Expr zdd = func_deriv(z, {2});
  Expr x3 = func_deriv(x, {3});
  Expr z3 = func_deriv(z, {3});
  Expr Ux = func("U", {x});
  Expr Uz = func("U", {z});
  Expr coeff = number(2) * pow(e, 2) / (number(3) * pow(c, 3));
  Kernel ka = Kernel::conformable(alpha, A());
  Expr Dxd = deformed(ka, "t", xd);
  Expr Dz = deformed(ka, "t", z);

  Expr cg = printed ? coeff : -coeff;
  Expr L = half() * m * pow(xd, 2) + Ux - half() * m * pow(zd, 2) - Uz +
           cg * Dxd * Dz;

  SystemDefinition d;
  d.spec = {L, {{"x", {"t"}, {A()}}, {"z", {"t"}, {A()}}}, {}};
  d.kind = DeriveKind::System;
  d.derive_vars = {"x", "z"};
  d.recipe = {
      {RecipeStep::Op::AlphaLimit, {}, "alpha", {}, {}, "alpha->1"},
      {RecipeStep::Op::Collapse, {}, "", z, x, "z->x"},
  };
  Expr ta = T() - A();
  Expr Uxp = func_deriv(Ux, {1});
  Expr Uzp = func_deriv(Uz, {1});
  Expr two_m_two_a = number(2) - number(2) * alpha;
  Expr one_m_two_a = number(1) - number(2) * alpha;
  Expr x_target =
      m * xdd - Uxp +
      coeff * (two_m_two_a * one_m_two_a * make_pow(ta, -number(2) * alpha) * zd +
               number(2) * two_m_two_a * make_pow(ta, number(1) - number(2) * alpha) * zdd +
               make_pow(ta, number(2) - number(2) * alpha) * z3);
  Expr z_target = -(m * zdd) + Uzp -
                  coeff * (two_m_two_a * make_pow(ta, number(1) - number(2) * alpha) * xdd +
                           make_pow(ta, number(2) - number(2) * alpha) * x3);
  d.targets = {{"x-equation", x_target, std::nullopt},
               {"z-equation", z_target, std::nullopt}};
  d.collapsed_target = m * xdd - Uxp + coeff * x3;
  if (auto it = p.find("U"); it != p.end()) d.func_subs.push_back({"U", it->second});
  d.notes = {
      "coupling coefficient is 2e^2/3c^3 on both equations (the text prints "
      "2e^2/6c^3 in two places and 2e^2/3c^3 elsewhere)",
      "coupling sign adjusted so the alpha->1, z->x collapse reproduces the "
      "section 5.3 equation",
      "kinetic z term read as -(1/2) m (dz/dt)^2 (the printed expression "
      "omits the square)"};
  return d;
}

// ---- 5.5 reaction-convection-diffusion --------------------------------------

SystemDefinition def_rcd(const ParamMap& p, bool /*printed*/) {
  Expr K = param_or(p, "K", sym("K"));
  Expr gamma = param_or(p, "gamma", sym("gamma"));
  Expr beta = param_or(p, "beta", sym("beta"));
  Expr U = func("U", {T(), X()});
  Expr f = func("f", {T(), X()});
  Expr Ut = func_deriv(U, {1, 0});
  Expr Utt = func_deriv(U, {2, 0});
  Expr Ux = func_deriv(U, {0, 1});
  Expr Uxx = func_deriv(U, {0, 2});
  Expr DtU = deformed(conf_half(A()), "t", U);
  Expr DxU = deformed(conf_half(XA()), "x", U);

  Expr L = f * U - half() * beta * pow(U, 2) + half() * pow(DtU, 2) +
           half() * gamma * pow(DxU, 2) - half() * K * pow(Ux, 2);

  SystemDefinition d;
  d.spec = {L, {{"U", {"t", "x"}, {A(), XA()}}}, {"f"}};
  d.kind = DeriveKind::Field;
  d.derive_vars = {"U"};
  d.recipe = {
      {RecipeStep::Op::IntervalLimit, T() - A(), "", {}, {}, "a->b (t)"},
      {RecipeStep::Op::IntervalLimit, X() - XA(), "", {}, {}, "x_a->x"},
  };
  Expr corrected = Ut + gamma * Ux - K * Uxx + beta * U - f;
  Expr pre = corrected + (T() - A()) * Utt + gamma * (X() - XA()) * Uxx;
  d.targets = {{"post-limit", corrected, pre}};
  if (auto it = p.find("f"); it != p.end()) d.func_subs.push_back({"f", it->second});
  d.notes = {"scalar per-component form with diagonal diffusivity; the vector "
             "case is exercised numerically"};
  return d;
}

// ---- 5.6 / 5.7 Fokker-Planck family -----------------------------------------

SystemDefinition def_fp_linear(const ParamMap& p, bool /*printed*/) {
  Expr D = param_or(p, "D", sym("D"));
  Expr P = func("P", {X(), T()});
  Expr f = func("f", {X()});
  Expr fp = func_deriv(f, {1});
  Expr Pt = func_deriv(P, {0, 1});
  Expr Px = func_deriv(P, {1, 0});
  Expr Pxx = func_deriv(P, {2, 0});
  Expr DtP = deformed(conf_half(A()), "t", P);
  Expr DxP = deformed(conf_half(XA()), "x", P);

  Expr L = half() * pow(DtP, 2) - half() * D * pow(Px, 2) - half() * fp * pow(P, 2) +
           half() * f * pow(DxP, 2);

  SystemDefinition d;
  d.spec = {L, {{"P", {"x", "t"}, {XA(), A()}}}, {"f"}};
  d.kind = DeriveKind::Field;
  d.derive_vars = {"P"};
  d.recipe = {
      {RecipeStep::Op::IntervalLimit, T() - A(), "", {}, {}, "a->b (t)"},
      {RecipeStep::Op::IntervalLimit, X() - XA(), "", {}, {}, "x_a->x"},
  };
  d.targets = {{"post-limit", Pt + fp * P + f * Px - D * Pxx, std::nullopt}};
  if (auto it = p.find("f"); it != p.end()) d.func_subs.push_back({"f", it->second});
  d.notes = {};
  return d;
}

SystemDefinition def_fp_nl1(const ParamMap& p, bool printed) {
  Expr D = param_or(p, "D", sym("D"));
  Expr mu = param_or(p, "mu", sym("mu"));
  Expr P = func("P", {X(), T()});
  Expr f = func("f", {X()});
  Expr fp = func_deriv(f, {1});
  Expr Pt = func_deriv(P, {0, 1});
  Expr Px = func_deriv(P, {1, 0});
  Expr Pxx = func_deriv(P, {2, 0});
  Expr DtP = deformed(conf_half(A()), "t", P);
  Expr DxP = deformed(conf_half(XA()), "x", P);

  Expr L = half() * pow(DtP, 2) -
           half() * D * pow(Px, 2) * make_pow(P, mu - number(1)) -
           half() * fp * pow(P, 2) + half() * f * pow(DxP, 2);

  SystemDefinition d;
  d.spec = {L, {{"P", {"x", "t"}, {XA(), A()}}}, {"f"}};
  d.kind = DeriveKind::Field;
  d.derive_vars = {"P"};
  d.recipe = {
      {RecipeStep::Op::IntervalLimit, T() - A(), "", {}, {}, "a->b (t)"},
      {RecipeStep::Op::IntervalLimit, X() - XA(), "", {}, {}, "x_a->x"},
  };
  Expr extra = half() * (mu - number(1)) * D * pow(Px, 2) *
               make_pow(P, mu - number(2));
  Expr corrected = Pt + fp * P + f * Px - D * make_pow(P, mu - number(1)) * Pxx -
                   extra;
  // As printed, the extra term carries the opposite sign relative to the
  // divergence form, i.e. the equation reads ... + (1/2)(mu-1) D (Px)^2
  // P^(mu-2) on the right-hand side of dP/dt.
  Expr printed_target = Pt + fp * P + f * Px -
                        D * make_pow(P, mu - number(1)) * Pxx -
                        (mu - number(1)) * D * pow(Px, 2) * make_pow(P, mu - number(2)) -
                        extra;
  d.targets = {{"post-limit", printed ? printed_target : corrected, std::nullopt}};
  if (auto it = p.find("f"); it != p.end()) d.func_subs.push_back({"f", it->second});
  d.notes = {
      "the extra nonlinear term is -(1/2)(mu-1) D (dP/dx)^2 P^(mu-2) relative "
      "to the divergence form; the printed + sign does not follow from the "
      "printed Lagrangian"};
  return d;
}

SystemDefinition def_fp_nl2(const ParamMap& p, bool printed) {
  Expr D = param_or(p, "D", sym("D"));
  Expr mu = param_or(p, "mu", sym("mu"));
  Expr nu = param_or(p, "nu", sym("nu"));
  Expr P = func("P", {X(), T()});
  Expr f = func("f", {X()});
  Expr fp = func_deriv(f, {1});
  Expr Pt = func_deriv(P, {0, 1});
  Expr Px = func_deriv(P, {1, 0});
  Expr Pxx = func_deriv(P, {2, 0});
  Expr DtP = deformed(conf_half(A()), "t", P);
  Expr DxP = deformed(conf_half(XA()), "x", P);
  Expr Pmu = make_pow(P, mu);
  Expr DtPmu = deformed(conf_half(A()), "t", Pmu);
  Expr DxPmu = deformed(conf_half(XA()), "x", Pmu);

  Expr convection = printed
                        ? half() * f * pow(DxP, 2) * Pmu        // as printed
                        : half() * f * DxP * DxPmu;             // corrected
  Expr L = half() * DtP * DtPmu -
           half() * D * pow(Px, 2) * make_pow(P, nu - number(1)) -
           fp * make_pow(P, mu + number(1)) / (mu + number(1)) + convection;

  SystemDefinition d;
  d.spec = {L, {{"P", {"x", "t"}, {XA(), A()}}}, {"f"}};
  d.kind = DeriveKind::Field;
  d.derive_vars = {"P"};
  d.recipe = {
      {RecipeStep::Op::IntervalLimit, T() - A(), "", {}, {}, "a->b (t)"},
      {RecipeStep::Op::IntervalLimit, X() - XA(), "", {}, {}, "x_a->x"},
  };
  Expr dPmu_dt = mu * make_pow(P, mu - number(1)) * Pt;
  Expr corrected = dPmu_dt + fp * Pmu + mu * f * make_pow(P, mu - number(1)) * Px -
                   D * make_pow(P, nu - number(1)) * Pxx -
                   half() * (nu - number(1)) * D * pow(Px, 2) *
                       make_pow(P, nu - number(2));
  d.targets = {{"post-limit", corrected, std::nullopt}};
  if (auto it = p.find("f"); it != p.end()) d.func_subs.push_back({"f", it->second});
  d.notes = {
      "convection term implemented as (1/2) f (Dx P)(Dx P^mu), mirroring the "
      "time term; the printed (1/2) f (Dx P)^2 P^mu does not produce the "
      "printed -d/dx[f P^mu] convection",
      "the extra nonlinear term carries a - sign relative to the divergence "
      "form, as in the first nonlinear variant"};
  return d;
}

// ---- 5.8 KdV ---------------------------------------------------------------

SystemDefinition def_kdv(const ParamMap& p, bool printed, bool deformed_variant) {
  Expr mu = deformed_variant ? param_or(p, "mu", sym("mu")) : number(1);
  Expr nu = deformed_variant ? param_or(p, "nu", sym("nu")) : number(1);
  Expr phi = func("phi", {X(), T()});
  Expr phit = func_deriv(phi, {0, 1});
  Expr phix = func_deriv(phi, {1, 0});
  Expr phixx = func_deriv(phi, {2, 0});
  Expr phix3 = func_deriv(phi, {3, 0});
  Expr DtPhi = deformed(conf_half(A()), "t", phi);
  Expr DxPhi = deformed(conf_half(XA()), "x", phi);
  Expr DxPhix = deformed(conf_half(XA()), "x", phix);

  Expr L1 = number(1, 4) * pow(DxPhix, 2);
  Expr L2;
  if (deformed_variant) {
    Expr DtPhiMu = deformed(conf_half(A()), "t", make_pow(phi, mu));
    L2 = -half() * DtPhi * DtPhiMu;
  } else {
    // The printed L2 is linear in Dt phi; the square is forced by the
    // phi_t term of the stated KdV equation (and by the mu=1 limit of the
    // deformed variant).
    L2 = printed ? -half() * DtPhi : -half() * pow(DtPhi, 2);
  }
  Expr L3 = number(3) * make_pow(phi, nu) * pow(DxPhi, 2);
  Expr L = L1 + L2 + L3;

  SystemDefinition d;
  d.spec = {L, {{"phi", {"x", "t"}, {XA(), A()}}}, {}};
  d.kind = DeriveKind::Field;
  d.derive_vars = {"phi"};
  d.recipe = {
      {RecipeStep::Op::IntervalLimit, T() - A(), "", {}, {}, "a->b (t)"},
      {RecipeStep::Op::IntervalLimit, X() - XA(), "", {}, {}, "x_a->x"},
  };
  if (deformed_variant) {
    Expr dPhiMu_dt = mu * make_pow(phi, mu - number(1)) * phit;
    d.targets = {{"post-limit",
                  dPhiMu_dt + phix3 - number(6) * make_pow(phi, nu) * phix,
                  std::nullopt}};
  } else {
    Expr pre = phit + (T() - A()) * func_deriv(phi, {0, 2}) -
               number(3) * (X() - XA()) * pow(phix, 2) - number(6) * phi * phix -
               number(6) * phi * (X() - XA()) * phixx + phix3 +
               half() * (X() - XA()) * func_deriv(phi, {4, 0});
    d.targets = {{"post-limit", phit + phix3 - number(6) * phi * phix, pre}};
  }
  d.notes = {deformed_variant
                 ? std::string("reduces to the undeformed entry at mu=nu=1")
                 : std::string(
                       "L2 implemented as -(1/2)(Dt^{1/2} phi)^2; the printed "
                       "linear L2 makes the a->b limit singular "
                       "((t-a)^{-1/2} term) and produces no phi_t")};
  return d;
}

// ---- 5.9 Landau-Lifshitz-Gilbert --------------------------------------------

SystemDefinition def_llg(const ParamMap& p, bool /*printed*/) {
  Expr g = param_or(p, "g", sym("g"));
  Expr kappa = param_or(p, "kappa", sym("kappa"));
  Expr c = param_or(p, "c", sym("c"));
  Expr m1 = func("m1", {T()});
  Expr m2 = func("m2", {T()});
  Expr m3 = func("m3", {T()});
  std::vector<Expr> ms = {m1, m2, m3};
  Expr kc = kappa * c;

  std::vector<Expr> terms;
  for (int i = 0; i < 3; ++i) {
    std::string ai = "A" + std::to_string(i + 1);
    std::string hi = "H" + std::to_string(i + 1);
    Expr Ai = func(ai, {m1, m2, m3});
    Expr Hi = func(hi, {T()});
    Expr mdot = func_deriv(ms[i], {1});
    Expr Dm = deformed(conf_half(A()), "t", ms[i]);
    terms.push_back(number(2) * Ai * mdot - half() * kc * pow(Dm, 2) - Hi * ms[i]);
  }
  Expr L = make_sum(std::move(terms));

  SystemDefinition d;
  d.spec = {L,
            {{"m1", {"t"}, {A()}}, {"m2", {"t"}, {A()}}, {"m3", {"t"}, {A()}}},
            {"H1", "H2", "H3"}};
  d.kind = DeriveKind::Particle;
  d.derive_vars = {"m3"};
  // curl axiom (grad_m x A) = g m, solved for the D3 components:
  Expr A1 = func("A1", {m1, m2, m3});
  Expr A2 = func("A2", {m1, m2, m3});
  Expr A3 = func("A3", {m1, m2, m3});
  d.recipe = {
      {RecipeStep::Op::IntervalLimit, T() - A(), "", {}, {}, "a->b"},
      {RecipeStep::Op::Collapse, {}, "", func_deriv(A1, {0, 0, 1}),
       func_deriv(A3, {1, 0, 0}) + g * m2, "curl axiom (component 2)"},
      {RecipeStep::Op::Collapse, {}, "", func_deriv(A2, {0, 0, 1}),
       func_deriv(A3, {0, 1, 0}) - g * m1, "curl axiom (component 1)"},
  };
  Expr m1d = func_deriv(m1, {1});
  Expr m2d = func_deriv(m2, {1});
  Expr m3d = func_deriv(m3, {1});
  Expr H3 = func("H3", {T()});
  d.targets = {{"beta-component identity",
                number(2) * g * (m2 * m1d - m1 * m2d) - H3 + kc * m3d,
                std::nullopt}};
  d.notes = {
      "scalar beta-component identity up to the curl axiom; the vector LLG "
      "form is exercised numerically",
      "with the printed 2 A_nu dm_nu coupling the precession term carries "
      "coefficient 2g; the implicit form printed with 1/g corresponds to an "
      "A_nu coupling without the factor 2",
      "H_eff is treated as a given source and is not varied"};
  return d;
}

// ---- 5.10 Caldirola-Kanai ----------------------------------------------------

SystemDefinition def_ck(const ParamMap& p, bool printed) {
  Expr m = param_or(p, "m", sym("m"));
  Expr omega0 = param_or(p, "omega0", sym("omega0"));
  Expr lambda = param_or(p, "lambda", sym("lambda"));
  Expr q = func("q", {T()});
  Kernel k = Kernel::lambda_exp(lambda, /*halved=*/true);
  Expr Dq = deformed(k, "t", q);
  Expr elam = exp_of(lambda * T());

  Expr L = half() * m * pow(Dq, 2) - half() * m * elam * pow(omega0, 2) * pow(q, 2);

  SystemDefinition d;
  d.spec = {L, {{"q", {"t"}, {number(0)}}}, {}};
  d.kind = DeriveKind::Hamiltonian;
  d.derive_vars = {"q"};
  Expr pp = sym("p");
  Expr omega_pow = printed ? omega0 : pow(omega0, 2);
  d.hamiltonian_target = exp_of(-(lambda * T())) * pow(pp, 2) / (number(2) * m) +
                         half() * m * elam * omega_pow * pow(q, 2);
  Expr qd = func_deriv(q, {1});
  Expr qdd = func_deriv(q, {2});
  d.eom_target = qdd + lambda * qd + pow(omega0, 2) * q;
  d.notes = {
      "potential uses omega0^2 (printed omega0) so the lambda=0 limit is a "
      "harmonic oscillator",
      "kinetic term uses the halved kernel e^{-lambda t/2} so its square "
      "yields the e^{-lambda t} mass factor of the printed Hamiltonian",
      "L = T - V; the printed L = T + V contradicts the printed Hamiltonian"};
  return d;
}

// ---- registry ---------------------------------------------------------------

const std::vector<EntryMeta>& entries() {
  static const std::vector<EntryMeta> e = {
      {"dissipative-oscillator", "5.1",
       "damped particle in a potential via a conformable friction term",
       {"m", "gamma", "U"}, true},
      {"langevin", "5.2",
       "Langevin equation with time-dependent damping and diffusion "
       "(scaled Brownian motion)",
       {"m", "gamma", "D", "U", "zeta"}, true},
      {"abraham-lorentz", "5.3",
       "radiation-reaction (Abraham-Lorentz) equation from a higher-order "
       "deformed slot",
       {"m", "e", "c", "U"}, true},
      {"galley-ald", "5.4",
       "doubled-variable (Galley) derivation collapsing to the "
       "Abraham-Lorentz equation",
       {"m", "e", "c", "U"}, true},
      {"rcd", "5.5", "reaction-convection-diffusion equation",
       {"K", "gamma", "beta", "f"}, false},
      {"fp-linear", "5.6", "linear Fokker-Planck equation", {"D", "f"}, false},
      {"fp-nonlinear-1", "5.7",
       "nonlinear Fokker-Planck with power-law diffusion (extra gradient "
       "term)",
       {"D", "mu", "f"}, true},
      {"fp-nonlinear-2", "5.7",
       "nonlinear Fokker-Planck for P^mu with power-law diffusion",
       {"D", "mu", "nu", "f"}, true},
      {"kdv", "5.8", "Korteweg-de Vries equation without auxiliary potential",
       {}, true},
      {"kdv-deformed", "5.8", "deformed KdV equation for phi^mu",
       {"mu", "nu"}, false},
      {"llg", "5.9",
       "Landau-Lifshitz-Gilbert beta-component identity (curl axiom "
       "substituted)",
       {"g", "kappa", "c"}, false},
      {"caldirola-kanai", "5.10",
       "Caldirola-Kanai Hamiltonian via the lambda-exp metric derivative",
       {"m", "omega0", "lambda"}, true},
  };
  return e;
}

const EntryMeta& find_entry(const std::string& id) {
  for (const auto& e : entries())
    if (e.id == id) return e;
  throw UnknownSystem("unknown system '" + id + "'");
}

SystemDefinition make_definition(const std::string& id, const ParamMap& params,
                                 bool printed) {
  const EntryMeta& meta = find_entry(id);
  check_params(params, meta.params);
  if (id == "dissipative-oscillator") return def_dissipative(params, printed);
  if (id == "langevin") return def_langevin(params, printed);
  if (id == "abraham-lorentz") return def_abraham_lorentz(params, printed);
  if (id == "galley-ald") return def_galley(params, printed);
  if (id == "rcd") return def_rcd(params, printed);
  if (id == "fp-linear") return def_fp_linear(params, printed);
  if (id == "fp-nonlinear-1") return def_fp_nl1(params, printed);
  if (id == "fp-nonlinear-2") return def_fp_nl2(params, printed);
  if (id == "kdv") return def_kdv(params, printed, false);
  if (id == "kdv-deformed") return def_kdv(params, printed, true);
  if (id == "llg") return def_llg(params, printed);
  if (id == "caldirola-kanai") return def_ck(params, printed);
  throw UnknownSystem("unknown system '" + id + "'");
}

Expr apply_func_subs(const Expr& e, const FuncSubs& subs) {
  Expr out = e;
  for (const auto& [name, repl] : subs) out = substitute_function(out, name, repl);
  return simplify(out);
}

void apply_recipe(ELResult& r, const std::vector<RecipeStep>& recipe) {
  for (const auto& step : recipe) {
    switch (step.op) {
      case RecipeStep::Op::IntervalLimit: {
        auto lim = take_limit_interval(r.post_limit, step.interval);
        r.post_limit = lim.post;
        for (const Expr& dterm : lim.dropped) r.dropped_terms.push_back(dterm);
        break;
      }
      case RecipeStep::Op::AlphaLimit:
        r.post_limit = take_limit_alpha(r.post_limit, step.alpha);
        break;
      case RecipeStep::Op::Collapse:
        r.post_limit = expand(substitute(r.post_limit, step.from, step.to));
        break;
    }
    r.limits_applied.push_back(step.label);
  }
}

bool match(const Expr& derived, const Expr& target) {
  // Exact-rational structural equivalence on the expanded canonical forms;
  // randomized evaluation only as a last resort.
  Expr d = expand(sign_normalize(derived));
  Expr t = expand(sign_normalize(target));
  if (simplify(d - t).is_zero()) return true;
  return equivalent(d, t, 24, 20240601, 1e-9);
}

TargetCheck make_check(const std::string& label, const Expr& derived,
                       const Expr& target) {
  TargetCheck c;
  c.label = label;
  c.derived = sign_normalize(derived);
  c.target = sign_normalize(target);
  if (match(derived, target)) {
    c.verdict = Verdict::Match;
  } else {
    c.verdict = Verdict::Mismatch;
    c.diff = sign_normalize(simplify(c.derived - c.target));
  }
  return c;
}

}  // namespace

std::vector<SystemInfo> list_systems() {
  std::vector<SystemInfo> out;
  out.reserve(entries().size());
  for (const auto& e : entries()) out.push_back({e.id, e.section, e.description});
  return out;
}

bool is_known_system(const std::string& id) {
  for (const auto& e : entries())
    if (e.id == id) return true;
  return false;
}

LagrangianSpec build(const std::string& id, const ParamMap& params) {
  SystemDefinition d = make_definition(id, params, false);
  // Potential/coefficient specializations apply to the Lagrangian directly.
  LagrangianSpec spec = d.spec;
  for (const auto& [name, repl] : d.func_subs)
    spec.lagrangian = substitute_function(spec.lagrangian, name, repl);
  spec.lagrangian = simplify(spec.lagrangian);
  return spec;
}

ParamMap sbm_params() {
  std::map<std::string, std::vector<std::string>> none;
  ParamMap p;
  p["gamma"] = parse("gamma0*(1+t/tau)^(alpha-1)");
  p["D"] = parse("D0*(1+t/tau)^(alpha-1)");
  p["U"] = number(0);
  return p;
}

std::map<std::string, std::vector<std::string>> system_variables(
    const std::string& id) {
  SystemDefinition d = make_definition(id, {}, false);
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& v : d.spec.variables) out[v.name] = v.independents;
  return out;
}

DerivationOutput derive_system(const std::string& id, const ParamMap& params,
                               bool apply_limits) {
  SystemDefinition d = make_definition(id, params, false);
  DerivationOutput out;
  out.spec = d.spec;
  out.notes = d.notes;
  if (d.kind == DeriveKind::Hamiltonian) {
    out.hamiltonian = legendre_transform(d.spec, d.derive_vars[0]);
    ELResult r;
    r.variable = d.derive_vars[0];
    r.pre_limit = *out.hamiltonian;
    r.post_limit = hamilton_equation_of_motion(*out.hamiltonian, "q", "p", "t");
    r.limits_applied = {"legendre", "hamilton flow"};
    out.results.push_back(r);
    return out;
  }
  for (const auto& v : d.derive_vars) {
    ELResult r = d.kind == DeriveKind::Field
                     ? euler_lagrange_field(d.spec, v)
                     : euler_lagrange_particle(d.spec, v);
    if (apply_limits) apply_recipe(r, d.recipe);
    r.pre_limit = apply_func_subs(r.pre_limit, d.func_subs);
    r.post_limit = apply_func_subs(r.post_limit, d.func_subs);
    out.results.push_back(std::move(r));
  }
  return out;
}

Expr hamiltonian_of(const std::string& id, const ParamMap& params) {
  SystemDefinition d = make_definition(id, params, false);
  if (d.kind != DeriveKind::Hamiltonian)
    throw UnknownSystem("'" + id + "' has no Hamiltonian path");
  return legendre_transform(d.spec, d.derive_vars[0]);
}

VerificationReport verify(const std::string& id, const ParamMap& params,
                          bool printed_target) {
  SystemDefinition d = make_definition(id, params, printed_target);
  VerificationReport rep;
  rep.system = id;
  rep.printed_mode = printed_target;
  rep.notes = d.notes;

  auto finalize = [&rep]() {
    rep.verdict = Verdict::Match;
    for (const auto& c : rep.checks)
      if (c.verdict != Verdict::Match)
        rep.verdict = rep.verdict == Verdict::Singular ? rep.verdict
                                                       : Verdict::Mismatch;
    return rep;
  };

  std::vector<ELResult> results;
  try {
    if (d.kind == DeriveKind::Hamiltonian) {
      Expr H = legendre_transform(d.spec, d.derive_vars[0]);
      rep.checks.push_back(make_check("hamiltonian", H, *d.hamiltonian_target));
      Expr eom = hamilton_equation_of_motion(H, "q", "p", "t");
      // The printed-variant demonstration concerns the Hamiltonian itself.
      rep.checks.push_back(make_check("hamilton flow equation of motion", eom,
                                      *d.eom_target));
      ELResult r;
      r.variable = d.derive_vars[0];
      r.pre_limit = H;
      r.post_limit = eom;
      r.limits_applied = {"legendre", "hamilton flow"};
      rep.results.push_back(r);
      return finalize();
    }

    for (const auto& v : d.derive_vars)
      results.push_back(d.kind == DeriveKind::Field
                            ? euler_lagrange_field(d.spec, v)
                            : euler_lagrange_particle(d.spec, v));

    // Pre-limit targets are pinned for a subset of entries.
    for (size_t i = 0; i < results.size(); ++i) {
      if (i < d.targets.size() && d.targets[i].pre_corrected) {
        Expr derived = apply_func_subs(results[i].pre_limit, d.func_subs);
        Expr target = apply_func_subs(*d.targets[i].pre_corrected, d.func_subs);
        rep.checks.push_back(
            make_check(d.targets[i].label + " (pre-limit)", derived, target));
      }
    }

    // Galley matches the displayed pair before the limit recipe runs.
    if (d.kind == DeriveKind::System) {
      for (size_t i = 0; i < results.size(); ++i) {
        Expr derived = apply_func_subs(results[i].pre_limit, d.func_subs);
        Expr target = apply_func_subs(d.targets[i].corrected, d.func_subs);
        rep.checks.push_back(make_check(d.targets[i].label, derived, target));
      }
    }

    for (auto& r : results) apply_recipe(r, d.recipe);

    if (d.kind == DeriveKind::System) {
      for (auto& r : results) {
        Expr derived = apply_func_subs(r.post_limit, d.func_subs);
        Expr target = apply_func_subs(*d.collapsed_target, d.func_subs);
        rep.checks.push_back(
            make_check("collapsed equation (" + r.variable + ")", derived, target));
      }
    } else {
      for (size_t i = 0; i < results.size(); ++i) {
        Expr derived = apply_func_subs(results[i].post_limit, d.func_subs);
        Expr target = apply_func_subs(d.targets[i].corrected, d.func_subs);
        rep.checks.push_back(make_check(d.targets[i].label, derived, target));
      }
    }
    for (auto& r : results) {
      r.pre_limit = apply_func_subs(r.pre_limit, d.func_subs);
      r.post_limit = apply_func_subs(r.post_limit, d.func_subs);
      rep.results.push_back(std::move(r));
    }
    return finalize();
  } catch (const LimitSingular& ex) {
    if (printed_target) {
      // The printed Lagrangian makes the limit recipe singular (kdv).
      // Report a mismatch with the offending pre-limit residual as the diff.
      rep.verdict = Verdict::Mismatch;
      rep.error = ex.what();
      TargetCheck c;
      c.label = "post-limit";
      c.target = d.targets.empty() ? number(0)
                                   : sign_normalize(d.targets[0].corrected);
      c.derived = number(0);
      c.verdict = Verdict::Mismatch;
      if (!results.empty()) {
        c.derived = sign_normalize(results[0].pre_limit);
        c.diff = sign_normalize(simplify(c.derived - c.target));
      }
      rep.checks.push_back(c);
      rep.notes.push_back(std::string("limit singular on printed input: ") +
                          ex.what());
      return rep;
    }
    rep.verdict = Verdict::Singular;
    rep.error = ex.what();
    return rep;
  } catch (const DefvarError& ex) {
    rep.verdict = Verdict::Singular;
    rep.error = ex.what();
    return rep;
  }
}

}  // namespace defvar
