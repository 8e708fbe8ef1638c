// defvar: derive, verify and simulate the deformed-derivative variational
// systems of the built-in catalog, or user Lagrangians given on the command
// line. See README.md for the expression grammar and output formats.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "defvar/calculus.hpp"
#include "defvar/catalog.hpp"
#include "defvar/io.hpp"
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

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitParse = 2;
constexpr int kExitEngine = 3;
constexpr int kExitNumeric = 4;

defvar::Format parse_format(const std::string& f) {
  if (f == "plain") return defvar::Format::Plain;
  if (f == "latex") return defvar::Format::Latex;
  if (f == "sexpr") return defvar::Format::Sexpr;
  throw CLI::ValidationError("--format", "expected plain, latex or sexpr");
}

// "name:t;phi:x,t" -> declarations for bare-identifier promotion
std::map<std::string, std::vector<std::string>> parse_vars(const std::string& s) {
  std::map<std::string, std::vector<std::string>> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t semi = s.find(';', pos);
    std::string piece = s.substr(pos, semi == std::string::npos ? semi : semi - pos);
    size_t colon = piece.find(':');
    if (colon == std::string::npos)
      throw defvar::ParseError("--vars entries look like name:t or name:x,t", pos);
    std::string name = piece.substr(0, colon);
    std::vector<std::string> indeps;
    std::string rest = piece.substr(colon + 1);
    size_t p2 = 0;
    while (p2 <= rest.size()) {
      size_t comma = rest.find(',', p2);
      indeps.push_back(rest.substr(p2, comma == std::string::npos ? comma
                                                                  : comma - p2));
      if (comma == std::string::npos) break;
      p2 = comma + 1;
    }
    out[name] = indeps;
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  return out;
}

defvar::ParamMap parse_params(const std::vector<std::string>& kvs,
                              const std::string& system_id) {
  std::map<std::string, std::vector<std::string>> vars;
  if (!system_id.empty() && defvar::is_known_system(system_id))
    vars = defvar::system_variables(system_id);
  defvar::ParamMap out;
  for (const auto& kv : kvs) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw defvar::ParseError("parameter overrides look like key=value", 0);
    out[kv.substr(0, eq)] = defvar::parse(kv.substr(eq + 1), vars);
  }
  return out;
}

// Files written by the current command, removed again on failure.
struct OutputGuard {
  std::vector<fs::path> files;
  bool committed = false;

  std::string track(const fs::path& p) {
    files.push_back(p);
    return p.string();
  }
  ~OutputGuard() {
    if (committed) return;
    for (const auto& f : files) {
      std::error_code ec;
      fs::remove(f, ec);
    }
  }
};

void print_el(const defvar::ELResult& r, defvar::Format format, bool no_limit) {
  std::cout << "variable: " << r.variable << "\n";
  std::cout << "  pre-limit:  "
            << render(defvar::sign_normalize(r.pre_limit), format) << " = 0\n";
  if (!no_limit) {
    std::cout << "  post-limit: "
              << render(defvar::sign_normalize(r.post_limit), format) << " = 0\n";
    for (const auto& d : r.dropped_terms)
      std::cout << "  dropped:    " << render(d, format) << "\n";
    if (!r.limits_applied.empty()) {
      std::cout << "  limits:     ";
      for (size_t i = 0; i < r.limits_applied.size(); ++i)
        std::cout << (i ? ", " : "") << r.limits_applied[i];
      std::cout << "\n";
    }
  }
}

struct SimulateArgs {
  std::string system;
  std::string out_dir;
  std::string scheme = "pseudo-spectral";
  std::string method = "rk4";
  long long seed = -1;
  long long ensemble = 10000;
  double tmax = 20.0;
  double dt = 1e-3;
  std::vector<std::string> params;
};

double param_d(const defvar::ParamMap& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  if (it == p.end()) return dflt;
  defvar::Bindings b;
  return defvar::evaluate(it->second, b);
}

int run_simulate(const SimulateArgs& a, bool as_json) {
  defvar::ParamMap pm = parse_params(a.params, "");
  // DEFVAR_OUT provides the default output directory
  const char* env_out = std::getenv("DEFVAR_OUT");
  fs::path dir = !a.out_dir.empty() ? fs::path(a.out_dir)
                 : env_out          ? fs::path(env_out)
                                    : fs::path(".");
  fs::create_directories(dir);
  OutputGuard guard;
  json manifest;
  std::vector<std::string> summary;
  auto method = a.method == "semi-implicit-euler"
                    ? defvar::num::OdeMethod::SemiImplicitEuler
                    : defvar::num::OdeMethod::Rk4;

  if (a.system == "dissipative-oscillator" || a.system == "abraham-lorentz" ||
      a.system == "caldirola-kanai" || a.system == "llg") {
    defvar::num::Trajectory traj;
    if (a.system == "dissipative-oscillator") {
      traj = defvar::num::simulate_dissipative_oscillator(
          param_d(pm, "m", 1.0), param_d(pm, "gamma", 0.2),
          param_d(pm, "k", 1.0), param_d(pm, "x0", 1.0), param_d(pm, "v0", 0.0),
          a.tmax, a.dt, method);
      const auto& e = traj.col("E");
      bool monotone = true;
      for (size_t i = 1; i < e.size(); ++i)
        if (e[i] > e[i - 1] + 1e-12 * std::abs(e[0])) monotone = false;
      summary.push_back(std::string("energy monotone: ") +
                        (monotone ? "PASS" : "FAIL"));
      manifest["invariants"]["energy_monotone"] = monotone;
    } else if (a.system == "abraham-lorentz") {
      auto run = defvar::num::simulate_abraham_lorentz(
          param_d(pm, "m", 1.0), param_d(pm, "k", 1.0),
          param_d(pm, "eps", 0.01), param_d(pm, "x0", 1.0),
          param_d(pm, "v0", 0.0), param_d(pm, "a0", -1.0), a.tmax, a.dt);
      defvar::io::write_trajectory_csv(guard.track(dir / "direct.csv"), run.direct);
      manifest["direct"] = defvar::io::manifest_json(run.direct);
      manifest["direct"]["runaway_detected"] = run.runaway_detected;
      summary.push_back(std::string("direct runaway detected: ") +
                        (run.runaway_detected ? "yes" : "no"));
      traj = run.reduced;
    } else if (a.system == "caldirola-kanai") {
      traj = defvar::num::simulate_caldirola_kanai(
          param_d(pm, "m", 1.0), param_d(pm, "omega0", 1.0),
          param_d(pm, "lambda", 0.2), param_d(pm, "q0", 1.0),
          param_d(pm, "p0", 0.0), a.tmax, a.dt, method);
      const auto& e = traj.col("E_mech");
      bool monotone = true;
      for (size_t i = 1; i < e.size(); ++i)
        if (e[i] > e[i - 1] + 1e-10 * std::abs(e[0])) monotone = false;
      summary.push_back(std::string("mechanical energy monotone: ") +
                        (monotone ? "PASS" : "FAIL"));
      manifest["invariants"]["energy_monotone"] = monotone;
    } else {
      defvar::num::LlgParams lp;
      lp.H = {param_d(pm, "Hx", 0.0), param_d(pm, "Hy", 0.0),
              param_d(pm, "Hz", 1.0)};
      lp.g = param_d(pm, "g", -1.0);
      lp.kappa_c = param_d(pm, "kappac", 0.1);
      lp.m0 = {param_d(pm, "m0x", 0.6), param_d(pm, "m0y", 0.0),
               param_d(pm, "m0z", 0.8)};
      traj = defvar::num::simulate_llg(lp, a.tmax, a.dt);
      double drift = 0.0;
      for (double v : traj.col("norm")) drift = std::max(drift, std::abs(v - 1.0));
      summary.push_back("norm drift: " + std::to_string(drift));
      manifest["invariants"]["norm_drift"] = drift;
      manifest["implicit_residual"] = defvar::num::llg_implicit_residual(traj, lp);
    }
    defvar::io::write_trajectory_csv(guard.track(dir / "trajectory.csv"), traj);
    manifest["trajectory"] = defvar::io::manifest_json(traj);
  } else if (a.system == "langevin") {
    if (a.seed < 0)
      throw defvar::BadParameter(
          "stochastic systems require an explicit --seed");
    defvar::num::SbmParams sp;
    sp.m = param_d(pm, "m", 1.0);
    sp.gamma0 = param_d(pm, "gamma0", 1.0);
    sp.D0 = param_d(pm, "D0", 0.5);
    sp.tau = param_d(pm, "tau", 1.0);
    sp.alpha = param_d(pm, "alpha", 0.5);
    auto stats = defvar::num::simulate_langevin_sbm(
        sp, static_cast<size_t>(a.ensemble),
        static_cast<std::uint64_t>(a.seed), a.tmax, a.dt);
    defvar::io::write_ensemble_csv(guard.track(dir / "msd.csv"), stats);
    manifest["ensemble"] = defvar::io::manifest_json(stats);
    summary.push_back("final MSD: " + std::to_string(stats.msd.back()));
  } else if (a.system == "rcd") {
    defvar::num::RcdParams rp;
    rp.K = {param_d(pm, "K", 1.0)};
    rp.gamma = {param_d(pm, "gamma", 0.0)};
    rp.beta = param_d(pm, "beta", 0.0);
    size_t n = static_cast<size_t>(param_d(pm, "n", 256));
    double L = param_d(pm, "L", 20.0);
    defvar::num::GridSpec grid{{-L / 2}, {L / static_cast<double>(n)}, {n},
                               defvar::num::Boundary::Periodic};
    std::vector<double> u0(n);
    double sigma = param_d(pm, "sigma", 1.0);
    for (size_t i = 0; i < n; ++i) {
      double x = grid.x0[0] + grid.dx[0] * static_cast<double>(i);
      u0[i] = std::exp(-x * x / (2.0 * sigma * sigma));
    }
    auto g = defvar::num::simulate_rcd(rp, grid, u0, a.tmax, a.dt);
    defvar::io::write_fieldgrid_csv(guard.track(dir / "field.csv"), g, "U");
    manifest["field"] = defvar::io::manifest_json(g);
    const auto& mass = g.conserved.at("mass");
    summary.push_back("mass drift: " +
                      std::to_string(std::abs(mass.back() - mass.front())));
  } else if (a.system == "fp-linear" || a.system == "fp-nonlinear-1" ||
             a.system == "fp-nonlinear-2") {
    defvar::num::FpParams fp;
    fp.D = param_d(pm, "D", 1.0);
    fp.mu = param_d(pm, "mu", 1.5);
    fp.nu = param_d(pm, "nu", 1.5);
    fp.variant = a.system == "fp-linear"
                     ? defvar::num::FpVariant::Linear
                     : (a.system == "fp-nonlinear-1"
                            ? defvar::num::FpVariant::Nonlinear1
                            : defvar::num::FpVariant::Nonlinear2);
    double k = param_d(pm, "k", 1.0);
    fp.drift = [k](double x) { return -k * x; };
    size_t n = static_cast<size_t>(param_d(pm, "n", 200));
    double L = param_d(pm, "L", 12.0);
    double dx = L / static_cast<double>(n);
    std::vector<double> p0(n);
    double norm = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double x = -L / 2 + dx * static_cast<double>(i);
      p0[i] = std::exp(-x * x);
      norm += p0[i] * dx;
    }
    for (double& v : p0) v /= norm;
    auto g = defvar::num::simulate_fokker_planck(
        fp, -L / 2, dx, n, defvar::num::Boundary::Reflecting, p0, a.tmax, a.dt);
    defvar::io::write_fieldgrid_csv(guard.track(dir / "field.csv"), g, "P");
    manifest["field"] = defvar::io::manifest_json(g);
    const auto& nrm = g.conserved.at("norm");
    summary.push_back("normalization drift: " +
                      std::to_string(std::abs(nrm.back() - nrm.front())));
  } else if (a.system == "kdv") {
    size_t n = static_cast<size_t>(param_d(pm, "n", 512));
    double L = param_d(pm, "L", 40.0);
    double c = param_d(pm, "c", 4.0);
    double dx = L / static_cast<double>(n);
    std::vector<double> phi0(n);
    for (size_t i = 0; i < n; ++i)
      phi0[i] = defvar::num::kdv_soliton(c, -L / 2 + dx * static_cast<double>(i), 0.0);
    auto scheme = a.scheme == "zabusky-kruskal"
                      ? defvar::num::KdvScheme::ZabuskyKruskal
                      : defvar::num::KdvScheme::PseudoSpectral;
    auto g = defvar::num::simulate_kdv(phi0, -L / 2, dx, a.tmax, a.dt, scheme, 41);
    defvar::io::write_fieldgrid_csv(guard.track(dir / "field.csv"), g, "phi");
    manifest["field"] = defvar::io::manifest_json(g);
    const auto& m0 = g.conserved.at("int_phi");
    const auto& m1 = g.conserved.at("int_phi2");
    summary.push_back("int(phi) drift: " +
                      std::to_string(std::abs(m0.back() - m0.front())));
    summary.push_back("int(phi^2) drift: " +
                      std::to_string(std::abs(m1.back() - m1.front())));
  } else {
    throw defvar::UnknownSystem("no numeric simulation for '" + a.system + "'");
  }

  manifest["system"] = a.system;
  manifest["tmax"] = a.tmax;
  manifest["dt"] = a.dt;
  if (a.seed >= 0) manifest["seed"] = a.seed;
  defvar::io::write_json(guard.track(dir / "manifest.json"), manifest);
  guard.committed = true;

  if (as_json) {
    std::cout << manifest.dump(2) << "\n";
  } else {
    std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
    for (const auto& s : summary) std::cout << s << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "defvar - variational calculus with deformed derivatives: derive "
      "Euler-Lagrange equations, verify them against the built-in catalog, "
      "and integrate the resulting systems numerically"};
  app.set_config("--config", "", "configuration file (key=value lines)");
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable JSON output");

  // list
  auto* cmd_list = app.add_subcommand("list", "list the system catalog");
  std::string section_filter;
  cmd_list->add_option("--section", section_filter, "filter by source section, e.g. 5.7");

  // derive
  auto* cmd_derive =
      app.add_subcommand("derive", "derive Euler-Lagrange equations");
  std::string derive_system_id, lagrangian_str, vars_str, kernels_str;
  std::string format_str = "plain";
  bool no_limit = false;
  std::vector<std::string> derive_params;
  cmd_derive->add_option("system", derive_system_id, "catalog system id");
  cmd_derive->add_option("--lagrangian", lagrangian_str,
                         "Lagrangian expression (see grammar)");
  cmd_derive->add_option("--vars", vars_str,
                         "dynamical variables, e.g. x:t or phi:x,t;psi:x,t");
  cmd_derive->add_option("--kernels", kernels_str,
                         "kernel overrides per variable, e.g. t=conf(1/2,a)");
  cmd_derive->add_flag("--no-limit", no_limit, "print only the pre-limit form");
  cmd_derive->add_option("--format", format_str, "plain | latex | sexpr");
  cmd_derive->add_option("-p,--param", derive_params, "key=value overrides");

  // verify
  auto* cmd_verify =
      app.add_subcommand("verify", "verify derivations against the catalog");
  std::string verify_system_id;
  bool verify_all = false, printed_target = false;
  std::vector<std::string> verify_params;
  cmd_verify->add_option("system", verify_system_id, "catalog system id");
  cmd_verify->add_flag("--all", verify_all, "verify every catalog system");
  cmd_verify->add_flag("--printed-target", printed_target,
                       "verify against the equations exactly as printed");
  cmd_verify->add_option("-p,--param", verify_params, "key=value overrides");

  // simulate
  auto* cmd_sim = app.add_subcommand("simulate", "integrate a system numerically");
  SimulateArgs sim;
  cmd_sim->add_option("system", sim.system, "system id")->required();
  cmd_sim->add_option("--out", sim.out_dir, "output directory");
  cmd_sim->add_option("--seed", sim.seed, "RNG seed (required when stochastic)");
  cmd_sim->add_option("--N", sim.ensemble, "ensemble size");
  cmd_sim->add_option("--tmax", sim.tmax, "integration time");
  cmd_sim->add_option("--dt", sim.dt, "time step");
  cmd_sim->add_option("--scheme", sim.scheme,
                      "kdv scheme: pseudo-spectral | zabusky-kruskal");
  cmd_sim->add_option("--method", sim.method, "rk4 | semi-implicit-euler");
  cmd_sim->add_option("-p,--param", sim.params, "key=value overrides");
  cmd_sim->allow_extras();  // --gamma 0.2 style passthrough parameters

  // render
  auto* cmd_render = app.add_subcommand("render", "render an expression");
  std::string render_expr, render_format = "plain", render_vars;
  cmd_render->add_option("--expr", render_expr, "expression string")->required();
  cmd_render->add_option("--format", render_format, "plain | latex | sexpr");
  cmd_render->add_option("--vars", render_vars, "dynamical variable declarations");

  app.require_subcommand(1);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_list) {
      auto systems = defvar::list_systems();
      if (!section_filter.empty()) {
        std::erase_if(systems, [&](const defvar::SystemInfo& s) {
          return s.section != section_filter;
        });
      }
      if (as_json) {
        json arr = json::array();
        for (const auto& s : systems)
          arr.push_back({{"id", s.id}, {"section", s.section},
                         {"description", s.description}});
        std::cout << arr.dump(2) << "\n";
      } else {
        for (const auto& s : systems)
          std::printf("%-18s %-5s %s\n", s.id.c_str(), s.section.c_str(),
                      s.description.c_str());
      }
      return 0;
    }

    if (*cmd_derive) {
      auto format = parse_format(format_str);
      if (!lagrangian_str.empty()) {
        auto vars = vars_str.empty()
                        ? std::map<std::string, std::vector<std::string>>{
                              {"x", {"t"}}}
                        : parse_vars(vars_str);
        defvar::Expr L = defvar::parse(lagrangian_str, vars);
        if (!kernels_str.empty()) {
          // entries look like t=conf(1/2,a);x=id
          std::map<std::string, std::string> overrides;
          size_t pos = 0;
          while (pos < kernels_str.size()) {
            size_t semi = kernels_str.find(';', pos);
            std::string piece = kernels_str.substr(
                pos, semi == std::string::npos ? semi : semi - pos);
            size_t eq = piece.find('=');
            if (eq == std::string::npos)
              throw defvar::ParseError("--kernels entries look like var=kernel",
                                       pos);
            overrides[piece.substr(0, eq)] = piece.substr(eq + 1);
            if (semi == std::string::npos) break;
            pos = semi + 1;
          }
          for (const auto& [v, kspec] : overrides) {
            // reuse the expression parser for the kernel spec
            defvar::Expr probe = defvar::parse("D[" + kspec + "," + v + "](x)");
            const defvar::Kernel& k = probe.node().kernel;
            struct Rewriter {
              const std::string& var;
              const defvar::Kernel& k;
              defvar::Expr operator()(const defvar::Expr& e) const {
                const defvar::Node& n = e.node();
                if (n.kind == defvar::Kind::Deformed && n.var == var)
                  return defvar::deformed(k, n.var, (*this)(n.args[0]));
                if (n.args.empty()) return e;
                std::vector<defvar::Expr> args;
                for (const auto& aa : n.args) args.push_back((*this)(aa));
                switch (n.kind) {
                  case defvar::Kind::Sum: return defvar::make_sum(args);
                  case defvar::Kind::Product: return defvar::make_product(args);
                  case defvar::Kind::Pow:
                    return defvar::make_pow(args[0], args[1]);
                  case defvar::Kind::Func: return defvar::func(n.name, args);
                  case defvar::Kind::Deriv:
                    return defvar::func_deriv(args[0], n.orders);
                  case defvar::Kind::OpDeriv:
                    return defvar::op_deriv(args[0], n.var, n.op_order);
                  case defvar::Kind::Deformed:
                    return defvar::deformed(n.kernel, n.var, args[0]);
                  default: return e;
                }
              }
            };
            L = Rewriter{v, k}(L);
          }
        }
        defvar::LagrangianSpec spec;
        spec.lagrangian = L;
        for (const auto& [name, indeps] : vars) {
          defvar::DynamicalVar dv;
          dv.name = name;
          dv.independents = indeps;
          for (const auto& iv : indeps)
            dv.interval_starts.push_back(defvar::sym(iv == "t" ? "a" : iv + "_a"));
          spec.variables.push_back(dv);
        }
        json out = json::array();
        for (const auto& dv : spec.variables) {
          defvar::ELResult r =
              dv.independents.size() > 1
                  ? defvar::euler_lagrange_field(spec, dv.name)
                  : defvar::euler_lagrange_particle(spec, dv.name);
          if (!no_limit) {
            for (size_t i = 0; i < dv.independents.size(); ++i) {
              auto lim = defvar::take_limit_interval(
                  r.post_limit,
                  defvar::sym(dv.independents[i]) - dv.interval_starts[i]);
              r.post_limit = lim.post;
              for (auto& dterm : lim.dropped) r.dropped_terms.push_back(dterm);
              r.limits_applied.push_back(dv.independents[i] + "-interval");
            }
          }
          if (as_json) out.push_back(defvar::io::to_json(r, "custom"));
          else print_el(r, format, no_limit);
        }
        if (as_json) std::cout << out.dump(2) << "\n";
        return 0;
      }
      if (derive_system_id.empty())
        throw defvar::BadParameter("derive needs a system id or --lagrangian");
      auto params = parse_params(derive_params, derive_system_id);
      auto res = defvar::derive_system(derive_system_id, params, !no_limit);
      if (as_json) {
        json out = json::array();
        for (const auto& r : res.results)
          out.push_back(defvar::io::to_json(r, derive_system_id));
        std::cout << out.dump(2) << "\n";
      } else if (res.hamiltonian) {
        std::cout << "hamiltonian: "
                  << render(defvar::simplify(*res.hamiltonian), format) << "\n";
        std::cout << "equation of motion: "
                  << render(res.results[0].post_limit, format) << " = 0\n";
        for (const auto& nnote : res.notes) std::cout << "note: " << nnote << "\n";
      } else {
        for (const auto& r : res.results) print_el(r, format, no_limit);
        for (const auto& nnote : res.notes) std::cout << "note: " << nnote << "\n";
      }
      return 0;
    }

    if (*cmd_verify) {
      std::vector<std::string> ids;
      if (verify_all) {
        for (const auto& s : defvar::list_systems()) ids.push_back(s.id);
      } else if (!verify_system_id.empty()) {
        ids.push_back(verify_system_id);
      } else {
        throw defvar::BadParameter("verify needs a system id or --all");
      }
      auto params = parse_params(verify_params,
                                 ids.size() == 1 ? ids[0] : std::string());
      bool all_match = true;
      json arr = json::array();
      for (const auto& id : ids) {
        auto rep = defvar::verify(id, params, printed_target);
        all_match = all_match && rep.verdict == defvar::Verdict::Match;
        if (as_json) {
          arr.push_back(defvar::io::to_json(rep));
        } else {
          std::printf("%-18s %s\n", id.c_str(),
                      defvar::to_string(rep.verdict).c_str());
          for (const auto& c : rep.checks) {
            if (c.verdict == defvar::Verdict::Match) continue;
            std::cout << "  " << c.label << ": "
                      << defvar::to_string(c.verdict) << "\n";
            if (c.diff)
              std::cout << "    diff: " << render(*c.diff) << "\n";
          }
          if (!rep.error.empty()) std::cout << "  error: " << rep.error << "\n";
          for (const auto& nnote : rep.notes)
            std::cout << "  note: " << nnote << "\n";
        }
      }
      if (as_json) std::cout << arr.dump(2) << "\n";
      return all_match ? 0 : kExitVerify;
    }

    if (*cmd_sim) {
      // leftover --key value pairs become parameter overrides
      auto extras = cmd_sim->remaining();
      for (size_t i = 0; i < extras.size(); ++i) {
        std::string key = extras[i];
        if (key.rfind("--", 0) != 0 || i + 1 >= extras.size())
          throw defvar::BadParameter("unrecognized simulate argument '" + key +
                                     "'");
        sim.params.push_back(key.substr(2) + "=" + extras[++i]);
      }
      return run_simulate(sim, as_json);
    }

    if (*cmd_render) {
      auto vars = render_vars.empty()
                      ? std::map<std::string, std::vector<std::string>>{}
                      : parse_vars(render_vars);
      defvar::Expr e = defvar::parse(render_expr, vars);
      std::cout << render(e, parse_format(render_format)) << "\n";
      return 0;
    }
  } catch (const defvar::ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << "\n";
    return kExitParse;
  } catch (const defvar::BadParameter& ex) {
    std::cerr << "invalid configuration: " << ex.what() << "\n";
    return kExitParse;
  } catch (const defvar::num::NonFiniteState& ex) {
    std::cerr << "numeric failure: " << ex.what() << "\n";
    return kExitNumeric;
  } catch (const defvar::num::CFLViolation& ex) {
    std::cerr << "numeric failure: " << ex.what() << "\n";
    return kExitNumeric;
  } catch (const defvar::num::NormDrift& ex) {
    std::cerr << "numeric failure: " << ex.what() << "\n";
    return kExitNumeric;
  } catch (const defvar::num::RunawayDetected& ex) {
    std::cerr << "numeric failure: " << ex.what() << "\n";
    return kExitNumeric;
  } catch (const defvar::num::SymbolMismatch& ex) {
    std::cerr << "numeric failure: " << ex.what() << "\n";
    return kExitNumeric;
  } catch (const defvar::DefvarError& ex) {
    std::cerr << "engine error: " << ex.what() << "\n";
    return kExitEngine;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitEngine;
  }
  return 0;
}
