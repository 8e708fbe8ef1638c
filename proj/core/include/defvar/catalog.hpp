#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "defvar/variational.hpp"

namespace defvar {

enum class Verdict { Match, Mismatch, Singular };

std::string to_string(Verdict v);

struct SystemInfo {
  std::string id;
  std::string section;     // "5.1" ... "5.10"
  std::string description;
};

/// Parameter overrides: symbol values and coefficient/potential expressions,
/// keyed by the parameter names documented per system.
using ParamMap = std::map<std::string, Expr>;

struct TargetCheck {
  std::string label;
  Expr derived;
  Expr target;
  Verdict verdict = Verdict::Match;
  std::optional<Expr> diff;  // sign-normalized derived minus target
};

struct VerificationReport {
  std::string system;
  Verdict verdict = Verdict::Match;
  bool printed_mode = false;
  std::vector<ELResult> results;
  std::vector<TargetCheck> checks;
  std::vector<std::string> notes;  // typo resolutions and conventions applied
  std::string error;               // set on Singular
};

struct DerivationOutput {
  LagrangianSpec spec;
  std::vector<ELResult> results;
  std::optional<Expr> hamiltonian;
  std::vector<std::string> notes;
};

/// The catalog: one entry per application of sections 5.1-5.10, with the
/// 5.7 and 5.8 variants counted separately (12 entries).
std::vector<SystemInfo> list_systems();

bool is_known_system(const std::string& id);

/// Fully-formed Lagrangian spec with documented corrections applied.
/// Unknown parameter keys raise BadParameter; unknown ids UnknownSystem.
LagrangianSpec build(const std::string& id, const ParamMap& params = {});

/// Runs builder -> derivation -> limit recipe -> equivalence against the
/// corrected target(s). With printed_target, re-runs against the equations
/// (or Lagrangian) exactly as printed, demonstrating the corrections.
VerificationReport verify(const std::string& id, const ParamMap& params = {},
                          bool printed_target = false);

/// Derivation without target matching, for the CLI derive command.
DerivationOutput derive_system(const std::string& id, const ParamMap& params = {},
                               bool apply_limits = true);

/// Hamiltonian of the Caldirola-Kanai entry via the Legendre transform.
Expr hamiltonian_of(const std::string& id, const ParamMap& params = {});

/// Scaled-Brownian-motion parameter preset for the langevin entry.
ParamMap sbm_params();

/// Dynamical variables of a system (name -> independent variables), for
/// parsing parameter expressions in the system's context.
std::map<std::string, std::vector<std::string>> system_variables(
    const std::string& id);

/// Replaces a dependent function (and its derivatives) by a concrete
/// expression written in terms of the function's arguments.
Expr substitute_function(const Expr& e, const std::string& name,
                         const Expr& replacement);

}  // namespace defvar
