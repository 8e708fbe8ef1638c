#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace defvar::num {

struct NonFiniteState : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CFLViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NormDrift : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RunawayDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SymbolMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform-grid time series. Column 0 is always "t"; further columns are
/// state and derived quantities (energy, norm, ...).
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // column-major, aligned with columns

  std::map<std::string, double> params;
  std::map<std::string, std::string> meta;  // system, integrator, seed, ...

  size_t rows() const { return data.empty() ? 0 : data[0].size(); }
  const std::vector<double>& col(const std::string& name) const;
};

enum class Boundary { Periodic, Reflecting, Dirichlet };

std::string to_string(Boundary b);

/// 1-D space-time lattice with snapshots at saved times and conserved
/// quantity series aligned with the snapshot list.
struct FieldGrid {
  double x0 = 0.0;
  double dx = 0.0;
  size_t points = 0;
  Boundary boundary = Boundary::Periodic;

  std::vector<double> times;
  std::vector<std::vector<double>> snapshots;
  std::map<std::string, std::vector<double>> conserved;  // per snapshot

  std::map<std::string, double> params;
  std::map<std::string, std::string> meta;

  double x_at(size_t i) const { return x0 + dx * static_cast<double>(i); }
};

/// Ensemble statistics of a stochastic run: mean-square displacement and
/// its standard error on a checkpoint grid, plus velocity moments.
struct EnsembleStats {
  size_t ensemble = 0;
  std::uint64_t seed = 0;
  std::vector<double> t;
  std::vector<double> msd;
  std::vector<double> msd_stderr;
  std::vector<double> mean_x;
  std::vector<double> mean_v2;

  std::map<std::string, double> params;
  std::map<std::string, std::string> meta;
};

}  // namespace defvar::num
