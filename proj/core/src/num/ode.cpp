#include "defvar/num/ode.hpp"

#include <cmath>

namespace defvar::num {

const std::vector<double>& Trajectory::col(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return data[i];
  throw SymbolMismatch("trajectory has no column '" + name + "'");
}

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::Periodic: return "periodic";
    case Boundary::Reflecting: return "reflecting";
    case Boundary::Dirichlet: return "dirichlet";
  }
  return "?";
}

namespace {

bool finite(std::span<const double> y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

void rk4_step(const Rhs& rhs, double t, double dt, std::vector<double>& y,
              std::vector<double>& scratch) {
  const size_t n = y.size();
  scratch.resize(5 * n);
  std::span<double> k1(scratch.data(), n);
  std::span<double> k2(scratch.data() + n, n);
  std::span<double> k3(scratch.data() + 2 * n, n);
  std::span<double> k4(scratch.data() + 3 * n, n);
  std::span<double> tmp(scratch.data() + 4 * n, n);

  rhs(t, y, k1);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  rhs(t + 0.5 * dt, tmp, k2);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  rhs(t + 0.5 * dt, tmp, k3);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  rhs(t + dt, tmp, k4);
  for (size_t i = 0; i < n; ++i)
    y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

Trajectory integrate_ode(const Rhs& rhs, std::span<const double> y0, double t0,
                         double t1, double dt, OdeMethod method,
                         const std::vector<std::string>& state_names) {
  if (dt <= 0.0) throw std::invalid_argument("integrate_ode requires dt > 0");
  const size_t n = y0.size();
  const size_t steps = static_cast<size_t>(std::llround((t1 - t0) / dt));

  Trajectory traj;
  traj.t0 = t0;
  traj.dt = dt;
  traj.columns.push_back("t");
  for (size_t i = 0; i < n; ++i)
    traj.columns.push_back(i < state_names.size() ? state_names[i]
                                                  : "y" + std::to_string(i));
  traj.data.assign(n + 1, {});
  for (auto& c : traj.data) c.reserve(steps + 1);

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> scratch;
  std::vector<double> dy(n);

  auto record = [&](double t) {
    traj.data[0].push_back(t);
    for (size_t i = 0; i < n; ++i) traj.data[i + 1].push_back(y[i]);
  };
  record(t0);

  for (size_t k = 0; k < steps; ++k) {
    double t = t0 + static_cast<double>(k) * dt;
    if (method == OdeMethod::Rk4) {
      rk4_step(rhs, t, dt, y, scratch);
    } else {
      // symplectic Euler on [q..., p...] with separable coupling
      const size_t h = n / 2;
      rhs(t, y, dy);
      for (size_t i = h; i < n; ++i) y[i] += dt * dy[i];
      rhs(t + dt, y, dy);
      for (size_t i = 0; i < h; ++i) y[i] += dt * dy[i];
    }
    if (!finite(y))
      throw NonFiniteState("state became non-finite at t = " +
                           std::to_string(t + dt));
    record(t + dt);
  }
  traj.meta["integrator"] =
      method == OdeMethod::Rk4 ? "rk4" : "semi-implicit-euler";
  return traj;
}

}  // namespace defvar::num
