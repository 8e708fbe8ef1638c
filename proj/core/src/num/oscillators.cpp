#include "defvar/num/oscillators.hpp"

#include <cmath>

namespace defvar::num {

namespace {

void append_column(Trajectory& traj, const std::string& name,
                   std::vector<double> values) {
  traj.columns.push_back(name);
  traj.data.push_back(std::move(values));
}

}  // namespace

Trajectory simulate_dissipative_oscillator(double m, double gamma, double k,
                                           double x0, double v0, double t1,
                                           double dt, OdeMethod method) {
  auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -(k * y[0] + gamma * y[1]) / m;
  };
  double y0[2] = {x0, v0};
  Trajectory traj = integrate_ode(rhs, y0, 0.0, t1, dt, method, {"x", "v"});
  const auto& x = traj.col("x");
  const auto& v = traj.col("v");
  std::vector<double> energy(traj.rows());
  for (size_t i = 0; i < energy.size(); ++i)
    energy[i] = 0.5 * m * v[i] * v[i] + 0.5 * k * x[i] * x[i];
  append_column(traj, "E", std::move(energy));
  traj.params = {{"m", m}, {"gamma", gamma}, {"k", k},
                 {"x0", x0}, {"v0", v0}, {"dt", dt}};
  traj.meta["system"] = "dissipative-oscillator";
  return traj;
}

double damped_oscillator_closed_form(double m, double gamma, double k,
                                     double x0, double v0, double t) {
  double beta = gamma / (2.0 * m);
  double w2 = k / m - beta * beta;
  if (w2 <= 0.0) throw std::invalid_argument("closed form expects underdamping");
  double w = std::sqrt(w2);
  double c1 = x0;
  double c2 = (v0 + beta * x0) / w;
  return std::exp(-beta * t) * (c1 * std::cos(w * t) + c2 * std::sin(w * t));
}

double abraham_lorentz_runaway_rate(double m, double k, double eps) {
  // Newton iteration on f(r) = eps r^3 - m r^2 - k, root near m/eps.
  double r = m / eps;
  for (int i = 0; i < 60; ++i) {
    double f = eps * r * r * r - m * r * r - k;
    double df = 3.0 * eps * r * r - 2.0 * m * r;
    double step = f / df;
    r -= step;
    if (std::abs(step) < 1e-14 * std::abs(r)) break;
  }
  return r;
}

AbrahamLorentzRun simulate_abraham_lorentz(double m, double k, double eps,
                                           double x0, double v0, double a0,
                                           double t1, double dt,
                                           double runaway_factor,
                                           bool throw_on_runaway) {
  AbrahamLorentzRun run;

  if (eps == 0.0) {
    // no radiation term: both paths are the conservative oscillator
    run.direct = simulate_dissipative_oscillator(m, 0.0, k, x0, v0, t1, dt);
    run.direct.meta["system"] = "abraham-lorentz";
    run.direct.meta["integration"] = "direct-third-order";
    run.reduced = run.direct;
    run.reduced.meta["integration"] = "order-reduced";
    return run;
  }

  // Direct third-order integration: x''' = (m x'' + k x) / eps.
  {
    auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = y[1];
      dy[1] = y[2];
      dy[2] = (m * y[2] + k * y[0]) / eps;
    };
    Trajectory traj;
    traj.t0 = 0.0;
    traj.dt = dt;
    traj.columns = {"t", "x", "v", "acc", "E"};
    traj.data.assign(5, {});
    std::vector<double> y = {x0, v0, a0};
    std::vector<double> scratch;
    double e0 = 0.5 * m * v0 * v0 + 0.5 * k * x0 * x0;
    double elimit = std::max(e0, 1e-12) * runaway_factor;
    size_t steps = static_cast<size_t>(std::llround(t1 / dt));
    auto record = [&](double t) {
      double e = 0.5 * m * y[1] * y[1] + 0.5 * k * y[0] * y[0];
      traj.data[0].push_back(t);
      traj.data[1].push_back(y[0]);
      traj.data[2].push_back(y[1]);
      traj.data[3].push_back(y[2]);
      traj.data[4].push_back(e);
    };
    record(0.0);
    for (size_t s = 0; s < steps; ++s) {
      double t = static_cast<double>(s) * dt;
      Rhs r = rhs;
      rk4_step(r, t, dt, y, scratch);
      if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2])) {
        run.runaway_detected = true;
        break;
      }
      record(t + dt);
      double e = 0.5 * m * y[1] * y[1] + 0.5 * k * y[0] * y[0];
      if (e > elimit) {
        run.runaway_detected = true;
        break;
      }
    }
    traj.params = {{"m", m}, {"k", k}, {"eps", eps}, {"dt", dt},
                   {"x0", x0}, {"v0", v0}, {"a0", a0}};
    traj.meta["system"] = "abraham-lorentz";
    traj.meta["integration"] = "direct-third-order";
    run.direct = std::move(traj);
    if (run.runaway_detected && throw_on_runaway)
      throw RunawayDetected("direct Abraham-Lorentz integration ran away");
  }

  // Landau-Lifshitz order reduction: x''' ~ d/dt[-(k/m) x] = -(k/m) x'.
  {
    double gamma_eff = eps * k / m;
    run.reduced =
        simulate_dissipative_oscillator(m, gamma_eff, k, x0, v0, t1, dt);
    run.reduced.meta["system"] = "abraham-lorentz";
    run.reduced.meta["integration"] = "order-reduced";
    run.reduced.params["eps"] = eps;
  }
  return run;
}

Trajectory simulate_caldirola_kanai(double m, double omega0, double lambda,
                                    double q0, double p0, double t1, double dt,
                                    OdeMethod method) {
  auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    dy[0] = std::exp(-lambda * t) * y[1] / m;
    dy[1] = -m * std::exp(lambda * t) * omega0 * omega0 * y[0];
  };
  double y0[2] = {q0, p0};
  Trajectory traj = integrate_ode(rhs, y0, 0.0, t1, dt, method, {"q", "p"});
  const auto& t = traj.col("t");
  const auto& q = traj.col("q");
  const auto& p = traj.col("p");
  std::vector<double> v(traj.rows()), emech(traj.rows()), ham(traj.rows());
  for (size_t i = 0; i < traj.rows(); ++i) {
    v[i] = std::exp(-lambda * t[i]) * p[i] / m;
    emech[i] = 0.5 * m * v[i] * v[i] + 0.5 * m * omega0 * omega0 * q[i] * q[i];
    ham[i] = std::exp(-lambda * t[i]) * p[i] * p[i] / (2.0 * m) +
             0.5 * m * std::exp(lambda * t[i]) * omega0 * omega0 * q[i] * q[i];
  }
  append_column(traj, "v", std::move(v));
  append_column(traj, "E_mech", std::move(emech));
  append_column(traj, "H", std::move(ham));
  traj.params = {{"m", m},   {"omega0", omega0}, {"lambda", lambda},
                 {"q0", q0}, {"p0", p0},         {"dt", dt}};
  traj.meta["system"] = "caldirola-kanai";
  return traj;
}

double caldirola_kanai_closed_form(double omega0, double lambda, double q0,
                                   double v0, double t) {
  double beta = lambda / 2.0;
  double w2 = omega0 * omega0 - beta * beta;
  if (w2 <= 0.0) throw std::invalid_argument("closed form expects underdamping");
  double w = std::sqrt(w2);
  double c2 = (v0 + beta * q0) / w;
  return std::exp(-beta * t) * (q0 * std::cos(w * t) + c2 * std::sin(w * t));
}

}  // namespace defvar::num
