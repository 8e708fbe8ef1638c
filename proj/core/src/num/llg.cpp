#include "defvar/num/llg.hpp"

#include <cmath>

#include "defvar/num/ode.hpp"

namespace defvar::num {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

}  // namespace

Trajectory simulate_llg(const LlgParams& p, double t1, double dt) {
  const double gamma = -1.0 / p.g;
  const double alpha = p.kappa_c * gamma;
  const double pref = 1.0 / (1.0 + alpha * alpha);

  auto deriv = [&](const Vec3& m) {
    Vec3 mxh = cross(m, p.H);
    Vec3 mxmxh = cross(m, mxh);
    Vec3 d;
    for (int i = 0; i < 3; ++i)
      d[i] = -gamma * pref * mxh[i] - alpha * gamma * pref * mxmxh[i];
    return d;
  };

  const size_t steps = static_cast<size_t>(std::llround(t1 / dt));
  Trajectory traj;
  traj.t0 = 0.0;
  traj.dt = dt;
  traj.columns = {"t", "m1", "m2", "m3", "norm", "energy"};
  traj.data.assign(6, {});
  traj.params = {{"g", p.g}, {"kappa_c", p.kappa_c}, {"dt", dt},
                 {"H1", p.H[0]}, {"H2", p.H[1]}, {"H3", p.H[2]}};
  traj.meta["system"] = "llg";
  traj.meta["integrator"] = "rk4+projection";

  Vec3 m = p.m0;
  double n0 = norm(m);
  for (int i = 0; i < 3; ++i) m[i] /= n0;

  auto record = [&](double t) {
    traj.data[0].push_back(t);
    traj.data[1].push_back(m[0]);
    traj.data[2].push_back(m[1]);
    traj.data[3].push_back(m[2]);
    traj.data[4].push_back(norm(m));
    traj.data[5].push_back(-dot(m, p.H));
  };
  record(0.0);

  for (size_t s = 0; s < steps; ++s) {
    Vec3 k1 = deriv(m);
    Vec3 tmp;
    for (int i = 0; i < 3; ++i) tmp[i] = m[i] + 0.5 * dt * k1[i];
    Vec3 k2 = deriv(tmp);
    for (int i = 0; i < 3; ++i) tmp[i] = m[i] + 0.5 * dt * k2[i];
    Vec3 k3 = deriv(tmp);
    for (int i = 0; i < 3; ++i) tmp[i] = m[i] + dt * k3[i];
    Vec3 k4 = deriv(tmp);
    for (int i = 0; i < 3; ++i)
      m[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    double nn = norm(m);
    if (!std::isfinite(nn) || std::abs(nn - 1.0) > 1e-8)
      throw NormDrift("|m| drifted by " + std::to_string(std::abs(nn - 1.0)) +
                      " in one step");
    for (int i = 0; i < 3; ++i) m[i] /= nn;  // projection
    record(static_cast<double>(s + 1) * dt);
  }
  return traj;
}

double llg_implicit_residual(const Trajectory& traj, const LlgParams& p) {
  const auto& t = traj.col("t");
  const auto& m1 = traj.col("m1");
  const auto& m2 = traj.col("m2");
  const auto& m3 = traj.col("m3");
  const size_t n = t.size();
  if (n < 3) return 0.0;
  double h = t[1] - t[0];
  double worst = 0.0;
  for (size_t i = 1; i + 1 < n; ++i) {
    Vec3 m = {m1[i], m2[i], m3[i]};
    Vec3 md = {(m1[i + 1] - m1[i - 1]) / (2.0 * h),
               (m2[i + 1] - m2[i - 1]) / (2.0 * h),
               (m3[i + 1] - m3[i - 1]) / (2.0 * h)};
    Vec3 mxh = cross(m, p.H);
    Vec3 mxmd = cross(m, md);
    for (int c = 0; c < 3; ++c) {
      double r = md[c] - mxh[c] / p.g + p.kappa_c / p.g * mxmd[c];
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

}  // namespace defvar::num
