#include <doctest.h>

#include <cmath>
#include <numbers>

#include "defvar/num/llg.hpp"
#include "defvar/num/oscillators.hpp"

using namespace defvar::num;

TEST_CASE("damped oscillator matches the closed form to 1e-6") {
  double m = 1.0, gamma = 0.2, k = 1.0;
  auto traj = simulate_dissipative_oscillator(m, gamma, k, 1.0, 0.0, 20.0, 1e-3);
  const auto& t = traj.col("t");
  const auto& x = traj.col("x");
  double worst = 0.0;
  for (size_t i = 0; i < traj.rows(); ++i)
    worst = std::max(
        worst, std::abs(x[i] - damped_oscillator_closed_form(m, gamma, k, 1.0,
                                                             0.0, t[i])));
  CHECK(worst < 1e-6);
}

TEST_CASE("oscillator energy behaviour") {
  auto cons = simulate_dissipative_oscillator(1.0, 0.0, 1.0, 1.0, 0.0, 50.0, 1e-3);
  const auto& e0 = cons.col("E");
  for (double e : e0) CHECK(std::abs(e - e0.front()) / e0.front() < 1e-6);

  auto damp = simulate_dissipative_oscillator(1.0, 0.5, 1.0, 1.0, 0.0, 20.0, 1e-3);
  const auto& e1 = damp.col("E");
  for (size_t i = 1; i < e1.size(); ++i)
    CHECK(e1[i] <= e1[i - 1] + 1e-12 * e1.front());
}

TEST_CASE("abraham-lorentz: direct integration runs away at the predicted rate") {
  double m = 1.0, k = 1.0, eps = 0.05;
  auto run = simulate_abraham_lorentz(m, k, eps, 1.0, 0.0, /*a0=*/-0.9, 12.0,
                                      1e-4, 1e8);
  CHECK(run.runaway_detected);

  // fit the exponential growth rate of |x| over the last decade and compare
  // with the positive characteristic root (~ m/eps)
  const auto& t = run.direct.col("t");
  const auto& x = run.direct.col("x");
  size_t n = t.size();
  REQUIRE(n > 100);
  size_t i1 = n - 1;
  size_t i0 = n - 1 - static_cast<size_t>(2.0 / (1e-4 * m / eps) * 0.5);
  double rate_fit =
      std::log(std::abs(x[i1]) / std::abs(x[i0])) / (t[i1] - t[i0]);
  double rate_oracle = abraham_lorentz_runaway_rate(m, k, eps);
  CHECK(rate_oracle > 0.9 * m / eps);
  CHECK(std::abs(rate_fit - rate_oracle) / rate_oracle < 0.05);

  CHECK_THROWS_AS(simulate_abraham_lorentz(m, k, eps, 1.0, 0.0, -0.9, 12.0,
                                           1e-4, 1e8, /*throw=*/true),
                  RunawayDetected);
}

TEST_CASE("abraham-lorentz: order reduction damps at eps w^2 / m") {
  double m = 1.0, k = 1.0, eps = 0.02;
  double w = std::sqrt(k / m);
  double period = 2.0 * std::numbers::pi / w;
  auto run = simulate_abraham_lorentz(m, k, eps, 1.0, 0.0, 0.0, 10.0 * period,
                                      1e-3);
  const auto& t = run.reduced.col("t");
  const auto& x = run.reduced.col("x");
  // peak amplitudes decay like exp(-gamma_eff t / 2m), gamma_eff = eps w^2
  double gamma_eff = eps * w * w;
  std::vector<std::pair<double, double>> peaks;
  for (size_t i = 1; i + 1 < t.size(); ++i)
    if (x[i] > x[i - 1] && x[i] > x[i + 1]) peaks.push_back({t[i], x[i]});
  REQUIRE(peaks.size() >= 8);
  double rate = std::log(peaks.front().second / peaks.back().second) /
                (peaks.back().first - peaks.front().first);
  CHECK(std::abs(rate - gamma_eff / (2.0 * m)) / (gamma_eff / (2.0 * m)) < 0.05);

  // eps = 0 reduces to the conservative oscillator
  auto cons = simulate_abraham_lorentz(m, k, 0.0, 1.0, 0.0, 0.0, 20.0, 1e-3);
  const auto& e = cons.reduced.col("E");
  for (double v : e) CHECK(std::abs(v - e.front()) / e.front() < 1e-6);
  CHECK_FALSE(cons.runaway_detected);
}

TEST_CASE("caldirola-kanai trajectory matches the damped closed form") {
  double m = 1.0, w0 = 1.0, lambda = 0.2;
  auto traj = simulate_caldirola_kanai(m, w0, lambda, 1.0, 0.0, 20.0, 1e-3);
  const auto& t = traj.col("t");
  const auto& q = traj.col("q");
  double worst = 0.0;
  for (size_t i = 0; i < traj.rows(); ++i)
    worst = std::max(worst, std::abs(q[i] - caldirola_kanai_closed_form(
                                                w0, lambda, 1.0, 0.0, t[i])));
  CHECK(worst < 1e-6);

  // mechanical energy decays for lambda > 0
  const auto& e = traj.col("E_mech");
  for (size_t i = 1; i < e.size(); ++i)
    CHECK(e[i] <= e[i - 1] + 1e-10 * e.front());
}

TEST_CASE("caldirola-kanai at lambda = 0 conserves H to 1e-8") {
  auto traj = simulate_caldirola_kanai(1.0, 1.0, 0.0, 1.0, 0.0, 50.0, 1e-3);
  const auto& h = traj.col("H");
  for (double v : h) CHECK(std::abs(v - h.front()) / h.front() < 1e-8);
}

TEST_CASE("llg pure precession at |gamma| H") {
  LlgParams p;
  p.g = -1.0;      // gamma = -1/g = 1
  p.kappa_c = 0.0; // no damping
  p.H = {0.0, 0.0, 2.0};
  p.m0 = {0.6, 0.0, 0.8};
  double dt = 1e-4;
  auto traj = simulate_llg(p, 20.0, dt);

  // m_z constant to 1e-8
  const auto& mz = traj.col("m3");
  for (double v : mz) CHECK(std::abs(v - mz.front()) < 1e-8);
  // |m| = 1 to 1e-8
  for (double v : traj.col("norm")) CHECK(std::abs(v - 1.0) < 1e-8);

  // precession frequency from the unwrapped phase of (m1, m2)
  const auto& m1 = traj.col("m1");
  const auto& m2 = traj.col("m2");
  const auto& t = traj.col("t");
  double phase = 0.0;
  double prev = std::atan2(m2.front(), m1.front());
  for (size_t i = 1; i < t.size(); ++i) {
    double cur = std::atan2(m2[i], m1[i]);
    double d = cur - prev;
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
    phase += d;
    prev = cur;
  }
  double omega = std::abs(phase) / (t.back() - t.front());
  double gamma = -1.0 / p.g;
  CHECK(std::abs(omega - std::abs(gamma) * p.H[2]) / (std::abs(gamma) * p.H[2]) <
        1e-3);

  // implicit-form residual along the trajectory
  CHECK(llg_implicit_residual(traj, p) < 1e-6);
}

TEST_CASE("llg damping aligns m with the field monotonically") {
  LlgParams p;
  p.g = -1.0;
  p.kappa_c = 0.2;
  p.H = {0.0, 0.0, 1.0};
  p.m0 = {0.9, 0.0, std::sqrt(1.0 - 0.81)};
  auto traj = simulate_llg(p, 40.0, 1e-3);
  const auto& mz = traj.col("m3");
  for (size_t i = 1; i < mz.size(); ++i) CHECK(mz[i] >= mz[i - 1] - 1e-12);
  CHECK(mz.back() > 0.999);
  const auto& e = traj.col("energy");
  for (size_t i = 1; i < e.size(); ++i) CHECK(e[i] <= e[i - 1] + 1e-12);
  CHECK(llg_implicit_residual(traj, p) < 1e-6);
}
