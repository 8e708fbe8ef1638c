#include "defvar/num/sde.hpp"

#include <cmath>
#include <thread>

#include "defvar/num/ode.hpp"
#include "defvar/num/rng.hpp"

namespace defvar::num {

namespace {

double power_law(double t, double tau, double alpha) {
  return std::pow(1.0 + t / tau, alpha - 1.0);
}

std::vector<size_t> checkpoint_indices(size_t steps, size_t max_checkpoints) {
  size_t stride = steps / std::max<size_t>(1, max_checkpoints);
  if (stride == 0) stride = 1;
  std::vector<size_t> idx;
  for (size_t s = 0; s <= steps; s += stride) idx.push_back(s);
  if (idx.back() != steps) idx.push_back(steps);
  return idx;
}

}  // namespace

EnsembleStats simulate_langevin_sbm(const SbmParams& p, std::size_t ensemble,
                                    std::uint64_t seed, double t1, double dt,
                                    std::size_t max_checkpoints,
                                    unsigned threads) {
  const size_t steps = static_cast<size_t>(std::llround(t1 / dt));
  const auto cps = checkpoint_indices(steps, max_checkpoints);
  const size_t ncp = cps.size();
  const double sq_dt = std::sqrt(dt);

  // Per-trajectory checkpoint values; reduced sequentially by index so the
  // result does not depend on the thread partition.
  std::vector<double> xs(ensemble * ncp);
  std::vector<double> vs(ensemble * ncp);

  auto run_range = [&](size_t lo, size_t hi) {
    for (size_t traj = lo; traj < hi; ++traj) {
      CounterRng rng(seed, traj);
      double x = p.x0;
      double v = p.v0;
      size_t cp = 0;
      for (size_t s = 0; s <= steps; ++s) {
        if (cp < ncp && cps[cp] == s) {
          xs[traj * ncp + cp] = x;
          vs[traj * ncp + cp] = v;
          ++cp;
        }
        if (s == steps) break;
        double t = static_cast<double>(s) * dt;
        double g = p.gamma0 * power_law(t, p.tau, p.alpha);
        double D = p.D0 * power_law(t, p.tau, p.alpha);
        double noise = std::sqrt(2.0 * D) * g / p.m;
        double xn = x + dt * v;
        double vn = v - dt * (g / p.m) * v + noise * sq_dt * rng.gaussian();
        x = xn;
        v = vn;
        if (!std::isfinite(x) || !std::isfinite(v))
          throw NonFiniteState("SBM trajectory diverged");
      }
    }
  };

  unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
  if (nthreads <= 1 || ensemble < 256) {
    run_range(0, ensemble);
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (ensemble + nthreads - 1) / nthreads;
    for (unsigned w = 0; w < nthreads; ++w) {
      size_t lo = w * chunk;
      size_t hi = std::min(ensemble, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  EnsembleStats st;
  st.ensemble = ensemble;
  st.seed = seed;
  st.params = {{"m", p.m},   {"gamma0", p.gamma0}, {"D0", p.D0},
               {"tau", p.tau}, {"alpha", p.alpha}, {"dt", dt}};
  st.meta["system"] = "langevin";
  st.meta["scheme"] = "euler-maruyama";
  st.t.resize(ncp);
  st.msd.resize(ncp);
  st.msd_stderr.resize(ncp);
  st.mean_x.resize(ncp);
  st.mean_v2.resize(ncp);
  const double n = static_cast<double>(ensemble);
  for (size_t c = 0; c < ncp; ++c) {
    st.t[c] = static_cast<double>(cps[c]) * dt;
    double sx = 0.0, sx2 = 0.0, sx4 = 0.0, sv2 = 0.0;
    for (size_t traj = 0; traj < ensemble; ++traj) {
      double dx = xs[traj * ncp + c] - p.x0;
      double v = vs[traj * ncp + c];
      sx += dx;
      sx2 += dx * dx;
      sx4 += dx * dx * dx * dx;
      sv2 += v * v;
    }
    double mean_x = sx / n;
    double mean_x2 = sx2 / n;
    double mean_x4 = sx4 / n;
    st.mean_x[c] = mean_x;
    st.msd[c] = mean_x2;
    st.mean_v2[c] = sv2 / n;
    double var_x2 = std::max(0.0, mean_x4 - mean_x2 * mean_x2);
    st.msd_stderr[c] = std::sqrt(var_x2 / n);
  }
  return st;
}

MomentOracle sbm_moment_oracle(const SbmParams& p, double t1, double dt,
                               std::size_t max_checkpoints) {
  const size_t steps = static_cast<size_t>(std::llround(t1 / dt));
  const auto cps = checkpoint_indices(steps, max_checkpoints);

  // Moments of the linear SDE dv = -(g/m) v dt + (sqrt(2D) g / m) dW:
  //   d<x>/dt  = <v>
  //   d<v>/dt  = -(g/m) <v>
  //   d<x2>/dt = 2 <xv>
  //   d<xv>/dt = <v2> - (g/m) <xv>
  //   d<v2>/dt = -2 (g/m) <v2> + 2 D g^2 / m^2
  auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    double g = p.gamma0 * power_law(t, p.tau, p.alpha);
    double D = p.D0 * power_law(t, p.tau, p.alpha);
    double r = g / p.m;
    dy[0] = y[1];
    dy[1] = -r * y[1];
    dy[2] = 2.0 * y[3];
    dy[3] = y[4] - r * y[3];
    dy[4] = -2.0 * r * y[4] + 2.0 * D * g * g / (p.m * p.m);
  };

  std::vector<double> y = {p.x0, p.v0, p.x0 * p.x0, p.x0 * p.v0, p.v0 * p.v0};
  std::vector<double> scratch;
  MomentOracle out;
  size_t cp = 0;
  for (size_t s = 0; s <= steps; ++s) {
    if (cp < cps.size() && cps[cp] == s) {
      out.t.push_back(static_cast<double>(s) * dt);
      // <(x - x0)^2> to match the ensemble's displacement statistic
      out.msd.push_back(y[2] - 2.0 * p.x0 * y[0] + p.x0 * p.x0);
      out.mean_v2.push_back(y[4]);
      ++cp;
    }
    if (s == steps) break;
    Rhs r = rhs;
    rk4_step(r, static_cast<double>(s) * dt, dt, y, scratch);
  }
  return out;
}

std::vector<double> sbm_deterministic_x(const SbmParams& p, double t1, double dt,
                                        std::size_t max_checkpoints) {
  const size_t steps = static_cast<size_t>(std::llround(t1 / dt));
  const auto cps = checkpoint_indices(steps, max_checkpoints);
  std::vector<double> out;
  double x = p.x0, v = p.v0;
  size_t cp = 0;
  for (size_t s = 0; s <= steps; ++s) {
    if (cp < cps.size() && cps[cp] == s) {
      out.push_back(x);
      ++cp;
    }
    if (s == steps) break;
    double t = static_cast<double>(s) * dt;
    double g = p.gamma0 * power_law(t, p.tau, p.alpha);
    double xn = x + dt * v;
    double vn = v - dt * (g / p.m) * v;
    x = xn;
    v = vn;
  }
  return out;
}

}  // namespace defvar::num
