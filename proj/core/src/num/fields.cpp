#include "defvar/num/fields.hpp"

#include <cmath>
#include <numbers>

#include "defvar/num/ode.hpp"

namespace defvar::num {

namespace {

size_t snapshot_stride(size_t steps, size_t snapshots) {
  if (snapshots <= 1) return steps + 1;
  size_t stride = steps / (snapshots - 1);
  return stride == 0 ? 1 : stride;
}

double integral(std::span<const double> u, double cell) {
  double s = 0.0;
  for (double v : u) s += v;
  return s * cell;
}

}  // namespace

FieldGrid simulate_rcd(const RcdParams& p, const GridSpec& grid,
                       std::span<const double> u0, double t1, double dt,
                       size_t snapshots) {
  const size_t ndim = grid.points.size();
  if (ndim < 1 || ndim > 3)
    throw std::invalid_argument("rcd supports 1, 2 or 3 dimensions");
  size_t total = 1;
  for (size_t n : grid.points) total *= n;
  if (u0.size() != total)
    throw std::invalid_argument("initial data does not match the grid");

  double rate = 0.0;
  for (size_t d = 0; d < ndim; ++d) {
    rate += 2.0 * p.K[d] / (grid.dx[d] * grid.dx[d]);
    rate += std::abs(p.gamma[d]) / grid.dx[d];
  }
  double stability_bound = rate > 0.0 ? 1.0 / rate : 0.0;
  if (rate > 0.0 && dt > stability_bound)
    throw CFLViolation("dt exceeds the explicit stability bound " +
                       std::to_string(stability_bound));

  // strides for row-major flattening
  size_t stride[3] = {1, 1, 1};
  for (size_t d = ndim; d-- > 1;) stride[d - 1] = stride[d] * grid.points[d];

  auto neighbor = [&](size_t idx, size_t d, int dir, bool& on_boundary) -> size_t {
    size_t n = grid.points[d];
    size_t coord = (idx / stride[d]) % n;
    on_boundary = false;
    if (dir > 0) {
      if (coord + 1 < n) return idx + stride[d];
      on_boundary = true;
      return grid.boundary == Boundary::Periodic ? idx - coord * stride[d] : idx;
    }
    if (coord > 0) return idx - stride[d];
    on_boundary = true;
    return grid.boundary == Boundary::Periodic ? idx + (n - 1) * stride[d] : idx;
  };

  std::vector<double> xbuf(ndim);
  auto rhs = [&](double t, std::span<const double> u, std::span<double> du) {
    for (size_t i = 0; i < total; ++i) {
      double acc = -p.beta * u[i];
      for (size_t d = 0; d < ndim; ++d) {
        bool bplus = false, bminus = false;
        size_t ip = neighbor(i, d, +1, bplus);
        size_t im = neighbor(i, d, -1, bminus);
        double up = u[ip];
        double um = u[im];
        if (grid.boundary == Boundary::Dirichlet) {
          if (bplus) up = 0.0;
          if (bminus) um = 0.0;
        }
        // reflecting: mirror value (zero-gradient), i.e. up/um stay u[i]
        double lap = (up - 2.0 * u[i] + um) / (grid.dx[d] * grid.dx[d]);
        acc += p.K[d] * lap;
        double g = p.gamma[d];
        double grad_up = (up - u[i]) / grid.dx[d];
        double grad_dn = (u[i] - um) / grid.dx[d];
        acc -= g * (g >= 0.0 ? grad_dn : grad_up);  // upwind
      }
      if (p.f) {
        for (size_t d = 0; d < ndim; ++d) {
          size_t coord = (i / stride[d]) % grid.points[d];
          xbuf[d] = grid.x0[d] + grid.dx[d] * static_cast<double>(coord);
        }
        acc += p.f(t, xbuf);
      }
      du[i] = acc;
    }
  };

  const size_t steps = static_cast<size_t>(std::llround(t1 / dt));
  const size_t snap_stride = snapshot_stride(steps, snapshots);

  FieldGrid out;
  out.x0 = grid.x0[0];
  out.dx = grid.dx[0];
  out.points = grid.points[0];
  out.boundary = grid.boundary;
  out.meta["system"] = "rcd";
  out.meta["dimensions"] = std::to_string(ndim);
  out.params = {{"beta", p.beta}, {"dt", dt},
                {"stability_bound", stability_bound}};
  for (size_t d = 0; d < ndim; ++d) {
    out.params["K" + std::to_string(d)] = p.K[d];
    out.params["gamma" + std::to_string(d)] = p.gamma[d];
  }

  double cell = 1.0;
  for (size_t d = 0; d < ndim; ++d) cell *= grid.dx[d];

  std::vector<double> u(u0.begin(), u0.end());
  std::vector<double> scratch;
  auto snap = [&](double t) {
    out.times.push_back(t);
    out.snapshots.push_back(u);
    out.conserved["mass"].push_back(integral(u, cell));
  };
  snap(0.0);
  for (size_t s = 0; s < steps; ++s) {
    Rhs r = rhs;
    rk4_step(r, static_cast<double>(s) * dt, dt, u, scratch);
    for (double v : u)
      if (!std::isfinite(v)) throw NonFiniteState("rcd field diverged");
    if ((s + 1) % snap_stride == 0 || s + 1 == steps)
      snap(static_cast<double>(s + 1) * dt);
  }
  return out;
}

double heat_kernel_solution(double K, double t, double x, double sigma0,
                            double amplitude) {
  double s2 = sigma0 * sigma0 + 2.0 * K * t;
  return amplitude * sigma0 / std::sqrt(s2) *
         std::exp(-x * x / (2.0 * s2));
}

FieldGrid simulate_fokker_planck(const FpParams& p, double x0, double dx,
                                 size_t points, Boundary boundary,
                                 std::span<const double> p0, double t1,
                                 double dt, size_t snapshots) {
  if (boundary == Boundary::Dirichlet)
    throw std::invalid_argument(
        "fokker-planck expects periodic or reflecting boundaries");
  if (p0.size() != points)
    throw std::invalid_argument("initial density does not match the grid");

  double dmax = p.D;
  if (p.variant != FpVariant::Linear) {
    // power-law diffusivity estimated from the initial data
    double pmax = 0.0;
    for (double v : p0) pmax = std::max(pmax, v);
    double expo = (p.variant == FpVariant::Nonlinear1 ? p.mu : p.nu) - 1.0;
    dmax = p.D * std::pow(std::max(pmax, 1e-12), expo);
    dmax = std::max(dmax, p.D);
  }
  double stability_bound = dx * dx / (2.0 * dmax);
  if (dt > stability_bound)
    throw CFLViolation("dt exceeds dx^2/(2 D_max) for the explicit scheme");

  const bool qform = p.variant == FpVariant::Nonlinear2;
  long long clamps = 0;

  // State is P for Linear/Nonlinear1 and Q = P^mu for Nonlinear2.
  auto density = [&](double state) {
    double v = std::max(state, 0.0);
    return qform ? std::pow(v, 1.0 / p.mu) : v;
  };

  auto rhs = [&](double, std::span<const double> u, std::span<double> du) {
    const size_t n = points;
    auto left = [&](size_t i) { return i == 0 ? n - 1 : i - 1; };
    auto right = [&](size_t i) { return i + 1 == n ? 0 : i + 1; };
    // Flux at the i+1/2 interface; index n-1 wraps for periodic grids.
    auto flux = [&](size_t i) -> double {
      size_t j = right(i);
      bool edge = (i + 1 == n);
      if (edge && boundary == Boundary::Reflecting) return 0.0;
      double xi = x0 + dx * (static_cast<double>(i) + 0.5);
      double ui = u[i], uj = u[j];
      double pi = density(ui), pj = density(uj);
      double adv = p.drift ? p.drift(xi) * 0.5 * (ui + uj) : 0.0;
      double dcoef = p.D;
      if (p.variant == FpVariant::Nonlinear1)
        dcoef *= std::pow(std::max(0.5 * (pi + pj), 0.0), p.mu - 1.0);
      if (p.variant == FpVariant::Nonlinear2)
        dcoef *= std::pow(std::max(0.5 * (pi + pj), 0.0), p.nu - 1.0);
      double diff = dcoef * (pj - pi) / dx;
      return adv - diff;
    };
    for (size_t i = 0; i < points; ++i) {
      double f_right = flux(i);
      double f_left = (i == 0) ? flux(n - 1) : flux(i - 1);
      if (i == 0 && boundary == Boundary::Reflecting) f_left = 0.0;
      du[i] = -(f_right - f_left) / dx;
      if (p.variant == FpVariant::Nonlinear1 && p.mu != 1.0) {
        double pi = std::max(u[i], 0.0);
        double grad = (std::max(u[right(i)], 0.0) - std::max(u[left(i)], 0.0)) /
                      (2.0 * dx);
        du[i] -= 0.5 * (p.mu - 1.0) * p.D * grad * grad *
                 std::pow(std::max(pi, 1e-300), p.mu - 2.0);
      }
    }
  };

  const size_t steps = static_cast<size_t>(std::llround(t1 / dt));
  const size_t snap_stride = snapshot_stride(steps, snapshots);

  FieldGrid out;
  out.x0 = x0;
  out.dx = dx;
  out.points = points;
  out.boundary = boundary;
  out.meta["system"] = "fokker-planck";
  out.meta["variant"] = p.variant == FpVariant::Linear
                            ? "linear"
                            : (p.variant == FpVariant::Nonlinear1 ? "nl1" : "nl2");
  out.params = {{"D", p.D}, {"mu", p.mu}, {"nu", p.nu}, {"dt", dt},
                {"stability_bound", stability_bound}};

  std::vector<double> u(p0.begin(), p0.end());
  if (qform)
    for (double& v : u) v = std::pow(std::max(v, 0.0), p.mu);

  std::vector<double> scratch;
  auto snap = [&](double t) {
    out.times.push_back(t);
    std::vector<double> dens(points);
    for (size_t i = 0; i < points; ++i) dens[i] = density(u[i]);
    out.conserved["norm"].push_back(integral(u, dx));  // int P (or int P^mu)
    out.conserved["mass_p"].push_back(integral(dens, dx));
    out.snapshots.push_back(std::move(dens));
  };
  snap(0.0);
  for (size_t s = 0; s < steps; ++s) {
    Rhs r = rhs;
    rk4_step(r, static_cast<double>(s) * dt, dt, u, scratch);
    for (double& v : u) {
      if (!std::isfinite(v)) throw NonFiniteState("fokker-planck diverged");
      if (v < 0.0 && v > -1e-13) {
        // clamp tiny negative round-off; larger undershoots are counted
        v = 0.0;
      } else if (v < 0.0) {
        ++clamps;
        v = 0.0;
      }
    }
    if ((s + 1) % snap_stride == 0 || s + 1 == steps)
      snap(static_cast<double>(s + 1) * dt);
  }
  out.meta["negative_clamps"] = std::to_string(clamps);
  return out;
}

}  // namespace defvar::num
