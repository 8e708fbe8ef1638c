#include "defvar/num/kdv.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace defvar::num {

namespace {

using cplx = std::complex<double>;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey; inverse scales by 1/n.
void fft(std::vector<cplx>& a, bool inverse) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * std::numbers::pi / static_cast<double>(len) *
                 (inverse ? 1.0 : -1.0);
    cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w(1.0);
      for (size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& z : a) z /= static_cast<double>(n);
}

struct SnapshotWriter {
  FieldGrid& out;
  double dx;
  void operator()(double t, std::span<const double> u) const {
    out.times.push_back(t);
    out.snapshots.emplace_back(u.begin(), u.end());
    double m0 = 0.0, m1 = 0.0;
    for (double v : u) {
      m0 += v;
      m1 += v * v;
    }
    out.conserved["int_phi"].push_back(m0 * dx);
    out.conserved["int_phi2"].push_back(m1 * dx);
  }
};

void check_finite(std::span<const double> u) {
  for (double v : u)
    if (!std::isfinite(v)) throw NonFiniteState("kdv field diverged");
}

FieldGrid run_pseudospectral(std::span<const double> phi0, double x0, double dx,
                             double t1, double dt, size_t snapshots) {
  const size_t n = phi0.size();
  if (!is_pow2(n))
    throw std::invalid_argument("pseudo-spectral kdv needs a power-of-two grid");
  const double L = dx * static_cast<double>(n);
  const double base_k = 2.0 * std::numbers::pi / L;

  std::vector<double> k3(n);
  std::vector<double> kk(n);
  std::vector<bool> dealias(n, false);
  for (size_t i = 0; i < n; ++i) {
    double ki = base_k * (i <= n / 2 ? static_cast<double>(i)
                                     : static_cast<double>(i) -
                                           static_cast<double>(n));
    kk[i] = ki;
    k3[i] = ki * ki * ki;
    dealias[i] = std::abs(ki) > base_k * static_cast<double>(n) / 3.0;
  }

  // nonlinear CFL (the linear term is handled exactly by the integrating factor)
  double umax = 0.0;
  for (double v : phi0) umax = std::max(umax, std::abs(v));
  double kmax = base_k * static_cast<double>(n) / 2.0;
  double bound = 2.0 / (6.0 * std::max(umax, 1e-12) * kmax);
  if (dt > bound)
    throw CFLViolation("dt exceeds the nonlinear stability estimate " +
                       std::to_string(bound));

  std::vector<cplx> uhat(n);
  for (size_t i = 0; i < n; ++i) uhat[i] = phi0[i];
  fft(uhat, false);

  // phi_t = -phi_xxx + 6 phi phi_x  ->  uhat_t = i k^3 uhat + 3 i k (phi^2)^
  auto nonlinear = [&](const std::vector<cplx>& vhat, double t,
                       std::vector<cplx>& out) {
    std::vector<cplx> u(n);
    for (size_t i = 0; i < n; ++i) {
      cplx ui = vhat[i] * std::exp(cplx(0.0, k3[i] * t));
      u[i] = dealias[i] ? cplx(0.0) : ui;
    }
    fft(u, true);
    for (auto& z : u) z = z * z;
    fft(u, false);
    for (size_t i = 0; i < n; ++i) {
      cplx nl = cplx(0.0, 3.0 * kk[i]) * (dealias[i] ? cplx(0.0) : u[i]);
      out[i] = nl * std::exp(cplx(0.0, -k3[i] * t));
    }
  };

  FieldGrid out;
  out.x0 = x0;
  out.dx = dx;
  out.points = n;
  out.boundary = Boundary::Periodic;
  out.meta["system"] = "kdv";
  out.meta["scheme"] = "pseudo-spectral";
  out.params = {{"dt", dt}, {"stability_bound", bound}};
  SnapshotWriter snap{out, dx};

  const size_t steps = static_cast<size_t>(std::llround(t1 / dt));
  const size_t stride =
      snapshots <= 1 ? steps + 1 : std::max<size_t>(1, steps / (snapshots - 1));

  std::vector<double> u_real(phi0.begin(), phi0.end());
  snap(0.0, u_real);

  std::vector<cplx> v = uhat;  // v = e^{-i k^3 t} uhat
  std::vector<cplx> k1(n), k2(n), k3v(n), k4(n), tmp(n);
  for (size_t s = 0; s < steps; ++s) {
    double t = static_cast<double>(s) * dt;
    nonlinear(v, t, k1);
    for (size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * dt * k1[i];
    nonlinear(tmp, t + 0.5 * dt, k2);
    for (size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * dt * k2[i];
    nonlinear(tmp, t + 0.5 * dt, k3v);
    for (size_t i = 0; i < n; ++i) tmp[i] = v[i] + dt * k3v[i];
    nonlinear(tmp, t + dt, k4);
    for (size_t i = 0; i < n; ++i)
      v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3v[i] + k4[i]);

    if ((s + 1) % stride == 0 || s + 1 == steps) {
      std::vector<cplx> u(n);
      double tn = static_cast<double>(s + 1) * dt;
      for (size_t i = 0; i < n; ++i)
        u[i] = v[i] * std::exp(cplx(0.0, k3[i] * tn));
      fft(u, true);
      for (size_t i = 0; i < n; ++i) u_real[i] = u[i].real();
      check_finite(u_real);
      snap(tn, u_real);
    }
  }
  return out;
}

FieldGrid run_zabusky_kruskal(std::span<const double> phi0, double x0, double dx,
                              double t1, double dt, size_t snapshots) {
  const size_t n = phi0.size();
  double umax = 0.0;
  for (double v : phi0) umax = std::max(umax, std::abs(v));
  // classic leapfrog bound dt <= dx^3 / (4 + dx^2 |6 u|)
  double bound = dx * dx * dx / (4.0 + dx * dx * 6.0 * std::max(umax, 1e-12));
  if (dt > bound)
    throw CFLViolation("dt exceeds the Zabusky-Kruskal bound " +
                       std::to_string(bound));

  FieldGrid out;
  out.x0 = x0;
  out.dx = dx;
  out.points = n;
  out.boundary = Boundary::Periodic;
  out.meta["system"] = "kdv";
  out.meta["scheme"] = "zabusky-kruskal";
  out.params = {{"dt", dt}, {"stability_bound", bound}};
  SnapshotWriter snap{out, dx};

  auto ip = [n](size_t i, size_t k) { return (i + k) % n; };
  auto im = [n](size_t i, size_t k) { return (i + n - k) % n; };

  auto rhs_at = [&](const std::vector<double>& u, size_t i) {
    // phi_t = 6 phi phi_x - phi_xxx with the conservative ZK average
    double avg = (u[ip(i, 1)] + u[i] + u[im(i, 1)]) / 3.0;
    double d1 = (u[ip(i, 1)] - u[im(i, 1)]) / (2.0 * dx);
    double d3 = (u[ip(i, 2)] - 2.0 * u[ip(i, 1)] + 2.0 * u[im(i, 1)] -
                 u[im(i, 2)]) /
                (2.0 * dx * dx * dx);
    return 6.0 * avg * d1 - d3;
  };

  std::vector<double> prev(phi0.begin(), phi0.end());
  std::vector<double> curr(n), next(n);
  snap(0.0, prev);

  // bootstrap with one forward step (RK2 midpoint for accuracy)
  {
    std::vector<double> mid(n);
    for (size_t i = 0; i < n; ++i) mid[i] = prev[i] + 0.5 * dt * rhs_at(prev, i);
    for (size_t i = 0; i < n; ++i) curr[i] = prev[i] + dt * rhs_at(mid, i);
  }

  const size_t steps = static_cast<size_t>(std::llround(t1 / dt));
  const size_t stride =
      snapshots <= 1 ? steps + 1 : std::max<size_t>(1, steps / (snapshots - 1));
  if (1 % stride == 0) snap(dt, curr);
  for (size_t s = 1; s < steps; ++s) {
    for (size_t i = 0; i < n; ++i) next[i] = prev[i] + 2.0 * dt * rhs_at(curr, i);
    check_finite(next);
    prev.swap(curr);
    curr.swap(next);
    if ((s + 1) % stride == 0 || s + 1 == steps)
      snap(static_cast<double>(s + 1) * dt, curr);
  }
  return out;
}

}  // namespace

double kdv_soliton(double c, double x, double t) {
  double arg = 0.5 * std::sqrt(c) * (x - c * t);
  double s = 1.0 / std::cosh(arg);
  return -0.5 * c * s * s;
}

FieldGrid simulate_kdv(std::span<const double> phi0, double x0, double dx,
                       double t1, double dt, KdvScheme scheme,
                       size_t snapshots) {
  return scheme == KdvScheme::PseudoSpectral
             ? run_pseudospectral(phi0, x0, dx, t1, dt, snapshots)
             : run_zabusky_kruskal(phi0, x0, dx, t1, dt, snapshots);
}

}  // namespace defvar::num
