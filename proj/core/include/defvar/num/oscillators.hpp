#pragma once

#include "defvar/num/ode.hpp"

namespace defvar::num {

/// Damped oscillator m x'' + k x + gamma x' = 0 (section 5.1 with
/// U = k x^2 / 2). Columns: t, x, v, E with E = m v^2/2 + k x^2/2.
Trajectory simulate_dissipative_oscillator(double m, double gamma, double k,
                                           double x0, double v0, double t1,
                                           double dt,
                                           OdeMethod method = OdeMethod::Rk4);

/// Closed-form underdamped solution for the same parameters.
double damped_oscillator_closed_form(double m, double gamma, double k,
                                     double x0, double v0, double t);

struct AbrahamLorentzRun {
  Trajectory direct;   // third-order integration; exhibits the runaway
  Trajectory reduced;  // Landau-Lifshitz order reduction
  bool runaway_detected = false;
};

/// Radiation-reaction oscillator m x'' + k x - eps x''' = 0 (the attractive
/// potential corresponds to U = -k x^2/2 in the catalog's sign convention).
/// The direct trajectory integrates the third-order equation with initial
/// acceleration a0; the reduced one substitutes x''' ~ -(k/m) x', i.e.
/// m x'' + (eps k/m) x' + k x = 0. When the direct run's energy grows past
/// runaway_factor times its initial value, integration stops and the run is
/// flagged (throwing instead when throw_on_runaway).
AbrahamLorentzRun simulate_abraham_lorentz(double m, double k, double eps,
                                           double x0, double v0, double a0,
                                           double t1, double dt,
                                           double runaway_factor = 1e6,
                                           bool throw_on_runaway = false);

/// Positive real root of eps r^3 = m r^2 + k (the runaway rate ~ m/eps).
double abraham_lorentz_runaway_rate(double m, double k, double eps);

/// Caldirola-Kanai Hamiltonian flow qdot = e^{-lambda t} p / m,
/// pdot = -m e^{lambda t} omega0^2 q. Columns: t, q, p, v, E_mech, H with
/// E_mech = m v^2/2 + m omega0^2 q^2/2 evaluated on the mapped trajectory.
Trajectory simulate_caldirola_kanai(double m, double omega0, double lambda,
                                    double q0, double p0, double t1, double dt,
                                    OdeMethod method = OdeMethod::Rk4);

/// Closed form of q'' + lambda q' + omega0^2 q = 0.
double caldirola_kanai_closed_form(double omega0, double lambda, double q0,
                                   double v0, double t);

}  // namespace defvar::num
