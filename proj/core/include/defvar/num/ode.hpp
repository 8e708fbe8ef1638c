#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "defvar/num/types.hpp"

namespace defvar::num {

using Rhs = std::function<void(double t, std::span<const double> y,
                               std::span<double> dy)>;

enum class OdeMethod { Rk4, SemiImplicitEuler };

/// Fixed-step integration with dense output on the grid t0 + k dt.
/// SemiImplicitEuler assumes a separable canonical state [q..., p...]:
/// the p-half is advanced first and the q-half uses the updated p.
/// Throws NonFiniteState on blow-up.
Trajectory integrate_ode(const Rhs& rhs, std::span<const double> y0,
                         double t0, double t1, double dt,
                         OdeMethod method = OdeMethod::Rk4,
                         const std::vector<std::string>& state_names = {});

/// One classical RK4 step in place.
void rk4_step(const Rhs& rhs, double t, double dt, std::vector<double>& y,
              std::vector<double>& scratch);

}  // namespace defvar::num
