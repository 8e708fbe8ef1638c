#include "defvar/num/residual.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "defvar/simplify.hpp"

namespace defvar::num {

namespace {

constexpr int kMargin = 3;

// 4th-order central stencils, offsets -3..3.
double stencil(const std::function<double(long long)>& u, long long i, int order,
               double h) {
  auto v = [&](long long k) { return u(i + k); };
  switch (order) {
    case 0:
      return v(0);
    case 1:
      return (v(-2) - 8.0 * v(-1) + 8.0 * v(1) - v(2)) / (12.0 * h);
    case 2:
      return (-v(-2) + 16.0 * v(-1) - 30.0 * v(0) + 16.0 * v(1) - v(2)) /
             (12.0 * h * h);
    case 3:
      return (v(-3) - 8.0 * v(-2) + 13.0 * v(-1) - 13.0 * v(1) + 8.0 * v(2) -
              v(3)) /
             (8.0 * h * h * h);
    case 4:
      return (-v(-3) + 12.0 * v(-2) - 39.0 * v(-1) + 56.0 * v(0) -
              39.0 * v(1) + 12.0 * v(2) - v(3)) /
             (6.0 * h * h * h * h);
    default:
      throw SymbolMismatch("finite-difference stencil supports orders 0..4");
  }
}

struct PointContext {
  double t = 0.0;
  double x = 0.0;
  size_t point_index = 0;
  const std::map<std::string, double>* symbols = nullptr;
  // value/derivative accessors of the dynamical variable at this point
  std::function<double(int t_order, int x_order)> field;
  std::string varname;
};

double eval_point(const Expr& e, const PointContext& ctx) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number:
      return n.number.to_double();
    case Kind::Euler:
      return std::numbers::e;
    case Kind::Symbol: {
      if (n.name == "t") return ctx.t;
      if (n.name == "x") return ctx.x;
      auto it = ctx.symbols->find(n.name);
      if (it == ctx.symbols->end())
        throw SymbolMismatch("symbol '" + n.name +
                             "' has no value for the residual check");
      return it->second;
    }
    case Kind::Func: {
      if (n.name != ctx.varname)
        throw SymbolMismatch("function '" + n.name +
                             "' cannot be mapped onto the numeric solution");
      return ctx.field(0, 0);
    }
    case Kind::Deriv: {
      const Node& f = n.args[0].node();
      if (f.name != ctx.varname)
        throw SymbolMismatch("function '" + f.name +
                             "' cannot be mapped onto the numeric solution");
      int t_order = 0, x_order = 0;
      for (size_t i = 0; i < f.args.size(); ++i) {
        if (f.args[i].kind() != Kind::Symbol)
          throw SymbolMismatch("composite function arguments are not "
                               "supported by the residual check");
        if (f.args[i].node().name == "t")
          t_order = n.orders[i];
        else
          x_order = n.orders[i];
      }
      return ctx.field(t_order, x_order);
    }
    case Kind::Pow: {
      double b = eval_point(n.args[0], ctx);
      double ex = eval_point(n.args[1], ctx);
      return std::pow(b, ex);
    }
    case Kind::Product: {
      double r = 1.0;
      for (const Expr& a : n.args) r *= eval_point(a, ctx);
      return r;
    }
    case Kind::Sum: {
      double r = 0.0;
      for (const Expr& a : n.args) r += eval_point(a, ctx);
      return r;
    }
    default:
      throw SymbolMismatch(
          "unexpanded operator nodes cannot be evaluated on numeric data");
  }
}

double normalized_residual(const Expr& equation,
                           const std::function<void(PointContext&)>& configure,
                           size_t npoints, const PointContext& proto) {
  Expr eq = simplify(equation);
  std::vector<Expr> terms =
      eq.kind() == Kind::Sum ? eq.node().args : std::vector<Expr>{eq};

  double worst = 0.0;
  double scale = 0.0;
  PointContext ctx = proto;
  for (size_t p = 0; p < npoints; ++p) {
    ctx.t = 0.0;
    ctx.x = 0.0;
    ctx.field = nullptr;
    ctx.point_index = p;
    configure(ctx);
    double sum = 0.0;
    for (const Expr& term : terms) {
      double v = eval_point(term, ctx);
      if (!std::isfinite(v))
        throw SymbolMismatch("residual evaluation produced a non-finite value");
      sum += v;
      scale = std::max(scale, std::abs(v));
    }
    worst = std::max(worst, std::abs(sum));
  }
  return worst / std::max(scale, 1e-300);
}

}  // namespace

double residual_check(const Expr& equation, const Trajectory& traj,
                      const std::string& varname,
                      const std::map<std::string, double>& symbol_values) {
  const auto& t = traj.col("t");
  const auto& u = traj.col(varname);
  const long long n = static_cast<long long>(t.size());
  if (n < 2 * kMargin + 1)
    throw SymbolMismatch("trajectory too short for the residual stencils");
  const double h = traj.dt;

  PointContext proto;
  proto.symbols = &symbol_values;
  proto.varname = varname;

  size_t interior = static_cast<size_t>(n - 2 * kMargin);
  auto configure = [&](PointContext& ctx) {
    long long i = static_cast<long long>(ctx.point_index) + kMargin;
    ctx.t = t[static_cast<size_t>(i)];
    ctx.field = [&, i](int t_order, int /*x_order*/) {
      return stencil([&](long long k) { return u[static_cast<size_t>(k)]; }, i,
                     t_order, h);
    };
  };
  return normalized_residual(equation, configure, interior, proto);
}

double residual_check(const Expr& equation, const FieldGrid& grid,
                      const std::string& varname,
                      const std::map<std::string, double>& symbol_values) {
  const long long nt = static_cast<long long>(grid.times.size());
  const long long nx = static_cast<long long>(grid.points);
  if (nt < 2 * kMargin + 1)
    throw SymbolMismatch("need more snapshots for the time stencil");
  const double ht = grid.times[1] - grid.times[0];
  for (long long i = 1; i + 1 < nt; ++i)
    if (std::abs((grid.times[i + 1] - grid.times[i]) - ht) > 1e-9 * ht)
      throw SymbolMismatch("snapshots are not uniformly spaced");
  const double hx = grid.dx;
  const bool periodic = grid.boundary == Boundary::Periodic;

  PointContext proto;
  proto.symbols = &symbol_values;
  proto.varname = varname;

  const long long x_lo = periodic ? 0 : kMargin;
  const long long x_hi = periodic ? nx : nx - kMargin;
  const size_t interior =
      static_cast<size_t>((nt - 2 * kMargin) * (x_hi - x_lo));

  auto wrap = [&](long long j) {
    if (periodic) return ((j % nx) + nx) % nx;
    return j;
  };

  auto configure = [&](PointContext& ctx) {
    long long idx = static_cast<long long>(ctx.point_index);
    long long ti = idx / (x_hi - x_lo) + kMargin;
    long long xi = idx % (x_hi - x_lo) + x_lo;
    ctx.t = grid.times[static_cast<size_t>(ti)];
    ctx.x = grid.x_at(static_cast<size_t>(xi));
    ctx.field = [&, ti, xi](int t_order, int x_order) {
      auto value_at_time = [&](long long tk) {
        return stencil(
            [&](long long xk) {
              return grid.snapshots[static_cast<size_t>(tk)]
                                   [static_cast<size_t>(wrap(xk))];
            },
            xi, x_order, hx);
      };
      return stencil(value_at_time, ti, t_order, ht);
    };
  };
  return normalized_residual(equation, configure, interior, proto);
}

}  // namespace defvar::num
