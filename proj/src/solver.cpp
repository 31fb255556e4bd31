#include "bfdc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bfdc/errors.hpp"
#include "bfdc/numerics.hpp"

namespace bfdc {

Grid1D::Grid1D(double a_, double b_, int n_) : a(a_), b(b_), n(n_) {
  if (!(b > a)) throw ConfigError("grid: b must exceed a");
  if (n < 3) throw ConfigError("grid: need at least 3 nodes");
}

namespace {

// Smoothstep and its antiderivative on [0, 1].
double smoothstep(double x) { return x * x * (3.0 - 2.0 * x); }
double smoothstep_int(double x) { return x * x * x * (1.0 - 0.5 * x); }

struct SlopeProfile {
  double a1, b1, w;
  double sl, sm, sr;

  double slope(double x) const {
    if (x <= a1 - w) return sl;
    if (x < a1 + w) return sl + (sm - sl) * smoothstep((x - a1 + w) / (2 * w));
    if (x <= b1 - w) return sm;
    if (x < b1 + w) return sm + (sr - sm) * smoothstep((x - b1 + w) / (2 * w));
    return sr;
  }

  // Antiderivative of slope(), continuous across the breakpoints.
  double anti(double x) const {
    if (x <= a1 - w) return sl * x;
    double acc = sl * (a1 - w);
    if (x < a1 + w) {
      const double xi = (x - a1 + w) / (2 * w);
      return acc + sl * (x - a1 + w) + (sm - sl) * 2 * w * smoothstep_int(xi);
    }
    acc += w * (sl + sm);  // full blend integral
    if (x <= b1 - w) return acc + sm * (x - a1 - w);
    acc += sm * (b1 - a1 - 2 * w);
    if (x < b1 + w) {
      const double xi = (x - b1 + w) / (2 * w);
      return acc + sm * (x - b1 + w) + (sr - sm) * 2 * w * smoothstep_int(xi);
    }
    acc += w * (sm + sr);
    return acc + sr * (x - b1 - w);
  }
};

SlopeProfile make_profile(const InitialDatum& d, const Grid1D& grid) {
  const double w = d.smoothing > 0.0 ? d.smoothing : 4.0 * grid.h();
  if (!(d.a1 <= d.b1))
    throw ConfigError("initial: a1 must not exceed b1");
  if (d.b1 - d.a1 < 2.0 * w)
    throw ConfigError("initial: smoothing blends overlap; need b1 - a1 >= 2*smoothing");
  return {d.a1, d.b1, w, d.slope_left, d.slope_mid, d.slope_right};
}

}  // namespace

double initial_slope(const InitialDatum& datum, const Grid1D& grid,
                     double x) {
  return make_profile(datum, grid).slope(x);
}

std::vector<double> build_initial(const InitialDatum& datum,
                                  const Grid1D& grid) {
  std::vector<double> u(grid.n);
  if (datum.kind == InitialDatum::Kind::user_table) {
    if (datum.table.size() < 4)
      throw ConfigError("initial: user_table needs at least 4 (x, u) points");
    auto pts = datum.table;
    std::sort(pts.begin(), pts.end(),
              [](const auto& p, const auto& q) { return p[0] < q[0]; });
    std::vector<double> xs(pts.size()), ys(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      xs[i] = pts[i][0];
      ys[i] = pts[i][1];
      if (i > 0 && !(xs[i] > xs[i - 1]))
        throw ConfigError("initial: duplicate x in user_table");
    }
    const double slack = 1e-9 * (grid.b - grid.a);
    if (xs.front() > grid.a + slack || xs.back() < grid.b - slack)
      throw ConfigError("initial: user_table must cover [a, b]");
    num::PiecewiseCubic curve(xs, ys, num::pchip_tangents(xs, ys));
    for (int i = 0; i < grid.n; ++i) u[i] = curve.value(grid.x(i));
    return u;
  }

  const SlopeProfile p = make_profile(datum, grid);
  const double base = p.anti(grid.a);
  for (int i = 0; i < grid.n; ++i)
    u[i] = datum.u_left + (p.anti(grid.x(i)) - base);
  return u;
}

std::vector<double> gradient(const SimState& state, const Grid1D& grid) {
  const int n = grid.n;
  if (n < 3) throw ConfigError("gradient: need at least 3 nodes");
  const double h = grid.h();
  const auto& u = state.u;
  std::vector<double> ux(n);
  ux[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  for (int i = 1; i + 1 < n; ++i) ux[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  ux[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  return ux;
}

std::vector<double> rhs(const SimState& state, const Grid1D& grid,
                        const FluxSpec& flux, const ConvectionSpec& conv,
                        const BoundaryCondition& bc) {
  const int n = grid.n;
  const double h = grid.h();
  const auto& u = state.u;
  const std::vector<double> ux = gradient(state, grid);

  std::vector<double> face(n - 1);  // phi at s_{i+1/2}
  for (int i = 0; i + 1 < n; ++i) face[i] = flux.phi((u[i + 1] - u[i]) / h);

  std::vector<double> r(n);
  for (int i = 1; i + 1 < n; ++i)
    r[i] = (face[i] - face[i - 1]) / h + conv.psi(grid.x(i), ux[i]);

  if (bc.kind == BoundaryCondition::Kind::dirichlet) {
    r[0] = 0.0;
    r[n - 1] = 0.0;
  } else {
    r[0] = (face[0] - flux.phi(bc.left_value)) / h +
           conv.psi(grid.x(0), ux[0]);
    r[n - 1] = (flux.phi(bc.right_value) - face[n - 2]) / h +
               conv.psi(grid.x(n - 1), ux[n - 1]);
  }

  for (int i = 0; i < n; ++i)
    if (!std::isfinite(r[i])) {
      BlowupError err("rhs: non-finite rate at node " + std::to_string(i), i,
                      state.t);
      err.last_good = u;
      throw err;
    }
  return r;
}

StableDt stable_dt(const SimState& state, const Grid1D& grid,
                   const FluxSpec& flux, const BoundaryCondition& bc,
                   double safety, double dt_floor) {
  if (!(safety > 0.0) || safety > 1.0)
    throw ConfigError("stable_dt: safety must be in (0, 1]");
  const double h = grid.h();
  const auto& u = state.u;
  double m = 0.0;
  for (int i = 0; i + 1 < grid.n; ++i)
    m = std::max(m, std::abs(flux.dphi((u[i + 1] - u[i]) / h)));
  if (bc.kind == BoundaryCondition::Kind::neumann_slope) {
    m = std::max(m, std::abs(flux.dphi(bc.left_value)));
    m = std::max(m, std::abs(flux.dphi(bc.right_value)));
  }
  if (m == 0.0) return {dt_floor, true};
  const double dt = safety * h * h / (2.0 * m);
  if (dt < dt_floor) return {dt_floor, true};
  return {dt, false};
}

SimState step(const SimState& state, double dt, const Grid1D& grid,
              const FluxSpec& flux, const ConvectionSpec& conv,
              const BoundaryCondition& bc) {
  if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
  const std::vector<double> r = rhs(state, grid, flux, conv, bc);
  SimState out;
  out.t = state.t + dt;
  out.u.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    out.u[i] = state.u[i] + dt * r[i];
    if (!std::isfinite(out.u[i])) {
      BlowupError err("step: non-finite state at node " + std::to_string(i),
                      i, state.t);
      err.last_good = state.u;
      throw err;
    }
  }
  return out;
}

Trajectory integrate(const SimState& state0, const Grid1D& grid,
                     const FluxSpec& flux, const ConvectionSpec& conv,
                     const BoundaryCondition& bc, const TimeControls& tc) {
  Trajectory traj;
  traj.grid = grid;
  traj.samples.push_back(state0);
  traj.diagnostics.min_dt = std::numeric_limits<double>::infinity();
  if (tc.t_end <= 0.0) {
    traj.diagnostics.min_dt = 0.0;
    return traj;
  }
  if (!(tc.sample_interval > 0.0))
    throw ConfigError("time: sample_interval must be positive");

  const double floor =
      tc.dt_floor > 0.0 ? tc.dt_floor : 1e-10 * tc.t_end;
  const double tiny = 1e-12 * std::max(tc.t_end, 1.0);

  SimState state = state0;
  long k = 1;
  while (tc.t_end - state.t > tiny) {
    StableDt sd = tc.fixed_dt > 0.0
                      ? StableDt{tc.fixed_dt, false}
                      : stable_dt(state, grid, flux, bc, tc.safety, floor);
    if (sd.floored) traj.diagnostics.stiff = true;
    const double target = std::min(k * tc.sample_interval, tc.t_end);
    double dt = std::min(sd.dt, target - state.t);
    try {
      state = step(state, dt, grid, flux, conv, bc);
    } catch (const BlowupError& e) {
      traj.diagnostics.blew_up = true;
      traj.diagnostics.blowup_node = e.node;
      traj.diagnostics.blowup_t = e.t;
      break;
    }
    traj.dt_history.push_back(dt);
    traj.diagnostics.min_dt = std::min(traj.diagnostics.min_dt, dt);
    traj.diagnostics.max_dt = std::max(traj.diagnostics.max_dt, dt);
    ++traj.diagnostics.steps;
    if (state.t >= target - tiny) {
      state.t = target;  // snap off the last-step rounding
      traj.samples.push_back(state);
      ++k;
    }
  }
  if (traj.diagnostics.steps == 0) traj.diagnostics.min_dt = 0.0;
  return traj;
}

}  // namespace bfdc
