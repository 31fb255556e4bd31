#pragma once

#include <array>
#include <vector>

#include "bfdc/model.hpp"

namespace bfdc {

struct Grid1D {
  Grid1D() = default;
  Grid1D(double a, double b, int n);  // b > a, n >= 3

  double a = 0.0;
  double b = 1.0;
  int n = 2;

  double h() const { return (b - a) / (n - 1); }
  double x(int i) const { return a + i * h(); }
};

struct SimState {
  double t = 0.0;
  std::vector<double> u;
};

struct SimDiagnostics {
  bool blew_up = false;
  int blowup_node = -1;
  double blowup_t = 0.0;
  bool stiff = false;  // dt floor engaged at least once
  double min_dt = 0.0;
  double max_dt = 0.0;
  long steps = 0;
};

struct Trajectory {
  Grid1D grid;
  std::vector<SimState> samples;  // strictly increasing in t
  std::vector<double> dt_history;
  SimDiagnostics diagnostics;
};

// neumann_slope prescribes u_x at the two boundary faces; dirichlet keeps
// the boundary samples at their initial values (zero rate there).
struct BoundaryCondition {
  enum class Kind { dirichlet, neumann_slope };
  Kind kind = Kind::neumann_slope;
  double left_value = 0.0;
  double right_value = 0.0;

  bool operator==(const BoundaryCondition&) const = default;
};

// Initial profile. piecewise_slope integrates a C^1 slope ramp equal to
// slope_left on [a, a1-smoothing], slope_mid on [a1+smoothing,
// b1-smoothing], slope_right on [b1+smoothing, b], with smoothstep blends
// in between; user_table is a shape-preserving cubic through (x, u) points.
struct InitialDatum {
  enum class Kind { piecewise_slope, user_table };
  Kind kind = Kind::piecewise_slope;
  double a1 = 0.0;
  double b1 = 0.0;
  double slope_left = 0.0;
  double slope_mid = 0.0;
  double slope_right = 0.0;
  double smoothing = 0.0;  // blend half-width; 0 -> 4h at build time
  double u_left = 0.0;     // integration constant u(a)
  std::vector<std::array<double, 2>> table;

  bool operator==(const InitialDatum&) const = default;
};

std::vector<double> build_initial(const InitialDatum& datum,
                                  const Grid1D& grid);

// The exact slope profile the piecewise datum integrates; exposed so tests
// can compare gradient() output against it.
double initial_slope(const InitialDatum& datum, const Grid1D& grid, double x);

// Nodal derivative: central differences inside, one-sided second-order at
// the ends. Exact for quadratics.
std::vector<double> gradient(const SimState& state, const Grid1D& grid);

// Conservative right-hand side of u_t = (phi(u_x))_x + psi(x, u_x): face
// slopes s_{i+1/2} = (u_{i+1}-u_i)/h, diffusion
// (phi(s_{i+1/2})-phi(s_{i-1/2}))/h, convection evaluated at the nodal
// gradient. Throws BlowupError on a non-finite entry.
std::vector<double> rhs(const SimState& state, const Grid1D& grid,
                        const FluxSpec& flux, const ConvectionSpec& conv,
                        const BoundaryCondition& bc);

struct StableDt {
  double dt = 0.0;
  bool floored = false;  // formula fell below the floor (stiff)
};

// dt = safety * h^2 / (2 * max |phi'| over current face slopes), floored
// at dt_floor.
StableDt stable_dt(const SimState& state, const Grid1D& grid,
                   const FluxSpec& flux, const BoundaryCondition& bc,
                   double safety, double dt_floor);

// One forward-Euler update. Throws BlowupError carrying the last good
// state when the result is not finite.
SimState step(const SimState& state, double dt, const Grid1D& grid,
              const FluxSpec& flux, const ConvectionSpec& conv,
              const BoundaryCondition& bc);

struct TimeControls {
  double t_end = 0.0;
  double sample_interval = 0.0;  // > 0 unless t_end == 0
  double safety = 0.9;
  double dt_floor = 0.0;  // 0 -> 1e-10 * t_end
  double fixed_dt = 0.0;  // > 0 overrides the adaptive step

  bool operator==(const TimeControls&) const = default;
};

// Integrates from state0 to t_end, storing the initial state and then one
// sample per sample_interval of simulated time (steps land on sample
// instants exactly). A blow-up aborts and returns the partial trajectory
// with diagnostics set.
Trajectory integrate(const SimState& state0, const Grid1D& grid,
                     const FluxSpec& flux, const ConvectionSpec& conv,
                     const BoundaryCondition& bc, const TimeControls& tc);

}  // namespace bfdc
