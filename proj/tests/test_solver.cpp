#include <cmath>
#include <cstring>
#include <numeric>
#include <random>
#include <vector>

#include "bfdc/errors.hpp"
#include "bfdc/model.hpp"
#include "bfdc/solver.hpp"
#include "doctest.h"

using namespace bfdc;

namespace {

FluxSpec linear_flux() { return builtin_flux("linear"); }

ConvectionSpec no_conv() { return builtin_convection("zero"); }

SimState state_of(const Grid1D& g, const std::function<double(double)>& f) {
  SimState s;
  s.u.resize(g.n);
  for (int i = 0; i < g.n; ++i) s.u[i] = f(g.x(i));
  return s;
}

double mass(const std::vector<double>& u, double h) {
  return h * std::accumulate(u.begin(), u.end(), 0.0);
}

double heat_exact(double x, double t) {
  return std::exp(-M_PI * M_PI * t) * std::sin(M_PI * x);
}

// L-inf error of the forward-Euler heat solve against the decaying sine.
double heat_error(int n, double t_end) {
  Grid1D grid(0.0, 1.0, n);
  SimState s0 = state_of(grid, [](double x) { return std::sin(M_PI * x); });
  BoundaryCondition bc;
  bc.kind = BoundaryCondition::Kind::dirichlet;
  TimeControls tc;
  tc.t_end = t_end;
  tc.sample_interval = t_end;
  const auto traj = integrate(s0, grid, linear_flux(), no_conv(), bc, tc);
  REQUIRE_FALSE(traj.diagnostics.blew_up);
  const auto& last = traj.samples.back();
  double err = 0.0;
  for (int i = 0; i < grid.n; ++i)
    err = std::max(err, std::abs(last.u[i] - heat_exact(grid.x(i), last.t)));
  return err;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("grid coordinates") {
  Grid1D g(-4.0, 4.0, 2001);
  CHECK(g.h() == doctest::Approx(0.004).epsilon(1e-15));
  CHECK(g.x(0) == -4.0);
  CHECK(g.x(2000) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 2), ConfigError);
  CHECK_THROWS_AS(Grid1D(1.0, 0.0, 10), ConfigError);
}

TEST_CASE("gradient is exact for quadratics") {
  Grid1D g(-2.0, 3.0, 51);
  SimState s = state_of(g, [](double x) { return 0.5 * x * x; });
  const auto ux = gradient(s, g);
  for (int i = 0; i < g.n; ++i)
    CHECK(ux[i] == doctest::Approx(g.x(i)).epsilon(1e-12));
}

TEST_CASE("piecewise initial datum integrates its slope profile") {
  Grid1D g(-4.0, 4.0, 801);
  InitialDatum d;
  d.a1 = -1.0;
  d.b1 = 1.0;
  d.slope_left = -2.0;
  d.slope_mid = 0.0;
  d.slope_right = 2.0;
  d.smoothing = 4.0 * g.h();
  d.u_left = 0.7;
  SimState s;
  s.u = build_initial(d, g);
  CHECK(s.u[0] == 0.7);

  // Blend midpoints sit exactly halfway between the adjacent slopes.
  CHECK(initial_slope(d, g, -1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(initial_slope(d, g, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(initial_slope(d, g, -3.0) == -2.0);
  CHECK(initial_slope(d, g, 0.0) == 0.0);
  CHECK(initial_slope(d, g, 2.5) == 2.0);

  const auto ux = gradient(s, g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    const double clear = d.smoothing + 2.0 * g.h();
    if (std::abs(x - d.a1) > clear && std::abs(x - d.b1) > clear)
      CHECK(ux[i] == doctest::Approx(initial_slope(d, g, x)).epsilon(1e-11));
  }
}

TEST_CASE("tabulated initial datum passes through its knots") {
  Grid1D g(0.0, 1.0, 41);
  InitialDatum d;
  d.kind = InitialDatum::Kind::user_table;
  for (int k = 0; k <= 20; ++k) {
    const double x = k / 20.0;
    d.table.push_back({x, std::sin(M_PI * x)});
  }
  const auto u = build_initial(d, g);
  for (int i = 0; i < g.n; ++i) {
    const double exact = std::sin(M_PI * g.x(i));
    const double tol = (i % 2 == 0) ? 1e-13 : 1e-3;  // even nodes are knots
    CHECK(std::abs(u[i] - exact) <= tol);
  }
}

TEST_CASE("conservative rhs is exact for compatible quadratic data") {
  Grid1D g(-1.0, 2.0, 31);
  SimState s = state_of(g, [](double x) { return 0.5 * x * x; });
  BoundaryCondition bc;
  bc.kind = BoundaryCondition::Kind::neumann_slope;
  bc.left_value = g.a - 0.5 * g.h();   // exact ghost-face slopes of x^2/2
  bc.right_value = g.b + 0.5 * g.h();
  const auto r = rhs(s, g, linear_flux(), no_conv(), bc);
  for (int i = 0; i < g.n; ++i)
    CHECK(r[i] == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("rhs reduces to the convection term on straight data") {
  Grid1D g(-2.0, 2.0, 41);
  SimState s = state_of(g, [](double x) { return 2.0 * x; });
  BoundaryCondition bc;
  bc.left_value = 2.0;
  bc.right_value = 2.0;
  const FluxSpec pm = builtin_flux("perona_malik");
  const auto conv = builtin_convection(
      "separable_linear",
      {{"alpha", -1.0}, {"beta", 1.0}, {"A", -1.0}, {"B", -3.0}});
  const auto r = rhs(s, g, pm, conv, bc);
  for (int i = 0; i < g.n; ++i)
    CHECK(r[i] == doctest::Approx(-3.0 * g.x(i)).epsilon(1e-12));

  const auto r0 = rhs(s, g, pm, no_conv(), bc);
  for (int i = 0; i < g.n; ++i)
    CHECK(r0[i] == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("stable dt follows the worst face stiffness") {
  Grid1D g(0.0, 1.0, 101);
  const double h = g.h();
  SimState s = state_of(g, [](double x) { return x; });
  BoundaryCondition bc;
  bc.left_value = 1.0;
  bc.right_value = 1.0;

  // Linear flux: |phi'| = 1 everywhere.
  auto r = stable_dt(s, g, linear_flux(), bc, 0.9, 0.0);
  CHECK(r.dt == doctest::Approx(0.45 * h * h).epsilon(1e-13));
  CHECK_FALSE(r.floored);

  // Slope-2 data under the hump flux: |phi'(2)| = 3/25 at every face.
  SimState s2 = state_of(g, [](double x) { return 2.0 * x; });
  bc.left_value = 2.0;
  bc.right_value = 2.0;
  auto r2 = stable_dt(s2, g, builtin_flux("perona_malik"), bc, 0.9, 0.0);
  CHECK(r2.dt == doctest::Approx(0.9 * h * h / (2.0 * 0.12)).epsilon(1e-12));

  auto r3 = stable_dt(s, g, linear_flux(), bc, 0.9, 1.0);
  CHECK(r3.floored);
  CHECK(r3.dt == 1.0);
}

TEST_CASE("one euler step matches the hand-rolled heat update") {
  Grid1D g(0.0, 1.0, 5);
  const double h = g.h();
  SimState s;
  s.u = {0.0, 0.2, 1.0, 0.1, 0.0};
  BoundaryCondition bc;
  bc.kind = BoundaryCondition::Kind::dirichlet;
  const double dt = 0.2 * h * h;
  const auto next = step(s, dt, g, linear_flux(), no_conv(), bc);
  const double lam = dt / (h * h);
  CHECK(next.u[0] == 0.0);
  CHECK(next.u[4] == 0.0);
  CHECK(next.u[1]
        == doctest::Approx(0.2 + lam * (1.0 - 2.0 * 0.2 + 0.0)).epsilon(1e-14));
  CHECK(next.u[2]
        == doctest::Approx(1.0 + lam * (0.1 - 2.0 + 0.2)).epsilon(1e-14));
  CHECK(next.u[3]
        == doctest::Approx(0.1 + lam * (0.0 - 0.2 + 1.0)).epsilon(1e-14));
  CHECK(next.t == doctest::Approx(dt).epsilon(1e-15));
}

TEST_CASE("samples land exactly on the sampling lattice") {
  Grid1D g(0.0, 1.0, 21);
  SimState s0 = state_of(g, [](double x) { return std::sin(M_PI * x); });
  BoundaryCondition bc;
  bc.kind = BoundaryCondition::Kind::dirichlet;
  TimeControls tc;
  tc.t_end = 0.1;
  tc.sample_interval = 0.02;
  const auto traj = integrate(s0, g, linear_flux(), no_conv(), bc, tc);
  REQUIRE(traj.samples.size() == 6);
  for (std::size_t k = 0; k < traj.samples.size(); ++k)
    CHECK(traj.samples[k].t == k * 0.02);
}

TEST_CASE("mass changes only through the boundary fluxes") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> bump(-0.5, 0.5);
  Grid1D g(-1.0, 1.0, 33);
  SimState s0 = state_of(g, [&](double x) { return 0.3 * x + bump(rng); });
  BoundaryCondition bc;
  bc.left_value = 0.3;
  bc.right_value = 0.3;  // equal slopes, so equal boundary fluxes
  TimeControls tc;
  tc.t_end = 0.05;
  tc.sample_interval = 0.05;
  const auto traj =
      integrate(s0, g, builtin_flux("perona_malik"), no_conv(), bc, tc);
  REQUIRE_FALSE(traj.diagnostics.blew_up);
  const double m0 = mass(traj.samples.front().u, g.h());
  const double m1 = mass(traj.samples.back().u, g.h());
  CHECK(std::abs(m1 - m0) <= 1e-11 * (1.0 + std::abs(m0)));
}

TEST_CASE("identical runs are bit-identical") {
  Grid1D g(-2.0, 2.0, 65);
  InitialDatum d;
  d.a1 = -0.5;
  d.b1 = 0.5;
  d.slope_left = -2.0;
  d.slope_mid = 0.0;
  d.slope_right = 2.0;
  d.smoothing = 4.0 * g.h();
  SimState s0;
  s0.u = build_initial(d, g);
  BoundaryCondition bc;
  bc.left_value = -2.0;
  bc.right_value = 2.0;
  TimeControls tc;
  tc.t_end = 0.02;
  tc.sample_interval = 0.005;
  const FluxSpec pm = builtin_flux("perona_malik");
  const auto conv = builtin_convection(
      "separable_linear",
      {{"alpha", -1.0}, {"beta", 1.0}, {"A", -1.0}, {"B", -1.0}});
  const auto t1 = integrate(s0, g, pm, conv, bc, tc);
  const auto t2 = integrate(s0, g, pm, conv, bc, tc);
  REQUIRE(t1.samples.size() == t2.samples.size());
  for (std::size_t k = 0; k < t1.samples.size(); ++k) {
    CHECK(t1.samples[k].t == t2.samples[k].t);
    CHECK(std::memcmp(t1.samples[k].u.data(), t2.samples[k].u.data(),
                      t1.samples[k].u.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("spatial accuracy is second order on the heat problem") {
  const double e1 = heat_error(51, 0.05);
  const double e2 = heat_error(101, 0.05);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 1.9);
  CHECK(order <= 2.3);
}

TEST_CASE("temporal accuracy is first order at fixed resolution") {
  Grid1D g(0.0, 1.0, 41);
  SimState s0 = state_of(g, [](double x) { return std::sin(M_PI * x); });
  BoundaryCondition bc;
  bc.kind = BoundaryCondition::Kind::dirichlet;
  auto solve = [&](double dt) {
    TimeControls tc;
    tc.t_end = 0.04;
    tc.sample_interval = 0.04;
    tc.fixed_dt = dt;
    return integrate(s0, g, linear_flux(), no_conv(), bc, tc).samples.back().u;
  };
  const double tau = 2e-4;  // below the CFL bound 2.8e-4 for h = 0.025
  const auto u1 = solve(tau);
  const auto u2 = solve(tau / 2.0);
  const auto u3 = solve(tau / 4.0);
  double d12 = 0.0, d23 = 0.0;
  for (int i = 0; i < g.n; ++i) {
    d12 = std::max(d12, std::abs(u1[i] - u2[i]));
    d23 = std::max(d23, std::abs(u2[i] - u3[i]));
  }
  const double order = std::log2(d12 / d23);
  CHECK(order >= 0.9);
  CHECK(order <= 1.1);
}

TEST_CASE("unstable stepping is reported as a blow-up, not an exception") {
  Grid1D g(0.0, 1.0, 41);
  SimState s0 = state_of(g, [](double x) { return std::sin(M_PI * x); });
  BoundaryCondition bc;
  bc.kind = BoundaryCondition::Kind::dirichlet;
  TimeControls tc;
  tc.t_end = 2.0;
  tc.sample_interval = 0.1;
  tc.fixed_dt = 3e-3;  // roughly 10x the CFL bound
  const auto traj = integrate(s0, g, linear_flux(), no_conv(), bc, tc);
  CHECK(traj.diagnostics.blew_up);
  CHECK(traj.diagnostics.blowup_t > 0.0);
  CHECK(traj.diagnostics.blowup_node >= 0);
  REQUIRE_FALSE(traj.samples.empty());
  for (double v : traj.samples.back().u) CHECK(std::isfinite(v));
}

TEST_CASE("dirichlet boundary rows stay pinned") {
  Grid1D g(0.0, 1.0, 33);
  SimState s0 = state_of(g, [](double x) { return x * (1.0 - x) + 0.25; });
  BoundaryCondition bc;
  bc.kind = BoundaryCondition::Kind::dirichlet;
  TimeControls tc;
  tc.t_end = 0.01;
  tc.sample_interval = 0.01;
  const auto traj = integrate(s0, g, linear_flux(), no_conv(), bc, tc);
  CHECK(traj.samples.back().u.front() == s0.u.front());
  CHECK(traj.samples.back().u.back() == s0.u.back());
}

}  // TEST_SUITE
