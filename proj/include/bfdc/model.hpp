#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace bfdc {

// A diffusion flux with two critical slopes alpha < beta: phi increases on
// (alpha, beta) and decreases outside [alpha, beta], so the equation
// u_t = (phi(u_x))_x + psi(x, u_x) is forward in between and backward
// outside. Derivative closures are analytic for builtins, spline-based for
// tabulated fluxes.
struct FluxSpec {
  std::string name;
  double alpha = 0.0;
  double beta = 0.0;
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> d2phi;
  // Tolerance for |phi'(alpha)|, |phi'(beta)| and for finite-difference
  // consistency checks; wider for tabulated data.
  double crit_tol = 1e-8;
  double fd_tol = 1e-8;
};

// Lower-order term psi(x, y) whose x-derivative is constant in x along the
// two critical slopes: dpsi_dx(x, alpha) = A and dpsi_dx(x, beta) = B.
struct ConvectionSpec {
  std::string name;
  std::function<double(double, double)> psi;      // psi(x, y)
  std::function<double(double, double)> dpsi_dx;  // d psi / d x
  double A = 0.0;
  double B = 0.0;
};

struct FluxParams {
  std::map<std::string, double> scalars;
  // (s, phi) pairs, user_table only.
  std::vector<std::array<double, 2>> table;

  bool operator==(const FluxParams&) const = default;
};

// Builtin fluxes:
//   perona_malik  phi(s) = s/(1+s^2), alpha = -1, beta = 1 (no params)
//   gaussian      phi(s) = s*exp(-s^2/(2K^2)), alpha = -K, beta = K
//                 (scalar "K" > 0, default 1)
//   linear        phi(s) = s with declared "alpha", "beta" (defaults -1, 1);
//                 monotone validation flux, fails the sign hypotheses by
//                 construction
//   user_table    shape-preserving cubic fit of params.table with declared
//                 "alpha", "beta" scalars; the declared slopes must land on
//                 table knots where the secant slopes change sign
FluxSpec builtin_flux(const std::string& name, const FluxParams& params = {});

// Builtin convections (params carry the flux anchors "alpha" and "beta"
// along with "A" < 0 and "B" < 0):
//   separable_linear  psi(x,y) = x*h(y), h a C^1 monotone blend with
//                     h(alpha) = A, h(beta) = B, constant beyond
//   zero_extension    as above but h tapers to 0 outside a slope window
//                     (optional scalars "window_low", "window_high", "taper")
//   zero              psi identically 0 (no params)
ConvectionSpec builtin_convection(
    const std::string& name, const std::map<std::string, double>& params = {});

struct Violation {
  std::string condition;
  double sample = 0.0;
  double observed = 0.0;
};

struct ModelValidationReport {
  bool flux_ok = false;
  bool convection_ok = false;
  std::vector<Violation> violations;
  double k0 = std::nan("");
  double k1 = std::nan("");
};

struct ValidationOptions {
  double domain_lo = -1.0;  // x-interval used for convection sampling
  double domain_hi = 1.0;
  int samples = 256;        // >= 100
  double slope_radius = 0.0;  // 0 -> 10 * max(|alpha|, |beta|)
  unsigned long seed = 0;     // jitters the sample grids
};

// Checks every structural hypothesis on a sample grid. Violations are data,
// not failures; k0/k1 are NaN when the curvature signs rule them out.
ModelValidationReport validate(const FluxSpec& flux,
                               const ConvectionSpec& conv,
                               const ValidationOptions& opts = {});

struct ExpansionRates {
  double k0 = 0.0;
  double k1 = 0.0;
};

// Interface expansion rates k0 = sqrt(2|A*phi''(alpha)|) and
// k1 = sqrt(2|B*phi''(beta)|). Throws HypothesisError when the curvature
// signs at the critical slopes are wrong.
ExpansionRates rates(const FluxSpec& flux, const ConvectionSpec& conv);

}  // namespace bfdc
