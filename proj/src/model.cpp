#include "bfdc/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "bfdc/errors.hpp"
#include "bfdc/numerics.hpp"

namespace bfdc {

namespace {

void require_known_scalars(const std::map<std::string, double>& scalars,
                           std::initializer_list<const char*> allowed,
                           const std::string& context) {
  for (const auto& [key, value] : scalars) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end())
      throw ConfigError(context + ": unknown parameter '" + key + "'");
  }
}

double scalar_or(const std::map<std::string, double>& scalars,
                 const std::string& key, double fallback) {
  auto it = scalars.find(key);
  return it == scalars.end() ? fallback : it->second;
}

double require_scalar(const std::map<std::string, double>& scalars,
                      const std::string& key, const std::string& context) {
  auto it = scalars.find(key);
  if (it == scalars.end())
    throw ConfigError(context + ": missing parameter '" + key + "'");
  return it->second;
}

FluxSpec perona_malik_flux() {
  FluxSpec f;
  f.name = "perona_malik";
  f.alpha = -1.0;
  f.beta = 1.0;
  f.phi = [](double s) { return s / (1.0 + s * s); };
  f.dphi = [](double s) {
    const double q = 1.0 + s * s;
    return (1.0 - s * s) / (q * q);
  };
  f.d2phi = [](double s) {
    const double q = 1.0 + s * s;
    return 2.0 * s * (s * s - 3.0) / (q * q * q);
  };
  return f;
}

FluxSpec gaussian_flux(double K) {
  if (!(K > 0.0)) throw ConfigError("gaussian flux: K must be positive");
  FluxSpec f;
  f.name = "gaussian";
  f.alpha = -K;
  f.beta = K;
  const double K2 = K * K;
  f.phi = [K2](double s) { return s * std::exp(-s * s / (2.0 * K2)); };
  f.dphi = [K2](double s) {
    return std::exp(-s * s / (2.0 * K2)) * (1.0 - s * s / K2);
  };
  f.d2phi = [K2](double s) {
    return std::exp(-s * s / (2.0 * K2)) * s * (s * s - 3.0 * K2) / (K2 * K2);
  };
  return f;
}

FluxSpec linear_flux(double alpha, double beta) {
  if (!(alpha < beta))
    throw ConfigError("linear flux: alpha must be below beta");
  FluxSpec f;
  f.name = "linear";
  f.alpha = alpha;
  f.beta = beta;
  f.phi = [](double s) { return s; };
  f.dphi = [](double) { return 1.0; };
  f.d2phi = [](double) { return 0.0; };
  return f;
}

FluxSpec table_flux(const FluxParams& params) {
  const double alpha = require_scalar(params.scalars, "alpha", "user_table");
  const double beta = require_scalar(params.scalars, "beta", "user_table");
  if (!(alpha < beta))
    throw ConfigError("user_table: alpha must be below beta");
  if (params.table.size() < 8)
    throw ConfigError("user_table: need at least 8 (s, phi) points");

  auto pts = params.table;
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  std::vector<double> xs(pts.size()), ys(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xs[i] = pts[i][0];
    ys[i] = pts[i][1];
    if (i > 0 && !(xs[i] > xs[i - 1]))
      throw ConfigError("user_table: duplicate slope value in table");
  }

  const double span = xs.back() - xs.front();
  auto knot_index = [&](double s, const char* label) {
    std::size_t best = 0;
    double best_d = std::abs(xs[0] - s);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double d = std::abs(xs[i] - s);
      if (d < best_d) {
        best = i;
        best_d = d;
      }
    }
    if (best_d > 1e-6 * span)
      throw ConfigError(std::string("user_table: declared ") + label +
                        " does not coincide with a table knot");
    return best;
  };
  const std::size_t ka = knot_index(alpha, "alpha");
  const std::size_t kb = knot_index(beta, "beta");
  if (!(ka < kb) || ka == 0 || kb + 1 == xs.size())
    throw ConfigError(
        "user_table: alpha and beta must be interior knots with alpha < beta");

  // Secant slopes must run negative / positive / negative around the
  // declared critical slopes.
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double d = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    const bool inside = (i >= ka && i + 1 <= kb);
    if (inside ? d <= 0.0 : d >= 0.0)
      throw ConfigError(
          "user_table: declared alpha/beta are inconsistent with the table's "
          "slope sign pattern");
  }

  auto curve = std::make_shared<num::PiecewiseCubic>(
      xs, ys, num::pchip_tangents(xs, ys));
  FluxSpec f;
  f.name = "user_table";
  f.alpha = xs[ka];
  f.beta = xs[kb];
  f.phi = [curve](double s) { return curve->value(s); };
  f.dphi = [curve](double s) { return curve->deriv(s); };
  f.d2phi = [curve](double s) { return curve->second(s); };
  f.crit_tol = 1e-4;
  f.fd_tol = 1e-3;
  return f;
}

// C^1 monotone blend through (alpha, A) -> (beta, B), constant beyond.
std::function<double(double)> hermite_step(double alpha, double beta,
                                           double A, double B) {
  return [=](double y) {
    if (y <= alpha) return A;
    if (y >= beta) return B;
    return num::hermite(alpha, beta, A, B, 0.0, 0.0, y);
  };
}

}  // namespace

FluxSpec builtin_flux(const std::string& name, const FluxParams& params) {
  if (name == "perona_malik") {
    require_known_scalars(params.scalars, {}, "perona_malik");
    return perona_malik_flux();
  }
  if (name == "gaussian") {
    require_known_scalars(params.scalars, {"K"}, "gaussian");
    return gaussian_flux(scalar_or(params.scalars, "K", 1.0));
  }
  if (name == "linear") {
    require_known_scalars(params.scalars, {"alpha", "beta"}, "linear");
    return linear_flux(scalar_or(params.scalars, "alpha", -1.0),
                       scalar_or(params.scalars, "beta", 1.0));
  }
  if (name == "user_table") {
    require_known_scalars(params.scalars, {"alpha", "beta"}, "user_table");
    return table_flux(params);
  }
  throw ConfigError("unknown flux '" + name + "'");
}

ConvectionSpec builtin_convection(const std::string& name,
                                  const std::map<std::string, double>& params) {
  if (name == "zero") {
    require_known_scalars(params, {}, "zero convection");
    ConvectionSpec c;
    c.name = "zero";
    c.psi = [](double, double) { return 0.0; };
    c.dpsi_dx = [](double, double) { return 0.0; };
    c.A = 0.0;
    c.B = 0.0;
    return c;
  }

  const bool tapered = (name == "zero_extension");
  if (name != "separable_linear" && !tapered)
    throw ConfigError("unknown convection '" + name + "'");

  require_known_scalars(
      params, {"A", "B", "alpha", "beta", "window_low", "window_high", "taper"},
      name);
  const double A = require_scalar(params, "A", name);
  const double B = require_scalar(params, "B", name);
  const double alpha = require_scalar(params, "alpha", name);
  const double beta = require_scalar(params, "beta", name);
  if (A >= 0.0 || B >= 0.0)
    throw HypothesisError(name + ": A and B must be negative");
  if (!(alpha < beta))
    throw ConfigError(name + ": alpha must be below beta");

  std::function<double(double)> h;
  if (!tapered) {
    h = hermite_step(alpha, beta, A, B);
  } else {
    const double width = beta - alpha;
    const double wlo = scalar_or(params, "window_low", alpha - 0.5 * width);
    const double whi = scalar_or(params, "window_high", beta + 0.5 * width);
    const double taper = scalar_or(params, "taper", 0.25 * width);
    if (!(wlo <= alpha) || !(whi >= beta))
      throw ConfigError("zero_extension: window must contain [alpha, beta]");
    if (!(taper > 0.0)) throw ConfigError("zero_extension: taper must be > 0");
    auto core = hermite_step(alpha, beta, A, B);
    h = [=](double y) {
      if (y <= wlo - taper || y >= whi + taper) return 0.0;
      if (y < wlo) return num::hermite(wlo - taper, wlo, 0.0, A, 0.0, 0.0, y);
      if (y > whi) return num::hermite(whi, whi + taper, B, 0.0, 0.0, 0.0, y);
      return core(y);
    };
  }

  ConvectionSpec c;
  c.name = name;
  c.psi = [h](double x, double y) { return x * h(y); };
  c.dpsi_dx = [h](double, double y) { return h(y); };
  c.A = A;
  c.B = B;
  return c;
}

ExpansionRates rates(const FluxSpec& flux, const ConvectionSpec& conv) {
  const double ca = flux.d2phi(flux.alpha);
  const double cb = flux.d2phi(flux.beta);
  if (!(ca > 0.0))
    throw HypothesisError("rates: phi''(alpha) must be positive");
  if (!(cb < 0.0))
    throw HypothesisError("rates: phi''(beta) must be negative");
  ExpansionRates r;
  r.k0 = std::sqrt(2.0 * std::abs(conv.A * ca));
  r.k1 = std::sqrt(2.0 * std::abs(conv.B * cb));
  return r;
}

ModelValidationReport validate(const FluxSpec& flux,
                               const ConvectionSpec& conv,
                               const ValidationOptions& opts) {
  if (opts.samples < 100)
    throw std::invalid_argument("validate: need at least 100 samples");

  ModelValidationReport report;
  auto flux_bad = [&](const std::string& cond, double sample, double value) {
    report.violations.push_back({cond, sample, value});
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(-0.45, 0.45);
  auto sample_points = [&](double lo, double hi) {
    // Interior grid with seeded jitter; endpoints get a half-cell margin so
    // open-interval sign conditions are sampled strictly inside.
    std::vector<double> pts;
    const int m = opts.samples;
    const double step = (hi - lo) / m;
    pts.reserve(m);
    for (int i = 0; i < m; ++i)
      pts.push_back(lo + (i + 0.5 + jitter(rng)) * step);
    return pts;
  };

  const double alpha = flux.alpha, beta = flux.beta;
  if (!(alpha < beta)) flux_bad("alpha_lt_beta", alpha, beta - alpha);

  const bool finite_slopes = std::isfinite(alpha) && std::isfinite(beta);
  double S = opts.slope_radius;
  if (S <= 0.0)
    S = finite_slopes ? 10.0 * std::max(std::abs(alpha), std::abs(beta))
                      : 10.0;
  const double fd_h = 1e-5;
  auto check_fd = [&](double s) {
    const double fd = (flux.phi(s + fd_h) - flux.phi(s - fd_h)) / (2.0 * fd_h);
    const double err = std::abs(fd - flux.dphi(s));
    if (err > flux.fd_tol) flux_bad("flux_derivative_consistency", s, err);
  };

  if (finite_slopes) {
    for (double s : sample_points(alpha, beta)) {
      const double d = flux.dphi(s);
      if (!(d > 0.0)) flux_bad("dphi_positive_inside", s, d);
      check_fd(s);
    }
    const double lo_edge = std::min(-S, alpha - 1.0);
    const double hi_edge = std::max(S, beta + 1.0);
    for (double s : sample_points(lo_edge, alpha)) {
      const double d = flux.dphi(s);
      if (!(d < 0.0)) flux_bad("dphi_negative_outside", s, d);
      check_fd(s);
    }
    for (double s : sample_points(beta, hi_edge)) {
      const double d = flux.dphi(s);
      if (!(d < 0.0)) flux_bad("dphi_negative_outside", s, d);
      check_fd(s);
    }

    const double ca = flux.d2phi(alpha);
    const double cb = flux.d2phi(beta);
    if (!(ca > 0.0)) flux_bad("d2phi_alpha_positive", alpha, ca);
    if (!(cb < 0.0)) flux_bad("d2phi_beta_negative", beta, cb);
    if (std::abs(flux.dphi(alpha)) > flux.crit_tol)
      flux_bad("dphi_vanishes_at_alpha", alpha, flux.dphi(alpha));
    if (std::abs(flux.dphi(beta)) > flux.crit_tol)
      flux_bad("dphi_vanishes_at_beta", beta, flux.dphi(beta));
  } else {
    // Declared critical slopes at infinity can never satisfy the outside
    // sign condition on a bounded sample; record the hypothesis failure.
    for (double s : sample_points(-S, S)) {
      check_fd(s);
      (void)s;
    }
    flux_bad("dphi_negative_outside", S, flux.dphi(S));
  }

  const std::size_t flux_violations = report.violations.size();
  report.flux_ok = flux_violations == 0;

  auto conv_bad = flux_bad;
  if (!(conv.A < 0.0)) conv_bad("conv_A_negative", 0.0, conv.A);
  if (!(conv.B < 0.0)) conv_bad("conv_B_negative", 0.0, conv.B);
  const double conv_tol = 1e-8;
  for (double x : sample_points(opts.domain_lo, opts.domain_hi)) {
    if (finite_slopes) {
      const double da = conv.dpsi_dx(x, alpha);
      const double db = conv.dpsi_dx(x, beta);
      if (std::abs(da - conv.A) > conv_tol)
        conv_bad("psi_x_constant_at_alpha", x, da);
      if (std::abs(db - conv.B) > conv_tol)
        conv_bad("psi_x_constant_at_beta", x, db);
    }
    const double y = finite_slopes
                         ? alpha + (beta - alpha) * 0.5 * (1.0 + std::sin(x))
                         : std::sin(x);
    const double fd =
        (conv.psi(x + fd_h, y) - conv.psi(x - fd_h, y)) / (2.0 * fd_h);
    if (std::abs(fd - conv.dpsi_dx(x, y)) > 1e-6)
      conv_bad("conv_derivative_consistency", x,
               std::abs(fd - conv.dpsi_dx(x, y)));
  }
  report.convection_ok = report.violations.size() == flux_violations;

  try {
    const ExpansionRates r = rates(flux, conv);
    report.k0 = r.k0;
    report.k1 = r.k1;
  } catch (const HypothesisError&) {
    // Curvature-sign violations are already recorded above.
  }
  return report;
}

}  // namespace bfdc
