#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bfdc/model.hpp"

namespace bfdc {

enum class Side { upper, lower };

std::string to_string(Side side);

// Clamped flux eta: agrees with phi on the match interval, is constant at
// phi of the nearby critical slope beyond it, and levels off at a far
// plateau reached through a C^1 cubic blend.
//   upper: eta = phi on [(alpha+beta)/2, beta], phi(beta) above beta,
//          plateau below s_flat = (3*alpha+beta)/4
//   lower: eta = phi on [alpha, (alpha+beta)/2], phi(alpha) below alpha,
//          plateau above s_flat = (alpha+3*beta)/4
struct EtaFunction {
  Side side = Side::upper;
  std::function<double(double)> eta;
  double s_flat = 0.0;        // boundary of the far plateau
  double s_match_low = 0.0;   // eta == phi on [s_match_low, s_match_high]
  double s_match_high = 0.0;
  FluxSpec flux;
};

EtaFunction build_eta(const FluxSpec& flux, Side side);

// Inverse of eta restricted to its strictly increasing branch:
// ((alpha+beta)/2, beta) for the upper side, (alpha, (alpha+beta)/2) for
// the lower. y must lie strictly inside the branch image; bisection to
// 1e-12 in sigma.
double eta_inverse(const EtaFunction& etafn, double y);

// Degenerate diffusivity in the transformed variable:
//   upper: g(sigma)  = phi'(eta^{-1}(phi(beta) - sigma))
//   lower: g(sigma)  = phi'(eta^{-1}(phi(alpha) + sigma))
// defined on the open interval (0, domain_sup); vanishes like K*sqrt(sigma)
// as sigma -> 0+.
struct GFunction {
  Side side = Side::upper;
  std::function<double(double)> g;
  double domain_sup = 0.0;
  double K = 0.0;
};

GFunction build_g(const FluxSpec& flux, Side side);

// Extrapolated estimate of lim_{sigma->0+} g(sigma)^2 / sigma from samples
// at the given strictly decreasing positive sigmas (at least 4, all inside
// the domain). Throws EstimationError with the raw g^2/sigma sequence when
// the extrapolants fail to settle monotonically.
double g_limit_estimate(const GFunction& gfn,
                        std::span<const double> sigmas);

// Transformed field: upper v_i = phi(beta) - eta(ux_i), lower
// v_i = eta(ux_i) - phi(alpha). Nonnegative, and exactly zero once ux
// passes the nearby critical slope.
std::vector<double> v_field(const EtaFunction& etafn,
                            std::span<const double> ux);

}  // namespace bfdc
