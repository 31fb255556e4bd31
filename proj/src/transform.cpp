#include "bfdc/transform.hpp"

#include <cmath>
#include <stdexcept>

#include "bfdc/errors.hpp"
#include "bfdc/numerics.hpp"

namespace bfdc {

std::string to_string(Side side) {
  return side == Side::upper ? "upper" : "lower";
}

EtaFunction build_eta(const FluxSpec& flux, Side side) {
  const double alpha = flux.alpha, beta = flux.beta;
  const double mid = 0.5 * (alpha + beta);

  EtaFunction e;
  e.side = side;
  e.flux = flux;
  if (side == Side::upper) {
    e.s_flat = 0.25 * (3.0 * alpha + beta);
    e.s_match_low = mid;
    e.s_match_high = beta;
    const double flat_val = flux.phi(e.s_flat);
    const double mid_val = flux.phi(mid);
    const double mid_slope = flux.dphi(mid);
    const double top_val = flux.phi(beta);
    const double s_flat = e.s_flat;
    auto phi = flux.phi;
    e.eta = [=](double s) {
      if (s >= beta) return top_val;
      if (s >= mid) return phi(s);
      if (s <= s_flat) return flat_val;
      return num::hermite(s_flat, mid, flat_val, mid_val, 0.0, mid_slope, s);
    };
  } else {
    e.s_flat = 0.25 * (alpha + 3.0 * beta);
    e.s_match_low = alpha;
    e.s_match_high = mid;
    const double flat_val = flux.phi(e.s_flat);
    const double mid_val = flux.phi(mid);
    const double mid_slope = flux.dphi(mid);
    const double low_val = flux.phi(alpha);
    const double s_flat = e.s_flat;
    auto phi = flux.phi;
    e.eta = [=](double s) {
      if (s <= alpha) return low_val;
      if (s <= mid) return phi(s);
      if (s >= s_flat) return flat_val;
      return num::hermite(mid, s_flat, mid_val, flat_val, mid_slope, 0.0, s);
    };
  }
  return e;
}

namespace {

// Strictly increasing branch of eta and its open image interval.
struct Branch {
  double s_lo, s_hi;  // slope interval
  double y_lo, y_hi;  // image interval
};

Branch branch_of(const EtaFunction& e) {
  const double a = e.flux.alpha, b = e.flux.beta;
  const double mid = 0.5 * (a + b);
  if (e.side == Side::upper)
    return {mid, b, e.flux.phi(mid), e.flux.phi(b)};
  return {a, mid, e.flux.phi(a), e.flux.phi(mid)};
}

}  // namespace

double eta_inverse(const EtaFunction& etafn, double y) {
  const Branch br = branch_of(etafn);
  if (!(y > br.y_lo) || !(y < br.y_hi))
    throw std::domain_error("eta_inverse: value outside the open branch image");
  return num::bisect(etafn.eta, br.s_lo, br.s_hi, y, 1e-12);
}

GFunction build_g(const FluxSpec& flux, Side side) {
  auto etafn = build_eta(flux, side);
  const Branch br = branch_of(etafn);

  GFunction gf;
  gf.side = side;
  gf.domain_sup = br.y_hi - br.y_lo;
  const double ref = side == Side::upper ? flux.phi(flux.beta)
                                         : flux.phi(flux.alpha);
  const double sup = gf.domain_sup;
  auto dphi = flux.dphi;
  const double curv = side == Side::upper ? flux.d2phi(flux.beta)
                                          : flux.d2phi(flux.alpha);
  const double K = std::sqrt(2.0 * std::abs(curv));
  gf.g = [etafn, dphi, ref, sup, side, K](double sigma) {
    if (!(sigma > 0.0) || !(sigma < sup))
      throw std::domain_error("g: sigma outside the open domain interval");
    // Below this level ref -+ sigma rounds onto the branch endpoint; the
    // asymptotic K*sqrt(sigma) is exact to O(sigma) there.
    if (sigma < 1e-12) return K * std::sqrt(sigma);
    const double y = side == Side::upper ? ref - sigma : ref + sigma;
    return dphi(eta_inverse(etafn, y));
  };
  gf.K = K;
  return gf;
}

double g_limit_estimate(const GFunction& gfn,
                        std::span<const double> sigmas) {
  if (sigmas.size() < 4)
    throw std::invalid_argument("g_limit_estimate: need at least 4 sigmas");
  std::vector<double> t(sigmas.size()), r(sigmas.size());
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const double s = sigmas[i];
    if (!(s > 0.0) || !(s < gfn.domain_sup))
      throw std::invalid_argument("g_limit_estimate: sigma outside domain");
    if (i > 0 && !(s < sigmas[i - 1]))
      throw std::invalid_argument(
          "g_limit_estimate: sigmas must be strictly decreasing");
    const double gv = gfn.g(s);
    t[i] = std::sqrt(s);
    r[i] = gv * gv / s;
  }

  // g behaves like K*sqrt(sigma)*(1 + c1*sqrt(sigma) + ...), so g^2/sigma is
  // smooth in t = sqrt(sigma); extrapolate that polynomial to t = 0.
  const std::vector<double> est = num::extrapolate_to_zero(t, r, 3);
  const double E = est.back();
  // The floor absorbs eta_inverse bisection noise, which the division by
  // sigma amplifies to ~1e-9 in the deepest extrapolants.
  const double floor = 1e-8 * (std::abs(E) + 1.0);
  for (std::size_t i = 3; i + 1 < est.size(); ++i) {
    const double d0 = std::abs(est[i] - E);
    const double d1 = std::abs(est[i + 1] - E);
    if (d1 > d0 + floor)
      throw EstimationError("g_limit_estimate: extrapolant tail not settling",
                            r);
  }
  return E;
}

std::vector<double> v_field(const EtaFunction& etafn,
                            std::span<const double> ux) {
  const double ref = etafn.side == Side::upper
                         ? etafn.flux.phi(etafn.flux.beta)
                         : etafn.flux.phi(etafn.flux.alpha);
  std::vector<double> v(ux.size());
  for (std::size_t i = 0; i < ux.size(); ++i)
    v[i] = etafn.side == Side::upper ? ref - etafn.eta(ux[i])
                                     : etafn.eta(ux[i]) - ref;
  return v;
}

}  // namespace bfdc
