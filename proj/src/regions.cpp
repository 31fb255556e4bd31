#include "bfdc/regions.hpp"

#include <cmath>
#include <limits>

#include "bfdc/errors.hpp"
#include "bfdc/numerics.hpp"

namespace bfdc {

RegionLabels classify(std::span<const double> ux, const FluxSpec& flux,
                      double delta) {
  if (delta < 0.0) throw ConfigError("classify: delta must be >= 0");
  RegionLabels out;
  out.delta = delta;
  out.labels.resize(ux.size());
  const double a = flux.alpha, b = flux.beta;
  for (std::size_t i = 0; i < ux.size(); ++i) {
    const double s = ux[i];
    if (s > a + delta && s < b - delta)
      out.labels[i] = Label::sub;
    else if (s < a - delta || s > b + delta)
      out.labels[i] = Label::super;
    else
      out.labels[i] = Label::degenerate;
  }
  return out;
}

namespace {

// Maximal run of nodes satisfying `inside`, chosen so it holds the node
// closest to the anchor midpoint among all satisfying nodes; endpoints are
// interpolated at the level separating the component from its neighbor.
template <class Inside, class Level>
InterfacePositions component_endpoints(std::span<const double> ux,
                                       const Grid1D& grid, double a1,
                                       double b1, Inside inside,
                                       Level level_toward) {
  const int n = static_cast<int>(ux.size());
  const double xm = 0.5 * (a1 + b1);
  int seed = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (!inside(ux[i])) continue;
    const double d = std::abs(grid.x(i) - xm);
    if (d < best) {
      best = d;
      seed = i;
    }
  }
  InterfacePositions out;
  if (seed < 0) {
    out.collapsed = true;
    return out;
  }
  int lo = seed, hi = seed;
  while (lo > 0 && inside(ux[lo - 1])) --lo;
  while (hi + 1 < n && inside(ux[hi + 1])) ++hi;

  auto interp = [&](int i, int j, double lvl) {
    const double den = ux[j] - ux[i];
    if (den == 0.0) return grid.x(i);
    return grid.x(i) + (lvl - ux[i]) / den * (grid.x(j) - grid.x(i));
  };
  if (lo > 0) out.left = interp(lo - 1, lo, level_toward(ux[lo - 1]));
  if (hi + 1 < n) out.right = interp(hi, hi + 1, level_toward(ux[hi + 1]));
  return out;
}

}  // namespace

InterfacePositions interface_positions(std::span<const double> ux,
                                       const Grid1D& grid,
                                       const FluxSpec& flux, double a1,
                                       double b1) {
  const double a = flux.alpha, b = flux.beta;
  return component_endpoints(
      ux, grid, a1, b1, [&](double s) { return s > a && s < b; },
      [&](double outside) { return outside <= a ? a : b; });
}

InterfacePositions supercritical_positions(std::span<const double> ux,
                                           const Grid1D& grid,
                                           const FluxSpec& flux, double a1,
                                           double b1) {
  const double a = flux.alpha, b = flux.beta;
  // The crossing level belongs to the component's side: beta for a
  // component above the band, alpha for one below.
  bool above = true;
  {
    const double xm = 0.5 * (a1 + b1);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ux.size(); ++i) {
      if (!(ux[i] < a || ux[i] > b)) continue;
      const double d = std::abs(grid.x(static_cast<int>(i)) - xm);
      if (d < best) {
        best = d;
        above = ux[i] > b;
      }
    }
  }
  const double lvl = above ? b : a;
  return component_endpoints(
      ux, grid, a1, b1,
      [&](double s) { return above ? s > b : s < a; },
      [lvl](double) { return lvl; });
}

namespace {

InterfaceTrack track_impl(const Trajectory& traj, const FluxSpec& flux,
                          double delta, double a1, double b1,
                          bool supercritical) {
  InterfaceTrack track;
  track.domain_a = traj.grid.a;
  track.domain_b = traj.grid.b;
  const double h = traj.grid.h();
  for (const SimState& s : traj.samples) {
    const std::vector<double> ux = gradient(s, traj.grid);
    const RegionLabels labels = classify(ux, flux, delta);
    int n_sub = 0, n_super = 0, n_deg = 0;
    for (Label l : labels.labels) {
      if (l == Label::sub)
        ++n_sub;
      else if (l == Label::super)
        ++n_super;
      else
        ++n_deg;
    }
    const InterfacePositions pos =
        supercritical
            ? supercritical_positions(ux, traj.grid, flux, a1, b1)
            : interface_positions(ux, traj.grid, flux, a1, b1);
    track.times.push_back(s.t);
    track.left_pos.push_back(pos.left);
    track.right_pos.push_back(pos.right);
    track.sub_measure.push_back(h * n_sub);
    track.super_measure.push_back(h * n_super);
    track.degen_measure.push_back(h * n_deg);
    track.collapsed.push_back(pos.collapsed);
  }
  return track;
}

}  // namespace

InterfaceTrack track_interfaces(const Trajectory& traj, const FluxSpec& flux,
                                double delta, double a1, double b1) {
  return track_impl(traj, flux, delta, a1, b1, false);
}

InterfaceTrack track_supercritical(const Trajectory& traj,
                                   const FluxSpec& flux, double delta,
                                   double a1, double b1) {
  return track_impl(traj, flux, delta, a1, b1, true);
}

RateReport fit_rates(const InterfaceTrack& track, const ExpansionRates& rates,
                     double t_lo, double t_hi, double a1, double b1,
                     double pos_tol) {
  RateReport rep;
  rep.k0_theory = rates.k0;
  rep.k1_theory = rates.k1;
  rep.fit_t_lo = t_lo;
  rep.fit_t_hi = t_hi;

  std::vector<double> ts, ls, rs;
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    const double t = track.times[i];
    if (t < t_lo || t > t_hi) continue;
    if (track.collapsed[i] || !track.left_pos[i] || !track.right_pos[i])
      throw FitError("fit_rates: interface absent inside the fit window");
    ts.push_back(t);
    ls.push_back(*track.left_pos[i]);
    rs.push_back(*track.right_pos[i]);
  }
  if (ts.size() < 10)
    throw FitError("fit_rates: fewer than 10 samples in the fit window");

  const num::LinearFit fl = num::linear_fit(ts, ls);
  const num::LinearFit fr = num::linear_fit(ts, rs);
  rep.left_speed_fit = -fl.slope;
  rep.right_speed_fit = fr.slope;
  // Pooled rms over both fits (equal sample counts).
  rep.fit_residual = std::sqrt(0.5 * (fl.rms * fl.rms + fr.rms * fr.rms));

  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    const double t = track.times[i];
    if (track.collapsed[i]) {
      margin = -std::numeric_limits<double>::infinity();
      break;
    }
    const double left =
        track.left_pos[i] ? *track.left_pos[i] : track.domain_a;
    const double right =
        track.right_pos[i] ? *track.right_pos[i] : track.domain_b;
    const double m_left = (a1 - rates.k0 * t) - left;
    const double m_right = right - (b1 + rates.k1 * t);
    margin = std::min(margin, std::min(m_left, m_right));
  }
  rep.g_margin = margin;
  rep.g_containment = margin >= -pos_tol;
  return rep;
}

}  // namespace bfdc
