#include "bfdc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "bfdc/errors.hpp"
#include "bfdc/numerics.hpp"

namespace bfdc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

ModelValidationReport validate_model(const SimConfig& config,
                                     const FluxSpec& flux,
                                     const ConvectionSpec& conv) {
  ValidationOptions opts;
  opts.domain_lo = config.a;
  opts.domain_hi = config.b;
  opts.samples = config.model.validation_samples;
  opts.slope_radius = config.model.slope_radius;
  opts.seed = config.seed;
  return validate(flux, conv, opts);
}

}  // namespace

Trajectory simulate(const SimConfig& config) {
  const FluxSpec flux = flux_of(config);
  const ConvectionSpec conv = convection_of(config);
  const Grid1D grid = grid_of(config);
  SimState state0;
  state0.t = 0.0;
  state0.u = build_initial(config.initial, grid);
  return integrate(state0, grid, flux, conv, config.bc, config.time);
}

MainRunResult run_main(const SimConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const FluxSpec flux = flux_of(config);
  const ConvectionSpec conv = convection_of(config);

  MainRunResult res;
  res.validation = validate_model(config, flux, conv);
  if (config.model.require_valid &&
      (!res.validation.flux_ok || !res.validation.convection_ok))
    throw HypothesisError(
        "model validation failed with " +
        std::to_string(res.validation.violations.size()) + " violation(s)");

  res.traj = simulate(config);
  res.track = track_interfaces(res.traj, flux, config.regions.delta,
                               config.initial.a1, config.initial.b1);
  try {
    const ExpansionRates th = rates(flux, conv);
    res.rate = fit_rates(res.track, th, config.regions.fit_t_lo,
                         config.regions.fit_t_hi, config.initial.a1,
                         config.initial.b1, config.regions.pos_tol);
    res.rate_present = true;
  } catch (const HypothesisError&) {
  } catch (const FitError&) {
  }
  res.wall_seconds = seconds_since(t0);
  return res;
}

TimeReversedResult time_reversed_experiment(const SimConfig& config,
                                            double width_slack) {
  const FluxSpec flux = flux_of(config);
  const ConvectionSpec conv = convection_of(config);
  if (config.model.require_valid) {
    const ModelValidationReport rep = validate_model(config, flux, conv);
    if (!rep.flux_ok || !rep.convection_ok)
      throw HypothesisError("model validation failed with " +
                            std::to_string(rep.violations.size()) +
                            " violation(s)");
  }
  const ExpansionRates th = rates(flux, conv);

  const Trajectory traj = simulate(config);
  TimeReversedResult res;
  res.track = track_supercritical(traj, flux, config.regions.delta,
                                  config.initial.a1, config.initial.b1);
  res.k0_theory = th.k0;
  res.k1_theory = th.k1;

  const InterfaceTrack& track = res.track;
  if (track.collapsed.empty() || track.collapsed.front() ||
      !track.left_pos.front() || !track.right_pos.front())
    throw FitError("time-reversed: supercritical component absent at t=0");
  res.w0 = *track.right_pos.front() - *track.left_pos.front();

  const double slack =
      width_slack >= 0.0 ? width_slack : 4.0 * traj.grid.h();
  res.width_margin = std::numeric_limits<double>::infinity();
  std::vector<double> ts, ls, rs;
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    if (track.collapsed[i] || !track.left_pos[i] || !track.right_pos[i])
      continue;
    const double t = track.times[i];
    const double w = *track.right_pos[i] - *track.left_pos[i];
    if (w > 0.0) {
      const double bound = res.w0 - (th.k0 + th.k1) * t + slack;
      res.width_margin = std::min(res.width_margin, bound - w);
    }
    if (t >= config.regions.fit_t_lo && t <= config.regions.fit_t_hi) {
      ts.push_back(t);
      ls.push_back(*track.left_pos[i]);
      rs.push_back(*track.right_pos[i]);
    }
  }
  res.width_bound_ok = res.width_margin >= 0.0;
  if (ts.size() >= 10) {
    res.speeds_present = true;
    res.shrink_left_speed = num::linear_fit(ts, ls).slope;
    res.shrink_right_speed = -num::linear_fit(ts, rs).slope;
  }
  return res;
}

LemmaRunResult run_lemma(const LemmaRunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  LemmaRunResult res;
  res.traj = simulate_lemma(config.core);
  res.track = front_track(res.traj, config.v_thresh);
  res.k_used = effective_K(config.core);
  res.verdict = lemma_verdict(res.track, res.k_used, config.core.C,
                              config.core.x2, config.core.x3, config.tol_abs,
                              config.tol_rate);
  try {
    res.speeds = fit_front_speeds(res.track, config.fit_t_lo, config.fit_t_hi);
    res.speeds_present = true;
  } catch (const FitError&) {
  }
  res.wall_seconds = seconds_since(t0);
  return res;
}

}  // namespace bfdc
