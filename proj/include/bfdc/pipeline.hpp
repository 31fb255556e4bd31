#pragma once

#include "bfdc/config.hpp"
#include "bfdc/lemma.hpp"
#include "bfdc/regions.hpp"

namespace bfdc {

// Integrates the configured run (model, grid, initial profile, boundary
// data, time controls).
Trajectory simulate(const SimConfig& config);

struct MainRunResult {
  ModelValidationReport validation;
  Trajectory traj;
  InterfaceTrack track;
  bool rate_present = false;  // fit may be unavailable (no finite rates,
  RateReport rate;            // absent interfaces, short window)
  double wall_seconds = 0.0;
};

// validate -> simulate -> track -> fit. Throws HypothesisError when the
// model fails validation and the config demands a valid one.
MainRunResult run_main(const SimConfig& config);

struct TimeReversedResult {
  InterfaceTrack track;
  double k0_theory = 0.0;
  double k1_theory = 0.0;
  bool speeds_present = false;
  double shrink_left_speed = 0.0;   // inward speeds of the supercritical
  double shrink_right_speed = 0.0;  // component's endpoints
  double w0 = 0.0;                  // measured initial width
  // Worst slack of w(t) <= w0 - (k0+k1)t + slack over samples with
  // positive width.
  double width_margin = 0.0;
  bool width_bound_ok = false;
};

// Tracks an interior supercritical component and checks that it shrinks at
// least at the combined theoretical rate. width_slack < 0 selects the
// default 4h.
TimeReversedResult time_reversed_experiment(const SimConfig& config,
                                            double width_slack = -1.0);

struct LemmaRunResult {
  Trajectory traj;
  FrontTrack track;
  bool speeds_present = false;
  FrontSpeeds speeds;
  LemmaVerdict verdict;
  double k_used = 0.0;
  double wall_seconds = 0.0;
};

LemmaRunResult run_lemma(const LemmaRunConfig& config);

}  // namespace bfdc
