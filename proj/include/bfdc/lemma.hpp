#pragma once

#include <optional>
#include <vector>

#include "bfdc/model.hpp"
#include "bfdc/solver.hpp"
#include "bfdc/transform.hpp"

namespace bfdc {

// Direct simulation of the degenerate comparison equation
// v_t = g(v)(v_xx + f) with zero Dirichlet data at x1 and x4, initial
// profile positive exactly on (x2, x3). Its positivity set should expand
// at least at speed K*sqrt(C).
struct LemmaConfig {
  double K = 1.0;  // sqrt-limit constant of g (sqrt_exact kind), > 0
  double C = 1.0;  // forcing level, > 0

  enum class GKind { sqrt_exact, from_flux_upper, from_flux_lower };
  GKind g_kind = GKind::sqrt_exact;
  FluxSpec flux;  // from_flux_* kinds; K then comes from the flux curvature

  enum class FKind { constant, perturbed };
  FKind f_kind = FKind::constant;
  double p = 0.0;  // perturbed: f = C + p*sin(x)*v + q*v_x
  double q = 0.0;

  double x1 = -6.0, x2 = -1.0, x3 = 1.0, x4 = 6.0;  // x1 <= x2 < x3 <= x4

  enum class V0Kind { parabola, tent };
  V0Kind v0_kind = V0Kind::parabola;
  double v0_amp = 1.0;

  int n = 0;  // >= 16
  TimeControls time;
};

// The sqrt coefficient the run actually uses: config K for sqrt_exact,
// the flux-derived constant for from_flux_*.
double effective_K(const LemmaConfig& config);

std::vector<double> lemma_initial(const LemmaConfig& config,
                                  const Grid1D& grid);

// Explicit Euler on v_t = g(v)(v_xx + f) with face-averaged diffusivity,
// v clamped at 0 after each step. CFL: dt = safety*h^2/(2*max_face g).
Trajectory simulate_lemma(const LemmaConfig& config);

struct FrontTrack {
  std::vector<double> times;
  std::vector<std::optional<double>> left_front;   // edges of {v > thresh},
  std::vector<std::optional<double>> right_front;  // sub-grid interpolated
};

// v_thresh <= 0 selects the default 1e-10 * max of the first sample.
FrontTrack front_track(const Trajectory& traj, double v_thresh = 0.0);

struct FrontSpeeds {
  double left = 0.0;   // outward speed of the left front (positive =
  double right = 0.0;  // expanding), least-squares over the window
};

FrontSpeeds fit_front_speeds(const FrontTrack& track, double t_lo,
                             double t_hi);

struct LemmaVerdict {
  bool pass = false;
  double margin = 0.0;  // worst slack against the K*sqrt(C) lines
};

// True iff at every sample t: left_front <= x2 - K*sqrt(C)*t + tol(t) and
// right_front >= x3 + K*sqrt(C)*t - tol(t), with tol(t) = tol_abs +
// tol_rate * t.
LemmaVerdict lemma_verdict(const FrontTrack& track, double K, double C,
                           double x2, double x3, double tol_abs,
                           double tol_rate = 0.0);

}  // namespace bfdc
