#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bfdc/model.hpp"
#include "bfdc/solver.hpp"

namespace bfdc {

enum class Label { sub, super, degenerate };

// Per-node slope classification with half-width delta:
//   sub         alpha+delta < ux < beta-delta   (forward diffusion)
//   super       ux < alpha-delta or ux > beta+delta  (backward diffusion)
//   degenerate  otherwise
// delta = 0 reproduces the exact sets.
struct RegionLabels {
  std::vector<Label> labels;
  double delta = 0.0;
};

RegionLabels classify(std::span<const double> ux, const FluxSpec& flux,
                      double delta);

struct InterfacePositions {
  std::optional<double> left;   // absent when the component touches a
  std::optional<double> right;  // domain boundary
  bool collapsed = false;       // no node of the sought kind at all
};

// Endpoints of the subcritical component nearest the anchor midpoint
// (a1+b1)/2, located by linear interpolation of ux across the critical
// level between the bracketing nodes.
InterfacePositions interface_positions(std::span<const double> ux,
                                       const Grid1D& grid,
                                       const FluxSpec& flux, double a1,
                                       double b1);

// Same anchoring rule for a supercritical component (used by the
// time-reversed experiment); crossings at beta when the component lies
// above it, at alpha when below.
InterfacePositions supercritical_positions(std::span<const double> ux,
                                           const Grid1D& grid,
                                           const FluxSpec& flux, double a1,
                                           double b1);

struct InterfaceTrack {
  std::vector<double> times;
  std::vector<std::optional<double>> left_pos;
  std::vector<std::optional<double>> right_pos;
  std::vector<double> sub_measure;    // h * node counts
  std::vector<double> super_measure;
  std::vector<double> degen_measure;
  std::vector<bool> collapsed;
  double domain_a = 0.0;
  double domain_b = 0.0;
};

InterfaceTrack track_interfaces(const Trajectory& traj, const FluxSpec& flux,
                                double delta, double a1, double b1);

// As above but left_pos/right_pos follow the anchored supercritical
// component.
InterfaceTrack track_supercritical(const Trajectory& traj,
                                   const FluxSpec& flux, double delta,
                                   double a1, double b1);

struct RateReport {
  double k0_theory = 0.0;
  double k1_theory = 0.0;
  double left_speed_fit = 0.0;   // negative of fitted d(left_pos)/dt
  double right_speed_fit = 0.0;  // fitted d(right_pos)/dt
  double fit_t_lo = 0.0;
  double fit_t_hi = 0.0;
  double fit_residual = 0.0;     // pooled rms over both fits
  bool g_containment = false;
  double g_margin = 0.0;
};

// Least-squares interface speeds over [t_lo, t_hi] plus the containment
// check: at every sample the measured subcritical interval must contain
// (a1 - k0*t, b1 + k1*t) up to pos_tol. g_margin is the worst signed
// slack; g_containment is g_margin >= -pos_tol. A sample whose component
// touches a domain boundary counts the boundary as its endpoint; a
// collapsed sample fails containment outright.
RateReport fit_rates(const InterfaceTrack& track, const ExpansionRates& rates,
                     double t_lo, double t_hi, double a1, double b1,
                     double pos_tol);

}  // namespace bfdc
