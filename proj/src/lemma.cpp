#include "bfdc/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "bfdc/errors.hpp"
#include "bfdc/numerics.hpp"

namespace bfdc {

namespace {

void validate_lemma(const LemmaConfig& c) {
  if (c.g_kind == LemmaConfig::GKind::sqrt_exact && !(c.K > 0.0))
    throw ConfigError("lemma: K must be positive");
  if (!(c.C > 0.0)) throw ConfigError("lemma: C must be positive");
  if (!(c.x1 <= c.x2) || !(c.x3 <= c.x4))
    throw ConfigError("lemma: need x1 <= x2 <= x3 <= x4");
  if (!(c.x2 < c.x3))
    throw ConfigError(
        "lemma: x2 must be below x3 (the initial profile has to be positive "
        "somewhere)");
  if (c.n < 16) throw ConfigError("lemma: need n >= 16");
  if (!(c.v0_amp > 0.0)) throw ConfigError("lemma: v0_amp must be positive");
}

// Diffusivity with the clamp the scheme relies on: exactly 0 at and below
// 0 so untouched nodes stay frozen, capped just inside the open domain of
// a flux-derived g.
std::function<double(double)> make_gval(const LemmaConfig& c) {
  if (c.g_kind == LemmaConfig::GKind::sqrt_exact) {
    const double K = c.K;
    return [K](double s) { return s <= 0.0 ? 0.0 : K * std::sqrt(s); };
  }
  const Side side = c.g_kind == LemmaConfig::GKind::from_flux_upper
                        ? Side::upper
                        : Side::lower;
  GFunction gf = build_g(c.flux, side);
  const double cap = gf.domain_sup - 1e-14 * (1.0 + gf.domain_sup);
  return [gf, cap](double s) {
    if (s <= 0.0) return 0.0;
    return gf.g(std::min(s, cap));
  };
}

}  // namespace

double effective_K(const LemmaConfig& config) {
  if (config.g_kind == LemmaConfig::GKind::sqrt_exact) return config.K;
  const Side side = config.g_kind == LemmaConfig::GKind::from_flux_upper
                        ? Side::upper
                        : Side::lower;
  return build_g(config.flux, side).K;
}

std::vector<double> lemma_initial(const LemmaConfig& config,
                                  const Grid1D& grid) {
  const double x2 = config.x2, x3 = config.x3, amp = config.v0_amp;
  const double w = x3 - x2;
  std::vector<double> v(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    double s;
    if (config.v0_kind == LemmaConfig::V0Kind::parabola)
      s = 4.0 * (x - x2) * (x3 - x) / (w * w);
    else
      s = 2.0 * std::min(x - x2, x3 - x) / w;
    v[i] = amp * std::max(0.0, s);
  }
  v.front() = 0.0;
  v.back() = 0.0;
  return v;
}

Trajectory simulate_lemma(const LemmaConfig& config) {
  validate_lemma(config);
  const Grid1D grid(config.x1, config.x4, config.n);
  const auto gval = make_gval(config);
  const TimeControls& tc = config.time;

  Trajectory traj;
  traj.grid = grid;
  SimState state;
  state.t = 0.0;
  state.u = lemma_initial(config, grid);
  traj.samples.push_back(state);
  traj.diagnostics.min_dt = std::numeric_limits<double>::infinity();
  if (tc.t_end <= 0.0) {
    traj.diagnostics.min_dt = 0.0;
    return traj;
  }
  if (!(tc.sample_interval > 0.0))
    throw ConfigError("lemma: sample_interval must be positive");
  if (!(tc.safety > 0.0) || tc.safety > 1.0)
    throw ConfigError("lemma: safety must be in (0, 1]");

  const int n = grid.n;
  const double h = grid.h();
  const double floor = tc.dt_floor > 0.0 ? tc.dt_floor : 1e-10 * tc.t_end;
  const double tiny = 1e-12 * std::max(tc.t_end, 1.0);
  const bool perturbed = config.f_kind == LemmaConfig::FKind::perturbed;
  // The source is non-Lipschitz at v = 0 (g(v)*f ~ K*f*sqrt(v)), so the
  // zero state can ignite spontaneously; gating it below a mesh-scale
  // level selects the compact-support solution. The gate vanishes under
  // refinement, keeping the scheme consistent.
  const double source_gate = 0.1 * config.C * h * h;

  std::vector<double> gface(n - 1), next(n);
  long k = 1;
  while (tc.t_end - state.t > tiny) {
    const std::vector<double>& v = state.u;
    double gmax = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
      gface[j] = gval(0.5 * (v[j] + v[j + 1]));
      gmax = std::max(gmax, gface[j]);
    }
    double dt;
    if (tc.fixed_dt > 0.0) {
      dt = tc.fixed_dt;
    } else if (gmax == 0.0) {
      dt = floor;
      traj.diagnostics.stiff = true;
    } else {
      dt = tc.safety * h * h / (2.0 * gmax);
      if (dt < floor) {
        dt = floor;
        traj.diagnostics.stiff = true;
      }
    }
    const double target = std::min(k * tc.sample_interval, tc.t_end);
    dt = std::min(dt, target - state.t);

    next[0] = 0.0;
    next[n - 1] = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      const double gbar = 0.5 * (gface[i - 1] + gface[i]);
      const double lap = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / (h * h);
      double b = lap;
      if (v[i] > source_gate) {
        double f = config.C;
        if (perturbed)
          f += config.p * std::sin(grid.x(i)) * v[i] +
               config.q * (v[i + 1] - v[i - 1]) / (2.0 * h);
        b += f * std::min(1.0, v[i] / source_gate - 1.0);
      }
      next[i] = std::max(0.0, v[i] + dt * gbar * b);
      if (!std::isfinite(next[i])) {
        traj.diagnostics.blew_up = true;
        traj.diagnostics.blowup_node = i;
        traj.diagnostics.blowup_t = state.t;
        return traj;
      }
    }
    state.u = next;
    state.t += dt;
    traj.dt_history.push_back(dt);
    traj.diagnostics.min_dt = std::min(traj.diagnostics.min_dt, dt);
    traj.diagnostics.max_dt = std::max(traj.diagnostics.max_dt, dt);
    ++traj.diagnostics.steps;
    if (state.t >= target - tiny) {
      state.t = target;  // snap off the last-step rounding
      traj.samples.push_back(state);
      ++k;
    }
  }
  if (traj.diagnostics.steps == 0) traj.diagnostics.min_dt = 0.0;
  return traj;
}

FrontTrack front_track(const Trajectory& traj, double v_thresh) {
  if (traj.samples.empty()) return {};
  double thresh = v_thresh;
  if (thresh <= 0.0) {
    double m = 0.0;
    for (double v : traj.samples.front().u) m = std::max(m, v);
    thresh = 1e-10 * m;
  }
  FrontTrack track;
  const Grid1D& grid = traj.grid;
  const int n = grid.n;
  for (const SimState& s : traj.samples) {
    const auto& v = s.u;
    int lo = -1, hi = -1;
    for (int i = 0; i < n; ++i)
      if (v[i] > thresh) {
        if (lo < 0) lo = i;
        hi = i;
      }
    track.times.push_back(s.t);
    if (lo < 0) {
      track.left_front.push_back(std::nullopt);
      track.right_front.push_back(std::nullopt);
      continue;
    }
    double left = grid.a;
    if (lo > 0)
      left = grid.x(lo - 1) +
             (thresh - v[lo - 1]) / (v[lo] - v[lo - 1]) * grid.h();
    double right = grid.b;
    if (hi + 1 < n)
      right = grid.x(hi) +
              (thresh - v[hi]) / (v[hi + 1] - v[hi]) * grid.h();
    track.left_front.push_back(left);
    track.right_front.push_back(right);
  }
  return track;
}

FrontSpeeds fit_front_speeds(const FrontTrack& track, double t_lo,
                             double t_hi) {
  std::vector<double> ts, ls, rs;
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    const double t = track.times[i];
    if (t < t_lo || t > t_hi) continue;
    if (!track.left_front[i] || !track.right_front[i])
      throw FitError("fit_front_speeds: front absent inside the fit window");
    ts.push_back(t);
    ls.push_back(*track.left_front[i]);
    rs.push_back(*track.right_front[i]);
  }
  if (ts.size() < 10)
    throw FitError("fit_front_speeds: fewer than 10 samples in the window");
  FrontSpeeds out;
  out.left = -num::linear_fit(ts, ls).slope;
  out.right = num::linear_fit(ts, rs).slope;
  return out;
}

LemmaVerdict lemma_verdict(const FrontTrack& track, double K, double C,
                           double x2, double x3, double tol_abs,
                           double tol_rate) {
  if (track.times.empty())
    throw FitError("lemma_verdict: empty front track");
  const double k0 = K * std::sqrt(C);
  LemmaVerdict verdict;
  verdict.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    if (!track.left_front[i] || !track.right_front[i])
      throw FitError("lemma_verdict: front absent at sample " +
                     std::to_string(i));
    const double t = track.times[i];
    const double tol = tol_abs + tol_rate * t;
    const double m_left = (x2 - k0 * t + tol) - *track.left_front[i];
    const double m_right = *track.right_front[i] - (x3 + k0 * t - tol);
    verdict.margin = std::min(verdict.margin, std::min(m_left, m_right));
  }
  verdict.pass = verdict.margin >= 0.0;
  return verdict;
}

}  // namespace bfdc
