// Acceptance gate: one line per criterion, exit code = number of failures.
// Every tolerance is pinned here as a named constant.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfdc/config.hpp"
#include "bfdc/csv.hpp"
#include "bfdc/errors.hpp"
#include "bfdc/lemma.hpp"
#include "bfdc/model.hpp"
#include "bfdc/pipeline.hpp"
#include "bfdc/regions.hpp"
#include "bfdc/solver.hpp"
#include "bfdc/transform.hpp"

using namespace bfdc;
namespace fs = std::filesystem;

namespace {

constexpr double kA2MaxError = 5e-3;    // L-inf error vs the heat solution
constexpr double kA2MinRatio = 3.5;     // error drop when halving h
constexpr double kA5Tolerance = 0.01;   // relative error of the g limit
constexpr double kMassDriftTol = 1e-10; // relative, zero-convection runs
constexpr int kPropertyCases = 1000;    // randomized cases per family

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path config_dir() { return fs::path(ACCEPTANCE_CONFIG_DIR); }

bool report(const char* id, bool pass, const std::string& detail) {
  std::cout << id << (pass ? " PASS " : " FAIL ") << detail << "\n";
  return pass;
}

std::string fmt(double v) { return format_double(v); }

// A1: canonical expanding-interval run. The measured subcritical component
// must contain (a1 - k0 t, b1 + k1 t) at every sample within pos_tol = 2h.
bool criterion_a1() {
  const SimConfig cfg =
      parse_sim_config(slurp(config_dir() / "canonical.json"));
  const MainRunResult res = run_main(cfg);
  std::ostringstream d;
  if (!res.rate_present) {
    d << "rate fit unavailable";
    return report("A1", false, d.str());
  }
  d << "containment=" << (res.rate.g_containment ? "true" : "false")
    << " margin=" << fmt(res.rate.g_margin)
    << " pos_tol=" << fmt(cfg.regions.pos_tol)
    << " left_speed=" << fmt(res.rate.left_speed_fit)
    << " right_speed=" << fmt(res.rate.right_speed_fit)
    << " k0=" << fmt(res.rate.k0_theory) << " k1=" << fmt(res.rate.k1_theory);
  return report("A1", res.rate.g_containment, d.str());
}

// A2: monotone-flux regression against the exact heat kernel mode.
double heat_error(int n) {
  const Grid1D grid(0.0, 1.0, n);
  SimState s0;
  s0.t = 0.0;
  s0.u.resize(n);
  for (int i = 0; i < n; ++i) s0.u[i] = std::sin(M_PI * grid.x(i));
  BoundaryCondition bc;
  bc.kind = BoundaryCondition::Kind::dirichlet;
  TimeControls tc;
  tc.t_end = 0.1;
  tc.sample_interval = 0.1;
  const Trajectory traj = integrate(s0, grid, builtin_flux("linear"),
                                    builtin_convection("zero"), bc, tc);
  if (traj.diagnostics.blew_up)
    throw BlowupError("heat run blew up", traj.diagnostics.blowup_node,
                      traj.diagnostics.blowup_t);
  const SimState& last = traj.samples.back();
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    const double exact =
        std::exp(-M_PI * M_PI * last.t) * std::sin(M_PI * grid.x(i));
    err = std::max(err, std::abs(last.u[i] - exact));
  }
  return err;
}

bool criterion_a2() {
  const double e201 = heat_error(201);
  const double e401 = heat_error(401);
  const double ratio = e201 / e401;
  const bool pass = e201 <= kA2MaxError && ratio >= kA2MinRatio;
  std::ostringstream d;
  d << "err_n201=" << fmt(e201) << " err_n401=" << fmt(e401)
    << " ratio=" << fmt(ratio) << " (need err<=" << fmt(kA2MaxError)
    << " ratio>=" << fmt(kA2MinRatio) << ")";
  return report("A2", pass, d.str());
}

// A3: degenerate comparison fronts outrun x3 + K sqrt(C) t - tol(t), and
// refining the grid speeds the measured front up (approach from below).
bool criterion_a3() {
  const LemmaRunConfig cfg =
      parse_lemma_config(slurp(config_dir() / "lemma.json"));
  const LemmaRunResult coarse = run_lemma(cfg);

  LemmaConfig fine_core = cfg.core;
  fine_core.n = 2 * cfg.core.n - 1;  // same nodes plus midpoints
  const Trajectory fine_traj = simulate_lemma(fine_core);
  const FrontSpeeds fine = fit_front_speeds(
      front_track(fine_traj, cfg.v_thresh), cfg.fit_t_lo, cfg.fit_t_hi);

  const bool speeds_ok =
      coarse.speeds_present && fine.right > coarse.speeds.right;
  const bool pass = coarse.verdict.pass && speeds_ok;
  std::ostringstream d;
  d << "verdict=" << (coarse.verdict.pass ? "true" : "false")
    << " margin=" << fmt(coarse.verdict.margin)
    << " speed_n" << cfg.core.n << "=" << fmt(coarse.speeds.right)
    << " speed_n" << fine_core.n << "=" << fmt(fine.right)
    << " target=" << fmt(effective_K(cfg.core) * std::sqrt(cfg.core.C));
  return report("A3", pass, d.str());
}

// A4: interior island of backward-regime slopes shrinks at least at k0+k1.
bool criterion_a4() {
  const SimConfig cfg =
      parse_sim_config(slurp(config_dir() / "shrinking.json"));
  const TimeReversedResult res = time_reversed_experiment(cfg);
  std::ostringstream d;
  d << "width_bound=" << (res.width_bound_ok ? "true" : "false")
    << " w0=" << fmt(res.w0) << " margin=" << fmt(res.width_margin)
    << " k0+k1=" << fmt(res.k0_theory + res.k1_theory);
  if (res.speeds_present)
    d << " shrink_left=" << fmt(res.shrink_left_speed)
      << " shrink_right=" << fmt(res.shrink_right_speed);
  return report("A4", res.width_bound_ok, d.str());
}

// A5: the transformed diffusivity behaves like sqrt(sigma): the
// extrapolated limit of g^2/sigma equals 1 on both sides for this flux.
bool criterion_a5() {
  const FluxSpec pm = builtin_flux("perona_malik");
  std::vector<double> sigmas;
  for (int j = 0; j <= 12; ++j) sigmas.push_back(std::pow(10.0, -2.0 - j / 3.0));
  const double upper = g_limit_estimate(build_g(pm, Side::upper), sigmas);
  const double lower = g_limit_estimate(build_g(pm, Side::lower), sigmas);
  const bool pass = std::abs(upper - 1.0) <= kA5Tolerance &&
                    std::abs(lower - 1.0) <= kA5Tolerance;
  std::ostringstream d;
  d << "upper=" << fmt(upper) << " lower=" << fmt(lower) << " (need within "
    << fmt(kA5Tolerance) << " of 1)";
  return report("A5", pass, d.str());
}

// A6: six randomized invariant families, kPropertyCases each, fixed seeds.

int family_partition() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> slope(-3.0, 3.0);
  std::uniform_real_distribution<double> width(0.0, 0.3);
  const FluxSpec pm = builtin_flux("perona_malik");
  int bad = 0;
  for (int rep = 0; rep < kPropertyCases; ++rep) {
    std::vector<double> ux(64);
    for (auto& s : ux) s = slope(rng);
    const double delta = width(rng);
    const RegionLabels labels = classify(ux, pm, delta);
    for (std::size_t i = 0; i < ux.size(); ++i) {
      const double s = ux[i];
      const bool in_sub = s > -1.0 + delta && s < 1.0 - delta;
      const bool in_super = s < -1.0 - delta || s > 1.0 + delta;
      const bool in_degen = !in_sub && !in_super;
      const int members = int(in_sub) + int(in_super) + int(in_degen);
      const Label want = in_sub     ? Label::sub
                         : in_super ? Label::super
                                    : Label::degenerate;
      if (members != 1 || labels.labels[i] != want) ++bad;
    }
  }
  return bad;
}

int family_v_field() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> slope(-3.0, 3.0);
  const FluxSpec pm = builtin_flux("perona_malik");
  const EtaFunction up = build_eta(pm, Side::upper);
  const EtaFunction lo = build_eta(pm, Side::lower);
  int bad = 0;
  for (int rep = 0; rep < kPropertyCases; ++rep) {
    std::vector<double> ux(64);
    for (auto& s : ux) s = slope(rng);
    ux[0] = 1.0;   // exact critical slopes must map to exact zeros
    ux[1] = -1.0;
    const auto vu = v_field(up, ux);
    const auto vl = v_field(lo, ux);
    for (std::size_t i = 0; i < ux.size(); ++i) {
      if (vu[i] < 0.0 || vl[i] < 0.0) ++bad;
      if ((vu[i] == 0.0) != (ux[i] >= 1.0)) ++bad;
      if ((vl[i] == 0.0) != (ux[i] <= -1.0)) ++bad;
    }
  }
  return bad;
}

int family_eta() {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> slope(-4.0, 4.0);
  std::uniform_real_distribution<double> off(0.001, 3.0);
  const FluxSpec pm = builtin_flux("perona_malik");
  const EtaFunction up = build_eta(pm, Side::upper);
  const EtaFunction lo = build_eta(pm, Side::lower);
  const double phi_beta = pm.phi(1.0);
  const double phi_alpha = pm.phi(-1.0);
  int bad = 0;
  for (int rep = 0; rep < kPropertyCases; ++rep) {
    double s1 = slope(rng), s2 = slope(rng);
    if (s1 > s2) std::swap(s1, s2);
    if (up.eta(s1) > up.eta(s2)) ++bad;
    if (lo.eta(s1) > lo.eta(s2)) ++bad;
    // Clamp and plateau values are exact, not merely close.
    if (up.eta(1.0 + off(rng)) != phi_beta) ++bad;
    if (lo.eta(-1.0 - off(rng)) != phi_alpha) ++bad;
    if (up.eta(up.s_flat - off(rng)) != up.eta(up.s_flat - 5.0)) ++bad;
    if (lo.eta(lo.s_flat + off(rng)) != lo.eta(lo.s_flat + 5.0)) ++bad;
  }
  return bad;
}

int family_conservation() {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const FluxSpec pm = builtin_flux("perona_malik");
  const ConvectionSpec none = builtin_convection("zero");
  int bad = 0;
  for (int rep = 0; rep < kPropertyCases; ++rep) {
    const int n = 16 + static_cast<int>(33.0 * unit(rng));
    const Grid1D grid(0.0, 1.0, n);
    SimState s0;
    s0.t = 0.0;
    s0.u.resize(n);
    const double amp = 0.2 + 1.5 * unit(rng);
    const double k = 1.0 + 2.0 * std::floor(3.0 * unit(rng));
    for (int i = 0; i < n; ++i)
      s0.u[i] = amp * std::sin(k * M_PI * grid.x(i)) +
                0.3 * unit(rng) * grid.x(i);
    BoundaryCondition bc;  // equal prescribed slopes: boundary fluxes cancel
    bc.left_value = bc.right_value = 0.6 * unit(rng) - 0.3;
    TimeControls tc;
    tc.t_end = 0.01;
    tc.sample_interval = 0.01;
    const Trajectory traj = integrate(s0, grid, pm, none, bc, tc);
    if (traj.diagnostics.blew_up) {
      ++bad;
      continue;
    }
    // The scheme gives every node a full h-cell, so the flux differences
    // telescope against the uniform sum, not the trapezoid rule.
    auto mass = [&](const std::vector<double>& u) {
      double m = 0.0;
      for (double v : u) m += v;
      return m * grid.h();
    };
    const double m0 = mass(traj.samples.front().u);
    const double m1 = mass(traj.samples.back().u);
    if (std::abs(m1 - m0) > kMassDriftTol * (1.0 + std::abs(m0))) ++bad;
  }
  return bad;
}

int family_classify_oracle() {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> slope(-2.0, 2.0);
  std::uniform_int_distribution<int> pick(0, 5);
  const FluxSpec pm = builtin_flux("perona_malik");
  int bad = 0;
  for (int rep = 0; rep < kPropertyCases; ++rep) {
    const double delta = rep % 2 ? 0.25 : 0.0;
    std::vector<double> ux(32);
    for (auto& s : ux) s = slope(rng);
    // Salt with exact boundary values: ties must land in the degenerate band.
    const double edges[] = {-1.0 - delta, -1.0 + delta, 1.0 - delta,
                            1.0 + delta, -1.0, 1.0};
    for (int j = 0; j < 6; ++j) ux[j] = edges[pick(rng)];
    const RegionLabels labels = classify(ux, pm, delta);
    for (std::size_t i = 0; i < ux.size(); ++i) {
      const double s = ux[i];
      Label want;
      if (s > -1.0 + delta && s < 1.0 - delta)
        want = Label::sub;
      else if (s < -1.0 - delta || s > 1.0 + delta)
        want = Label::super;
      else
        want = Label::degenerate;
      if (labels.labels[i] != want) ++bad;
    }
  }
  return bad;
}

int family_round_trips() {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const fs::path dir = fs::temp_directory_path() / "bfdc_acceptance";
  fs::create_directories(dir);
  int bad = 0;
  for (int rep = 0; rep < kPropertyCases; ++rep) {
    // Config document -> parse -> emit -> parse must be the identity on
    // the parsed struct.
    nlohmann::ordered_json doc;
    doc["grid"] = {{"a", -4.0}, {"b", 4.0}, {"n", 64 + int(136 * unit(rng))}};
    doc["initial"] = {{"a1", -2.0 + unit(rng)},
                      {"b1", 1.0 + unit(rng)},
                      {"slope_left", -3.0 + 1.9 * unit(rng)},
                      {"slope_mid", -0.9 + 1.8 * unit(rng)},
                      {"slope_right", 1.1 + 1.9 * unit(rng)},
                      {"u_left", 2.0 * unit(rng) - 1.0}};
    doc["bc"] = {{"kind", rep % 2 ? "dirichlet" : "neumann_slope"}};
    doc["time"] = {{"t_end", 0.05 + 0.5 * unit(rng)}};
    doc["regions"] = {{"delta", 0.01 * unit(rng)},
                      {"pos_tol", 0.1 * unit(rng)}};
    doc["seed"] = int(1e6 * unit(rng));
    doc["output"] = "out_" + std::to_string(rep % 17);
    try {
      const SimConfig cfg = parse_sim_config(doc.dump());
      if (parse_sim_config(sim_config_to_json(cfg)) != cfg) ++bad;
    } catch (const ConfigError&) {
      ++bad;
    }

    // Interface CSV -> read -> write must reproduce the bytes.
    InterfaceTrack track;
    track.domain_a = -4.0;
    track.domain_b = 4.0;
    const int rows = 1 + int(6 * unit(rng));
    for (int r = 0; r < rows; ++r) {
      track.times.push_back(r * (0.001 + unit(rng)));
      const double scale = std::pow(10.0, int(8 * unit(rng)) - 4);
      const bool l_here = unit(rng) < 0.8, r_here = unit(rng) < 0.8;
      track.left_pos.push_back(
          l_here ? std::optional<double>((unit(rng) - 1.0) * scale)
                 : std::nullopt);
      track.right_pos.push_back(
          r_here ? std::optional<double>(unit(rng) * scale) : std::nullopt);
      track.sub_measure.push_back(8.0 * unit(rng));
      track.super_measure.push_back(8.0 * unit(rng));
      track.degen_measure.push_back(8.0 * unit(rng));
      track.collapsed.push_back(!l_here && !r_here);
    }
    const fs::path pa = dir / "rt_a.csv", pb = dir / "rt_b.csv";
    write_interfaces_csv(track, pa);
    write_interfaces_csv(read_interfaces_csv(pa), pb);
    if (slurp(pa) != slurp(pb)) ++bad;
  }
  return bad;
}

bool criterion_a6() {
  struct Family {
    const char* name;
    int (*run)();
  };
  const Family families[] = {
      {"partition", family_partition},
      {"v_field", family_v_field},
      {"eta", family_eta},
      {"conservation", family_conservation},
      {"classify_oracle", family_classify_oracle},
      {"round_trips", family_round_trips},
  };
  std::ostringstream d;
  int total_bad = 0;
  for (const Family& f : families) {
    const int bad = f.run();
    total_bad += bad;
    d << f.name << "=" << (bad == 0 ? "ok" : ("bad:" + std::to_string(bad)))
      << " ";
  }
  d << "(" << kPropertyCases << " cases per family)";
  return report("A6", total_bad == 0, d.str());
}

}  // namespace

int main() {
  int failures = 0;
  struct Entry {
    const char* id;
    bool (*run)();
  };
  const Entry entries[] = {
      {"A1", criterion_a1}, {"A2", criterion_a2}, {"A3", criterion_a3},
      {"A4", criterion_a4}, {"A5", criterion_a5}, {"A6", criterion_a6},
  };
  for (const Entry& e : entries) {
    try {
      if (!e.run()) ++failures;
    } catch (const std::exception& ex) {
      std::cout << e.id << " FAIL exception: " << ex.what() << "\n";
      ++failures;
    }
  }
  return failures;
}
