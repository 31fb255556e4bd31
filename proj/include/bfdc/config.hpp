#pragma once

#include <map>
#include <string>

#include "bfdc/lemma.hpp"
#include "bfdc/model.hpp"
#include "bfdc/solver.hpp"

namespace bfdc {

struct ModelConfig {
  std::string flux_name = "perona_malik";
  FluxParams flux_params;
  std::string conv_name = "separable_linear";
  std::map<std::string, double> conv_params;
  // When false, hypothesis violations reported by validation do not abort
  // a run (used for monotone-flux regression configs).
  bool require_valid = true;
  int validation_samples = 256;
  double slope_radius = 0.0;

  bool operator==(const ModelConfig&) const = default;
};

struct RegionsConfig {
  double delta = 0.0;
  double pos_tol = 0.0;
  double fit_t_lo = 0.0;
  double fit_t_hi = 0.0;

  bool operator==(const RegionsConfig&) const = default;
};

// Fully resolved run definition: parsing fills every defaulted field, so
// equal configs serialize identically.
struct SimConfig {
  ModelConfig model;
  double a = -4.0;
  double b = 4.0;
  int n = 0;  // >= 16
  InitialDatum initial;
  // canonical: slope_left < alpha < slope_mid < beta < slope_right;
  // mirrored: flanks inside (alpha, beta), middle outside.
  std::string initial_pattern = "canonical";
  BoundaryCondition bc;
  TimeControls time;
  RegionsConfig regions;
  unsigned long seed = 0;
  std::string output_dir = "out";

  bool operator==(const SimConfig&) const = default;
};

// Lemma run definition: the core equation setup plus tracking and verdict
// parameters.
struct LemmaRunConfig {
  LemmaConfig core;
  std::string flux_name;   // echo of the from_flux source, empty otherwise
  FluxParams flux_params;
  double v_thresh = 0.0;  // 0 -> front_track default
  double fit_t_lo = 0.0;
  double fit_t_hi = 0.0;
  double tol_abs = 0.0;
  double tol_rate = 0.0;
  std::string output_dir = "out";
};

// Strict parsers: JSON-syntax documents, unknown keys rejected, constraint
// violations reported with the field path and the rule it breaks. Both
// return fully resolved configs.
SimConfig parse_sim_config(const std::string& text);
LemmaRunConfig parse_lemma_config(const std::string& text);

std::string sim_config_to_json(const SimConfig& config);
std::string lemma_config_to_json(const LemmaRunConfig& config);

FluxSpec flux_of(const SimConfig& config);
ConvectionSpec convection_of(const SimConfig& config);
Grid1D grid_of(const SimConfig& config);

}  // namespace bfdc
