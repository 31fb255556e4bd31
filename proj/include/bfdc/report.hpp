#pragma once

#include <string>

#include "bfdc/config.hpp"
#include "bfdc/pipeline.hpp"

namespace bfdc {

struct RunReport {
  SimConfig config;
  ModelValidationReport validation;
  bool rate_present = false;
  RateReport rate;
  SimDiagnostics diagnostics;
  double h = 0.0;
  double wall_seconds = 0.0;
};

std::string report_to_json(const RunReport& report);

// Re-parses the config echoed inside a serialized report; the result
// equals the config the run started from.
SimConfig config_from_report(const std::string& report_json);

struct LemmaReport {
  LemmaRunConfig config;
  LemmaVerdict verdict;
  bool speeds_present = false;
  FrontSpeeds speeds;
  double k_used = 0.0;
  SimDiagnostics diagnostics;
  double wall_seconds = 0.0;
};

std::string lemma_report_to_json(const LemmaReport& report);

}  // namespace bfdc
