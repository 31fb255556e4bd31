#include "bfdc/report.hpp"

#include <json.hpp>

#include "bfdc/errors.hpp"

namespace bfdc {

using json = nlohmann::ordered_json;

namespace {

json diagnostics_tree(const SimDiagnostics& d) {
  return {{"blew_up", d.blew_up},     {"blowup_node", d.blowup_node},
          {"blowup_t", d.blowup_t},   {"stiff", d.stiff},
          {"min_dt", d.min_dt},       {"max_dt", d.max_dt},
          {"steps", d.steps}};
}

json validation_tree(const ModelValidationReport& v) {
  json violations = json::array();
  for (const Violation& x : v.violations)
    violations.push_back({{"condition", x.condition},
                          {"sample", x.sample},
                          {"observed", x.observed}});
  return {{"flux_ok", v.flux_ok},
          {"convection_ok", v.convection_ok},
          {"k0", v.k0},
          {"k1", v.k1},
          {"violations", violations}};
}

json rate_tree(const RateReport& r) {
  return {{"k0_theory", r.k0_theory},
          {"k1_theory", r.k1_theory},
          {"left_speed_fit", r.left_speed_fit},
          {"right_speed_fit", r.right_speed_fit},
          {"fit_t_lo", r.fit_t_lo},
          {"fit_t_hi", r.fit_t_hi},
          {"fit_residual", r.fit_residual},
          {"g_containment", r.g_containment},
          {"g_margin", r.g_margin}};
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  json doc;
  doc["config"] = json::parse(sim_config_to_json(report.config));
  doc["validation"] = validation_tree(report.validation);
  doc["rate"] = report.rate_present ? rate_tree(report.rate) : json();
  doc["diagnostics"] = diagnostics_tree(report.diagnostics);
  doc["scheme"] = {{"h", report.h}, {"wall_seconds", report.wall_seconds}};
  return doc.dump(2) + "\n";
}

SimConfig config_from_report(const std::string& report_json) {
  json doc;
  try {
    doc = json::parse(report_json);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("report: syntax error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("config"))
    throw ConfigError("report: missing 'config' section");
  return parse_sim_config(doc["config"].dump());
}

std::string lemma_report_to_json(const LemmaReport& report) {
  json doc;
  doc["config"] = json::parse(lemma_config_to_json(report.config));
  doc["verdict"] = {{"pass", report.verdict.pass},
                    {"margin", report.verdict.margin},
                    {"k_used", report.k_used}};
  doc["speeds"] = report.speeds_present
                      ? json({{"left", report.speeds.left},
                              {"right", report.speeds.right}})
                      : json();
  doc["diagnostics"] = diagnostics_tree(report.diagnostics);
  doc["scheme"] = {{"wall_seconds", report.wall_seconds}};
  return doc.dump(2) + "\n";
}

}  // namespace bfdc
