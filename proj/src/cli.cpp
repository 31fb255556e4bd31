#include "bfdc/cli.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfdc/csv.hpp"
#include "bfdc/errors.hpp"
#include "bfdc/pipeline.hpp"
#include "bfdc/report.hpp"
#include "bfdc/svg.hpp"

namespace bfdc {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw ConfigError("cannot create output directory '" + dir.string() +
                      "'");
  // Probe writability up front so a read-only location fails cleanly.
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream test(probe);
    if (!test)
      throw ConfigError("output directory '" + dir.string() +
                        "' is not writable");
  }
  fs::remove(probe, ec);
}

int run_simulate(const std::string& config_path, const std::string& out,
                 std::ostream& log) {
  SimConfig cfg = parse_sim_config(slurp(config_path));
  if (!out.empty()) cfg.output_dir = out;
  ensure_dir(cfg.output_dir);

  const MainRunResult res = run_main(cfg);
  const FluxSpec flux = flux_of(cfg);
  const fs::path dir(cfg.output_dir);
  write_interfaces_csv(res.track, dir / "interfaces.csv");
  write_states_csv(res.traj, flux, cfg.regions.delta, dir / "states.csv");
  std::optional<ExpansionRates> th;
  if (res.rate_present) th = ExpansionRates{res.rate.k0_theory, res.rate.k1_theory};
  write_interface_svg(res.track, th, cfg.initial.a1, cfg.initial.b1,
                      dir / "interfaces.svg");

  RunReport report;
  report.config = cfg;
  report.validation = res.validation;
  report.rate_present = res.rate_present;
  report.rate = res.rate;
  report.diagnostics = res.traj.diagnostics;
  report.h = grid_of(cfg).h();
  report.wall_seconds = res.wall_seconds;
  {
    std::ofstream rep(dir / "report.json");
    rep << report_to_json(report);
    if (!rep.good())
      throw ConfigError("write failed for '" + (dir / "report.json").string() +
                        "'");
  }

  log << "samples=" << res.track.times.size();
  if (res.rate_present)
    log << " containment=" << (res.rate.g_containment ? "true" : "false")
        << " margin=" << format_double(res.rate.g_margin)
        << " left_speed=" << format_double(res.rate.left_speed_fit)
        << " right_speed=" << format_double(res.rate.right_speed_fit);
  log << " out=" << cfg.output_dir << "\n";
  return res.traj.diagnostics.blew_up ? 2 : 0;
}

int run_check_model(const std::string& config_path, std::ostream& log) {
  const SimConfig cfg = parse_sim_config(slurp(config_path));
  const FluxSpec flux = flux_of(cfg);
  const ConvectionSpec conv = convection_of(cfg);
  ValidationOptions opts;
  opts.domain_lo = cfg.a;
  opts.domain_hi = cfg.b;
  opts.samples = cfg.model.validation_samples;
  opts.slope_radius = cfg.model.slope_radius;
  opts.seed = cfg.seed;
  const ModelValidationReport rep = validate(flux, conv, opts);
  log << "flux_ok=" << (rep.flux_ok ? "true" : "false")
      << " convection_ok=" << (rep.convection_ok ? "true" : "false")
      << " k0=" << format_double(rep.k0) << " k1=" << format_double(rep.k1)
      << "\n";
  for (const Violation& v : rep.violations)
    log << "violation " << v.condition << " at " << format_double(v.sample)
        << " observed " << format_double(v.observed) << "\n";
  return rep.flux_ok && rep.convection_ok ? 0 : 1;
}

int run_rates(const std::string& config_path, std::ostream& log) {
  const SimConfig cfg = parse_sim_config(slurp(config_path));
  const ExpansionRates th = rates(flux_of(cfg), convection_of(cfg));
  log << "k0=" << format_double(th.k0) << " k1=" << format_double(th.k1)
      << "\n";
  return 0;
}

int run_lemma_cmd(const std::string& config_path, const std::string& out,
                  std::ostream& log) {
  LemmaRunConfig cfg = parse_lemma_config(slurp(config_path));
  if (!out.empty()) cfg.output_dir = out;
  ensure_dir(cfg.output_dir);

  const LemmaRunResult res = run_lemma(cfg);
  const fs::path dir(cfg.output_dir);
  write_fronts_csv(res.track, dir / "fronts.csv");

  LemmaReport report;
  report.config = cfg;
  report.verdict = res.verdict;
  report.speeds_present = res.speeds_present;
  report.speeds = res.speeds;
  report.k_used = res.k_used;
  report.diagnostics = res.traj.diagnostics;
  report.wall_seconds = res.wall_seconds;
  {
    std::ofstream rep(dir / "lemma_report.json");
    rep << lemma_report_to_json(report);
    if (!rep.good())
      throw ConfigError("write failed for '" +
                        (dir / "lemma_report.json").string() + "'");
  }

  log << "verdict=" << (res.verdict.pass ? "true" : "false")
      << " margin=" << format_double(res.verdict.margin);
  if (res.speeds_present)
    log << " left_speed=" << format_double(res.speeds.left)
        << " right_speed=" << format_double(res.speeds.right);
  log << " out=" << cfg.output_dir << "\n";
  return res.traj.diagnostics.blew_up ? 2 : 0;
}

int exit_code_for(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (dynamic_cast<const HypothesisError*>(&e)) return 1;
  if (dynamic_cast<const BlowupError*>(&e)) return 2;
  if (dynamic_cast<const FitError*>(&e)) return 2;
  if (dynamic_cast<const EstimationError*>(&e)) return 2;
  return 3;  // config errors and anything unclassified
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : csv) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void set_dotted(ordered_json& doc, const std::string& key,
                const std::string& value) {
  ordered_json* node = &doc;
  std::string part;
  std::vector<std::string> parts;
  for (char ch : key) {
    if (ch == '.') {
      parts.push_back(part);
      part.clear();
    } else {
      part.push_back(ch);
    }
  }
  parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i)
    node = &((*node)[parts[i]]);
  ordered_json parsed;
  try {
    parsed = ordered_json::parse(value);
  } catch (const ordered_json::parse_error&) {
    parsed = value;  // bare strings are allowed unquoted on the CLI
  }
  (*node)[parts.back()] = parsed;
}

int run_sweep(const std::string& config_path, const std::string& param,
              const std::string& values_csv, const std::string& out,
              int jobs, std::ostream& log) {
  const std::string base_text = slurp(config_path);
  ordered_json base;
  try {
    base = ordered_json::parse(base_text);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError(std::string("config: syntax error: ") + e.what());
  }
  const std::vector<std::string> values = split_list(values_csv);
  if (values.empty()) throw ConfigError("sweep: empty --values list");
  if (jobs < 1) throw ConfigError("sweep: --jobs must be at least 1");

  // Validate every subconfig up front; a typo should fail the whole sweep
  // before any run starts.
  std::vector<SimConfig> configs;
  const std::string base_out = out.empty() ? "sweep_out" : out;
  for (const std::string& v : values) {
    ordered_json doc = base;
    set_dotted(doc, param, v);
    SimConfig cfg = parse_sim_config(doc.dump());
    cfg.output_dir =
        (fs::path(base_out) / (param + "=" + v)).string();
    configs.push_back(std::move(cfg));
  }

  std::vector<int> codes(configs.size(), 0);
  std::vector<std::string> lines(configs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= configs.size()) return;
      std::ostringstream line;
      line << param << "=" << values[i] << ": ";
      try {
        ensure_dir(configs[i].output_dir);
        const MainRunResult res = run_main(configs[i]);
        const fs::path dir(configs[i].output_dir);
        write_interfaces_csv(res.track, dir / "interfaces.csv");
        std::optional<ExpansionRates> th;
        if (res.rate_present)
          th = ExpansionRates{res.rate.k0_theory, res.rate.k1_theory};
        write_interface_svg(res.track, th, configs[i].initial.a1,
                            configs[i].initial.b1, dir / "interfaces.svg");
        RunReport report;
        report.config = configs[i];
        report.validation = res.validation;
        report.rate_present = res.rate_present;
        report.rate = res.rate;
        report.diagnostics = res.traj.diagnostics;
        report.h = grid_of(configs[i]).h();
        report.wall_seconds = res.wall_seconds;
        std::ofstream rep(dir / "report.json");
        rep << report_to_json(report);
        codes[i] = res.traj.diagnostics.blew_up ? 2 : 0;
        line << (codes[i] == 0 ? "ok" : "blow-up");
        if (res.rate_present)
          line << " margin=" << format_double(res.rate.g_margin);
      } catch (const std::exception& e) {
        std::ostringstream err;
        codes[i] = exit_code_for(e, err);
        line << err.str();
      }
      lines[i] = line.str();
    }
  };
  const int workers =
      std::min<std::size_t>(jobs, configs.size());
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  int worst = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    log << lines[i] << "\n";
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"1D backward-forward diffusion-convection laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, param, values;
  int jobs = 1;

  CLI::App* sim = app.add_subcommand(
      "simulate", "run, track interfaces, fit rates, write artifacts");
  sim->add_option("--config", config_path, "run definition (JSON)")
      ->required();
  sim->add_option("--out", out_dir, "output directory override");

  CLI::App* check = app.add_subcommand(
      "check-model", "validate the structural hypotheses only");
  check->add_option("--config", config_path)->required();

  CLI::App* rates_cmd =
      app.add_subcommand("rates", "print the theoretical expansion rates");
  rates_cmd->add_option("--config", config_path)->required();

  CLI::App* lemma_cmd = app.add_subcommand(
      "lemma", "simulate the degenerate comparison equation");
  lemma_cmd->add_option("--config", config_path)->required();
  lemma_cmd->add_option("--out", out_dir);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "repeat simulate over parameter values");
  sweep_cmd->add_option("--config", config_path)->required();
  sweep_cmd->add_option("--param", param, "dotted config key")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")
      ->required();
  sweep_cmd->add_option("--out", out_dir);
  sweep_cmd->add_option("--jobs", jobs, "parallel runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (sim->parsed()) return run_simulate(config_path, out_dir, std::cout);
    if (check->parsed()) return run_check_model(config_path, std::cout);
    if (rates_cmd->parsed()) return run_rates(config_path, std::cout);
    if (lemma_cmd->parsed())
      return run_lemma_cmd(config_path, out_dir, std::cout);
    if (sweep_cmd->parsed())
      return run_sweep(config_path, param, values, out_dir, jobs, std::cout);
  } catch (const std::exception& e) {
    return exit_code_for(e, std::cerr);
  }
  return 3;
}

}  // namespace bfdc
