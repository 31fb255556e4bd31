#include "bfdc/config.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "bfdc/errors.hpp"

namespace bfdc {

using json = nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end())
      throw ConfigError("config: unknown key '" + path + key + "'");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double num_or(const json& obj, const char* key, double fallback,
              const std::string& path) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number())
    throw ConfigError("config: '" + path + key + "' must be a number");
  return v->get<double>();
}

int int_or(const json& obj, const char* key, int fallback,
           const std::string& path) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer())
    throw ConfigError("config: '" + path + key + "' must be an integer");
  return v->get<int>();
}

bool bool_or(const json& obj, const char* key, bool fallback,
             const std::string& path) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean())
    throw ConfigError("config: '" + path + key + "' must be a boolean");
  return v->get<bool>();
}

std::string str_or(const json& obj, const char* key,
                   const std::string& fallback, const std::string& path) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string())
    throw ConfigError("config: '" + path + key + "' must be a string");
  return v->get<std::string>();
}

std::map<std::string, double> scalar_map(const json& obj,
                                         const std::string& path) {
  std::map<std::string, double> out;
  for (const auto& [key, value] : obj.items()) {
    if (!value.is_number())
      throw ConfigError("config: '" + path + key + "' must be a number");
    out[key] = value.get<double>();
  }
  return out;
}

std::vector<std::array<double, 2>> pair_table(const json& arr,
                                              const std::string& path) {
  if (!arr.is_array())
    throw ConfigError("config: '" + path + "' must be an array of pairs");
  std::vector<std::array<double, 2>> out;
  for (const auto& row : arr) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() ||
        !row[1].is_number())
      throw ConfigError("config: '" + path + "' entries must be [x, y] pairs");
    out.push_back({row[0].get<double>(), row[1].get<double>()});
  }
  return out;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: syntax error: ") + e.what());
  }
}

ModelConfig read_model(const json& m) {
  check_keys(m, "model.", {"flux", "convection", "require_valid",
                           "validation"});
  ModelConfig out;
  if (const json* f = find(m, "flux")) {
    check_keys(*f, "model.flux.", {"name", "params", "table"});
    out.flux_name = str_or(*f, "name", out.flux_name, "model.flux.");
    if (const json* p = find(*f, "params"))
      out.flux_params.scalars = scalar_map(*p, "model.flux.params.");
    if (const json* t = find(*f, "table"))
      out.flux_params.table = pair_table(*t, "model.flux.table");
  }
  if (const json* c = find(m, "convection")) {
    check_keys(*c, "model.convection.", {"name", "params"});
    out.conv_name = str_or(*c, "name", out.conv_name, "model.convection.");
    if (const json* p = find(*c, "params"))
      out.conv_params = scalar_map(*p, "model.convection.params.");
  }
  out.require_valid = bool_or(m, "require_valid", true, "model.");
  if (const json* v = find(m, "validation")) {
    check_keys(*v, "model.validation.", {"samples", "slope_radius"});
    out.validation_samples =
        int_or(*v, "samples", out.validation_samples, "model.validation.");
    out.slope_radius =
        num_or(*v, "slope_radius", out.slope_radius, "model.validation.");
  }
  return out;
}

TimeControls read_time(const json* t, const std::string& path) {
  TimeControls out;
  if (!t) return out;
  check_keys(*t, path,
             {"t_end", "sample_interval", "safety", "dt_floor", "fixed_dt"});
  out.t_end = num_or(*t, "t_end", out.t_end, path);
  out.sample_interval = num_or(*t, "sample_interval", 0.0, path);
  out.safety = num_or(*t, "safety", out.safety, path);
  out.dt_floor = num_or(*t, "dt_floor", out.dt_floor, path);
  out.fixed_dt = num_or(*t, "fixed_dt", out.fixed_dt, path);
  if (out.t_end < 0.0)
    throw ConfigError("config: '" + path + "t_end' must be >= 0");
  if (!(out.safety > 0.0) || out.safety > 1.0)
    throw ConfigError("config: '" + path + "safety' must be in (0, 1]");
  // Defaults: one hundred samples per run, floor tied to the horizon.
  if (out.t_end > 0.0) {
    if (out.sample_interval == 0.0) out.sample_interval = out.t_end / 100.0;
    if (!(out.sample_interval > 0.0))
      throw ConfigError("config: '" + path + "sample_interval' must be > 0");
    if (out.dt_floor == 0.0) out.dt_floor = 1e-10 * out.t_end;
  }
  return out;
}

}  // namespace

SimConfig parse_sim_config(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object())
    throw ConfigError("config: top level must be an object");
  check_keys(doc, "",
             {"model", "grid", "initial", "bc", "time", "regions", "seed",
              "output"});

  SimConfig cfg;
  if (const json* m = find(doc, "model")) cfg.model = read_model(*m);

  if (const json* g = find(doc, "grid")) {
    check_keys(*g, "grid.", {"a", "b", "n"});
    cfg.a = num_or(*g, "a", cfg.a, "grid.");
    cfg.b = num_or(*g, "b", cfg.b, "grid.");
    cfg.n = int_or(*g, "n", cfg.n, "grid.");
  }
  if (!(cfg.b > cfg.a))
    throw ConfigError("config: 'grid.b' must exceed 'grid.a'");
  if (cfg.n < 16) throw ConfigError("config: 'grid.n' must be at least 16");
  const double h = (cfg.b - cfg.a) / (cfg.n - 1);

  // The flux is needed below for pattern checks and region defaults.
  const FluxSpec flux = builtin_flux(cfg.model.flux_name, cfg.model.flux_params);

  InitialDatum& ini = cfg.initial;
  ini.a1 = -1.0;
  ini.b1 = 1.0;
  ini.slope_left = -2.0;
  ini.slope_mid = 0.0;
  ini.slope_right = 2.0;
  if (const json* i = find(doc, "initial")) {
    check_keys(*i, "initial.",
               {"kind", "pattern", "a1", "b1", "slope_left", "slope_mid",
                "slope_right", "smoothing", "u_left", "table"});
    const std::string kind =
        str_or(*i, "kind", "piecewise_slope", "initial.");
    if (kind == "piecewise_slope")
      ini.kind = InitialDatum::Kind::piecewise_slope;
    else if (kind == "user_table")
      ini.kind = InitialDatum::Kind::user_table;
    else
      throw ConfigError("config: 'initial.kind' must be piecewise_slope or "
                        "user_table");
    cfg.initial_pattern = str_or(*i, "pattern", "canonical", "initial.");
    ini.a1 = num_or(*i, "a1", ini.a1, "initial.");
    ini.b1 = num_or(*i, "b1", ini.b1, "initial.");
    ini.slope_left = num_or(*i, "slope_left", ini.slope_left, "initial.");
    ini.slope_mid = num_or(*i, "slope_mid", ini.slope_mid, "initial.");
    ini.slope_right = num_or(*i, "slope_right", ini.slope_right, "initial.");
    ini.smoothing = num_or(*i, "smoothing", 0.0, "initial.");
    ini.u_left = num_or(*i, "u_left", 0.0, "initial.");
    if (const json* t = find(*i, "table"))
      ini.table = pair_table(*t, "initial.table");
  }
  if (cfg.initial_pattern != "canonical" && cfg.initial_pattern != "mirrored")
    throw ConfigError(
        "config: 'initial.pattern' must be canonical or mirrored");
  if (!(cfg.a <= ini.a1) || !(ini.a1 <= ini.b1) || !(ini.b1 <= cfg.b))
    throw ConfigError(
        "config: initial anchors must satisfy a <= a1 <= b1 <= b");
  if (ini.smoothing == 0.0) ini.smoothing = 4.0 * h;
  if (!(ini.smoothing > 0.0))
    throw ConfigError("config: 'initial.smoothing' must be positive");

  if (ini.kind == InitialDatum::Kind::piecewise_slope) {
    if (ini.b1 - ini.a1 < 2.0 * ini.smoothing)
      throw ConfigError(
          "config: smoothing blends overlap; need b1 - a1 >= 2*smoothing");
    if (ini.a1 - ini.smoothing < cfg.a || ini.b1 + ini.smoothing > cfg.b)
      throw ConfigError(
          "config: smoothing blends must fit inside [a, b]");
    const double al = flux.alpha, be = flux.beta;
    if (cfg.initial_pattern == "canonical") {
      if (!(ini.slope_mid > al) || !(ini.slope_mid < be))
        throw ConfigError(
            "config: 'initial.slope_mid' must satisfy alpha < slope_mid < "
            "beta (strict)");
      if (!(ini.slope_left < al))
        throw ConfigError(
            "config: 'initial.slope_left' must lie strictly below alpha");
      if (!(ini.slope_right > be))
        throw ConfigError(
            "config: 'initial.slope_right' must lie strictly above beta");
    } else {
      if (ini.slope_mid >= al && ini.slope_mid <= be)
        throw ConfigError(
            "config: mirrored pattern needs 'initial.slope_mid' outside "
            "[alpha, beta]");
      auto inside = [&](double s) { return s > al && s < be; };
      if (!inside(ini.slope_left) || !inside(ini.slope_right))
        throw ConfigError(
            "config: mirrored pattern needs the flank slopes strictly "
            "inside (alpha, beta)");
    }
  } else if (ini.table.size() < 4) {
    throw ConfigError("config: 'initial.table' needs at least 4 points");
  }

  cfg.bc.kind = BoundaryCondition::Kind::neumann_slope;
  bool bc_values_given = false;
  if (const json* b = find(doc, "bc")) {
    check_keys(*b, "bc.", {"kind", "left_value", "right_value"});
    const std::string kind = str_or(*b, "kind", "neumann_slope", "bc.");
    if (kind == "dirichlet")
      cfg.bc.kind = BoundaryCondition::Kind::dirichlet;
    else if (kind == "neumann_slope")
      cfg.bc.kind = BoundaryCondition::Kind::neumann_slope;
    else
      throw ConfigError("config: 'bc.kind' must be dirichlet or "
                        "neumann_slope");
    if (find(*b, "left_value") || find(*b, "right_value")) {
      bc_values_given = true;
      cfg.bc.left_value = num_or(*b, "left_value", 0.0, "bc.");
      cfg.bc.right_value = num_or(*b, "right_value", 0.0, "bc.");
    }
  }
  if (!bc_values_given &&
      cfg.bc.kind == BoundaryCondition::Kind::neumann_slope) {
    if (ini.kind != InitialDatum::Kind::piecewise_slope)
      throw ConfigError(
          "config: neumann_slope with a user_table initial needs explicit "
          "bc values");
    cfg.bc.left_value = ini.slope_left;
    cfg.bc.right_value = ini.slope_right;
  }

  cfg.time = read_time(find(doc, "time"), "time.");

  cfg.regions.delta = 1e-6 * (flux.beta - flux.alpha);
  cfg.regions.pos_tol = 2.0 * h;
  cfg.regions.fit_t_lo = 5.0 * cfg.time.sample_interval;
  cfg.regions.fit_t_hi = cfg.time.t_end;
  if (const json* r = find(doc, "regions")) {
    check_keys(*r, "regions.", {"delta", "pos_tol", "fit_t_lo", "fit_t_hi"});
    cfg.regions.delta = num_or(*r, "delta", cfg.regions.delta, "regions.");
    cfg.regions.pos_tol =
        num_or(*r, "pos_tol", cfg.regions.pos_tol, "regions.");
    cfg.regions.fit_t_lo =
        num_or(*r, "fit_t_lo", cfg.regions.fit_t_lo, "regions.");
    cfg.regions.fit_t_hi =
        num_or(*r, "fit_t_hi", cfg.regions.fit_t_hi, "regions.");
  }
  if (cfg.regions.delta < 0.0)
    throw ConfigError("config: 'regions.delta' must be >= 0");

  if (const json* s = find(doc, "seed")) {
    if (!s->is_number_unsigned() && !s->is_number_integer())
      throw ConfigError("config: 'seed' must be an integer");
    cfg.seed = s->get<unsigned long>();
  }
  cfg.output_dir = str_or(doc, "output", cfg.output_dir, "");

  // Fill the convection anchors from the flux so minimal documents stay
  // minimal; explicit values win.
  if (cfg.model.conv_name == "separable_linear" ||
      cfg.model.conv_name == "zero_extension") {
    auto& p = cfg.model.conv_params;
    p.try_emplace("A", -1.0);
    p.try_emplace("B", -1.0);
    p.try_emplace("alpha", flux.alpha);
    p.try_emplace("beta", flux.beta);
  }

  // Constructs once now so malformed model parameters surface at parse
  // time with a config error.
  (void)builtin_convection(cfg.model.conv_name, cfg.model.conv_params);
  return cfg;
}

namespace {

json sim_config_tree(const SimConfig& c) {
  json flux = {{"name", c.model.flux_name}};
  flux["params"] = json(c.model.flux_params.scalars);
  if (!c.model.flux_params.table.empty()) {
    json t = json::array();
    for (const auto& row : c.model.flux_params.table)
      t.push_back({row[0], row[1]});
    flux["table"] = t;
  }
  json doc;
  doc["model"] = {
      {"flux", flux},
      {"convection",
       {{"name", c.model.conv_name}, {"params", json(c.model.conv_params)}}},
      {"require_valid", c.model.require_valid},
      {"validation",
       {{"samples", c.model.validation_samples},
        {"slope_radius", c.model.slope_radius}}}};
  doc["grid"] = {{"a", c.a}, {"b", c.b}, {"n", c.n}};
  json ini = {
      {"kind", c.initial.kind == InitialDatum::Kind::piecewise_slope
                   ? "piecewise_slope"
                   : "user_table"},
      {"pattern", c.initial_pattern},
      {"a1", c.initial.a1},
      {"b1", c.initial.b1},
      {"slope_left", c.initial.slope_left},
      {"slope_mid", c.initial.slope_mid},
      {"slope_right", c.initial.slope_right},
      {"smoothing", c.initial.smoothing},
      {"u_left", c.initial.u_left}};
  if (!c.initial.table.empty()) {
    json t = json::array();
    for (const auto& row : c.initial.table) t.push_back({row[0], row[1]});
    ini["table"] = t;
  }
  doc["initial"] = ini;
  doc["bc"] = {{"kind", c.bc.kind == BoundaryCondition::Kind::dirichlet
                            ? "dirichlet"
                            : "neumann_slope"},
               {"left_value", c.bc.left_value},
               {"right_value", c.bc.right_value}};
  doc["time"] = {{"t_end", c.time.t_end},
                 {"sample_interval", c.time.sample_interval},
                 {"safety", c.time.safety},
                 {"dt_floor", c.time.dt_floor},
                 {"fixed_dt", c.time.fixed_dt}};
  doc["regions"] = {{"delta", c.regions.delta},
                    {"pos_tol", c.regions.pos_tol},
                    {"fit_t_lo", c.regions.fit_t_lo},
                    {"fit_t_hi", c.regions.fit_t_hi}};
  doc["seed"] = c.seed;
  doc["output"] = c.output_dir;
  return doc;
}

}  // namespace

std::string sim_config_to_json(const SimConfig& config) {
  return sim_config_tree(config).dump(2) + "\n";
}

LemmaRunConfig parse_lemma_config(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object())
    throw ConfigError("config: top level must be an object");
  check_keys(doc, "", {"lemma", "output"});
  const json* l = find(doc, "lemma");
  if (!l) throw ConfigError("config: missing 'lemma' section");
  check_keys(*l, "lemma.",
             {"K", "C", "g_kind", "flux", "f_kind", "p", "q", "x1", "x2",
              "x3", "x4", "v0", "n", "time", "v_thresh", "fit_t_lo",
              "fit_t_hi", "tol_abs", "tol_rate"});

  LemmaRunConfig cfg;
  LemmaConfig& core = cfg.core;
  core.K = num_or(*l, "K", core.K, "lemma.");
  core.C = num_or(*l, "C", core.C, "lemma.");
  const std::string gk = str_or(*l, "g_kind", "sqrt_exact", "lemma.");
  if (gk == "sqrt_exact")
    core.g_kind = LemmaConfig::GKind::sqrt_exact;
  else if (gk == "from_flux_upper")
    core.g_kind = LemmaConfig::GKind::from_flux_upper;
  else if (gk == "from_flux_lower")
    core.g_kind = LemmaConfig::GKind::from_flux_lower;
  else
    throw ConfigError("config: 'lemma.g_kind' must be sqrt_exact, "
                      "from_flux_upper or from_flux_lower");
  if (core.g_kind != LemmaConfig::GKind::sqrt_exact) {
    cfg.flux_name = "perona_malik";
    if (const json* f = find(*l, "flux")) {
      check_keys(*f, "lemma.flux.", {"name", "params", "table"});
      cfg.flux_name = str_or(*f, "name", cfg.flux_name, "lemma.flux.");
      if (const json* p = find(*f, "params"))
        cfg.flux_params.scalars = scalar_map(*p, "lemma.flux.params.");
      if (const json* t = find(*f, "table"))
        cfg.flux_params.table = pair_table(*t, "lemma.flux.table");
    }
    core.flux = builtin_flux(cfg.flux_name, cfg.flux_params);
  } else if (find(*l, "flux")) {
    throw ConfigError(
        "config: 'lemma.flux' only applies to the from_flux g kinds");
  }
  const std::string fk = str_or(*l, "f_kind", "constant", "lemma.");
  if (fk == "constant")
    core.f_kind = LemmaConfig::FKind::constant;
  else if (fk == "perturbed")
    core.f_kind = LemmaConfig::FKind::perturbed;
  else
    throw ConfigError("config: 'lemma.f_kind' must be constant or perturbed");
  core.p = num_or(*l, "p", 0.0, "lemma.");
  core.q = num_or(*l, "q", 0.0, "lemma.");
  core.x1 = num_or(*l, "x1", core.x1, "lemma.");
  core.x2 = num_or(*l, "x2", core.x2, "lemma.");
  core.x3 = num_or(*l, "x3", core.x3, "lemma.");
  core.x4 = num_or(*l, "x4", core.x4, "lemma.");
  if (const json* v = find(*l, "v0")) {
    check_keys(*v, "lemma.v0.", {"kind", "amp"});
    const std::string vk = str_or(*v, "kind", "parabola", "lemma.v0.");
    if (vk == "parabola")
      core.v0_kind = LemmaConfig::V0Kind::parabola;
    else if (vk == "tent")
      core.v0_kind = LemmaConfig::V0Kind::tent;
    else
      throw ConfigError("config: 'lemma.v0.kind' must be parabola or tent");
    core.v0_amp = num_or(*v, "amp", core.v0_amp, "lemma.v0.");
  }
  core.n = int_or(*l, "n", 0, "lemma.");
  core.time = read_time(find(*l, "time"), "lemma.time.");

  const double h = core.n > 1 ? (core.x4 - core.x1) / (core.n - 1) : 0.0;
  cfg.v_thresh = num_or(*l, "v_thresh", 0.0, "lemma.");
  cfg.fit_t_lo =
      num_or(*l, "fit_t_lo", 5.0 * core.time.sample_interval, "lemma.");
  cfg.fit_t_hi = num_or(*l, "fit_t_hi", core.time.t_end, "lemma.");
  cfg.tol_abs = num_or(*l, "tol_abs", 2.0 * h, "lemma.");
  cfg.tol_rate = num_or(*l, "tol_rate", 0.0, "lemma.");
  cfg.output_dir = str_or(doc, "output", cfg.output_dir, "");
  return cfg;
}

std::string lemma_config_to_json(const LemmaRunConfig& c) {
  const LemmaConfig& core = c.core;
  json l;
  l["K"] = core.K;
  l["C"] = core.C;
  switch (core.g_kind) {
    case LemmaConfig::GKind::sqrt_exact:
      l["g_kind"] = "sqrt_exact";
      break;
    case LemmaConfig::GKind::from_flux_upper:
      l["g_kind"] = "from_flux_upper";
      break;
    case LemmaConfig::GKind::from_flux_lower:
      l["g_kind"] = "from_flux_lower";
      break;
  }
  if (core.g_kind != LemmaConfig::GKind::sqrt_exact) {
    json f = {{"name", c.flux_name}};
    f["params"] = json(c.flux_params.scalars);
    if (!c.flux_params.table.empty()) {
      json t = json::array();
      for (const auto& row : c.flux_params.table)
        t.push_back({row[0], row[1]});
      f["table"] = t;
    }
    l["flux"] = f;
  }
  l["f_kind"] =
      core.f_kind == LemmaConfig::FKind::constant ? "constant" : "perturbed";
  l["p"] = core.p;
  l["q"] = core.q;
  l["x1"] = core.x1;
  l["x2"] = core.x2;
  l["x3"] = core.x3;
  l["x4"] = core.x4;
  l["v0"] = {{"kind", core.v0_kind == LemmaConfig::V0Kind::parabola
                          ? "parabola"
                          : "tent"},
             {"amp", core.v0_amp}};
  l["n"] = core.n;
  l["time"] = {{"t_end", core.time.t_end},
               {"sample_interval", core.time.sample_interval},
               {"safety", core.time.safety},
               {"dt_floor", core.time.dt_floor},
               {"fixed_dt", core.time.fixed_dt}};
  l["v_thresh"] = c.v_thresh;
  l["fit_t_lo"] = c.fit_t_lo;
  l["fit_t_hi"] = c.fit_t_hi;
  l["tol_abs"] = c.tol_abs;
  l["tol_rate"] = c.tol_rate;
  json doc;
  doc["lemma"] = l;
  doc["output"] = c.output_dir;
  return doc.dump(2) + "\n";
}

FluxSpec flux_of(const SimConfig& config) {
  return builtin_flux(config.model.flux_name, config.model.flux_params);
}

ConvectionSpec convection_of(const SimConfig& config) {
  return builtin_convection(config.model.conv_name, config.model.conv_params);
}

Grid1D grid_of(const SimConfig& config) {
  return Grid1D(config.a, config.b, config.n);
}

}  // namespace bfdc
