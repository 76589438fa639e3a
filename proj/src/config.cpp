#include "rdfield/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rdf {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError("config: " + where + " must be an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ValidationError("config: unknown key '" + it.key() + "' in " + where);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    throw ValidationError("config: missing key '" + std::string(key) + "' in " + where);
  return j.at(key);
}

double need_num(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number())
    throw ValidationError("config: '" + std::string(key) + "' in " + where +
                          " must be a number");
  return v.get<double>();
}

int need_int(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer())
    throw ValidationError("config: '" + std::string(key) + "' in " + where +
                          " must be an integer");
  return v.get<int>();
}

GridSpec parse_grid(const json& g, double& cfl_out) {
  require_object(g, "grid");
  reject_unknown(g, {"n_sites", "dx", "dt", "cfl_factor"}, "grid");
  const int n = need_int(g, "n_sites", "grid");
  const double dx = need_num(g, "dx", "grid");
  if (g.contains("dt") && g.contains("cfl_factor"))
    throw ValidationError("config: grid takes either dt or cfl_factor, not both");
  if (g.contains("dt")) return GridSpec::make(n, dx, g.at("dt").get<double>());
  cfl_out = g.contains("cfl_factor") ? g.at("cfl_factor").get<double>() : 0.5;
  return GridSpec::make_cfl(n, dx, cfl_out);
}

InitialSpec parse_initial(const json& j) {
  require_object(j, "initial");
  const std::string type = need(j, "type", "initial").get<std::string>();
  if (type == "plane-wave") {
    reject_unknown(j, {"type", "mode_number", "branch", "amplitude"}, "initial");
    InitialPlaneWave p;
    p.mode_number = need_int(j, "mode_number", "initial");
    p.branch = need_int(j, "branch", "initial");
    p.amplitude = need_num(j, "amplitude", "initial");
    if (p.branch != 1 && p.branch != -1)
      throw ValidationError("config: initial.branch must be +1 or -1");
    return p;
  }
  if (type == "gaussian") {
    reject_unknown(j, {"type", "center", "width", "carrier_k", "amplitude", "branch"},
                   "initial");
    InitialGaussian g;
    g.center = need_num(j, "center", "initial");
    g.width = need_num(j, "width", "initial");
    g.carrier_k = need_num(j, "carrier_k", "initial");
    g.amplitude = need_num(j, "amplitude", "initial");
    g.branch = need_int(j, "branch", "initial");
    if (g.branch != 1 && g.branch != -1)
      throw ValidationError("config: initial.branch must be +1 or -1");
    return g;
  }
  if (type == "snapshot") {
    reject_unknown(j, {"type", "path"}, "initial");
    return InitialSnapshot{need(j, "path", "initial").get<std::string>()};
  }
  throw ValidationError("config: unknown initial type '" + type + "'");
}

PotentialProfile parse_potential(const json& j) {
  require_object(j, "potential");
  PotentialProfile p;
  const std::string profile = need(j, "profile", "potential").get<std::string>();
  if (profile == "constant") {
    reject_unknown(j, {"profile", "value"}, "potential");
    const json& v = need(j, "value", "potential");
    if (!v.is_array() || v.size() != 4)
      throw ValidationError("config: potential.value must be a 4-element array");
    p.kind = PotentialProfile::Kind::Constant;
    for (int a = 0; a < 4; ++a) p.constant(a) = v.at(a).get<double>();
  } else if (profile == "sine") {
    reject_unknown(j, {"profile", "component", "amplitude", "mode_number"}, "potential");
    p.kind = PotentialProfile::Kind::Sine;
    p.component = need_int(j, "component", "potential");
    p.amplitude = need_num(j, "amplitude", "potential");
    p.mode_number = need_int(j, "mode_number", "potential");
    if (p.component < 0 || p.component > 3)
      throw ValidationError("config: potential.component must be in 0..3");
  } else {
    throw ValidationError("config: unknown potential profile '" + profile + "'");
  }
  return p;
}

}  // namespace

VectorField potential_values(const PotentialProfile& p, const GridSpec& grid) {
  VectorField A = VectorField::Zero(grid.n_sites, 4);
  switch (p.kind) {
    case PotentialProfile::Kind::None:
      break;
    case PotentialProfile::Kind::Constant:
      for (int i = 0; i < grid.n_sites; ++i) A.row(i) = p.constant.transpose();
      break;
    case PotentialProfile::Kind::Sine: {
      const double k = 2.0 * M_PI * p.mode_number / grid.length();
      for (int i = 0; i < grid.n_sites; ++i)
        A(i, p.component) = p.amplitude * std::sin(k * grid.site_x(i));
      break;
    }
  }
  return A;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("config: parse error: ") + ex.what());
  }
  require_object(j, "top level");
  reject_unknown(j,
                 {"format-version", "grid", "params", "mode", "z_index", "initial",
                  "potential", "n_steps", "sample_every", "dispersion", "convergence"},
                 "top level");
  if (need_int(j, "format-version", "top level") != 1)
    throw ValidationError("config: unsupported format-version");

  RunConfig cfg;
  cfg.grid = parse_grid(need(j, "grid", "top level"), cfg.cfl_factor);

  const json& pj = need(j, "params", "top level");
  require_object(pj, "params");
  reject_unknown(pj, {"kappa", "e"}, "params");
  cfg.params =
      PhysicalParams::natural(need_num(pj, "kappa", "params"), need_num(pj, "e", "params"));

  cfg.mode = mode_from_string(need(j, "mode", "top level").get<std::string>());
  cfg.z_index = j.contains("z_index") ? j.at("z_index").get<int>() : 0;
  cfg.initial = parse_initial(need(j, "initial", "top level"));
  if (j.contains("potential")) cfg.potential = parse_potential(j.at("potential"));

  cfg.n_steps = need_int(j, "n_steps", "top level");
  cfg.sample_every =
      j.contains("sample_every") ? j.at("sample_every").get<int>() : 1;
  if (cfg.n_steps < 1) throw ValidationError("config: n_steps must be >= 1");
  if (cfg.sample_every < 1) throw ValidationError("config: sample_every must be >= 1");

  if (j.contains("dispersion")) {
    const json& d = j.at("dispersion");
    require_object(d, "dispersion");
    reject_unknown(d, {"mode_numbers", "periods"}, "dispersion");
    DispersionSpec spec;
    for (const auto& m : need(d, "mode_numbers", "dispersion"))
      spec.mode_numbers.push_back(m.get<int>());
    if (spec.mode_numbers.empty())
      throw ValidationError("config: dispersion.mode_numbers must be non-empty");
    spec.periods = d.contains("periods") ? d.at("periods").get<double>() : 4.0;
    if (!(spec.periods >= 1.0))
      throw ValidationError("config: dispersion.periods must be >= 1");
    cfg.dispersion = spec;
  }

  if (j.contains("convergence")) {
    const json& c = j.at("convergence");
    require_object(c, "convergence");
    reject_unknown(c, {"levels", "t_final", "mode_number"}, "convergence");
    ConvergenceSpec spec;
    spec.levels = need_int(c, "levels", "convergence");
    spec.t_final = need_num(c, "t_final", "convergence");
    spec.mode_number = need_int(c, "mode_number", "convergence");
    if (spec.levels < 3) throw ValidationError("config: convergence.levels must be >= 3");
    if (!(spec.t_final > 0.0))
      throw ValidationError("config: convergence.t_final must be positive");
    cfg.convergence = spec;
  }

  // Cross-field preconditions, checked before any allocation elsewhere.
  if (auto* pw = std::get_if<InitialPlaneWave>(&cfg.initial)) {
    if (std::abs(pw->mode_number) > cfg.grid.n_sites / 2)
      throw ValidationError("config: initial.mode_number beyond the grid Nyquist limit");
  }
  if (auto* ga = std::get_if<InitialGaussian>(&cfg.initial)) {
    if (ga->width < 4.0 * cfg.grid.dx)
      throw ValidationError("config: initial.width must be at least 4 dx");
  }
  if (cfg.mode == ModeTag::External && cfg.potential.kind == PotentialProfile::Kind::None)
    throw ValidationError("config: external mode requires a potential profile");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace rdf
