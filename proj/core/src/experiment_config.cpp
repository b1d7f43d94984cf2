#include "bergman/error.hpp"
#include "bergman/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bergman {

namespace {

using nlohmann::json;

void check_triple(double p, double a, double b, const std::string& where) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError(where + ": p must lie in (1, inf)");
  if (!(-a < b + 1.0)) throw ConfigError(where + ": window -a < b+1 violated");
  if (!(b > -1.0)) throw ConfigError(where + ": grid exponent b must exceed -1");
  if (!(p * a + b > -1.0)) throw ConfigError(where + ": grid exponent pa+b must exceed -1");
}

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"sharp", "window", "bound", "domination", "audit"};
  return names;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig c;
  try {
    if (j.contains("experiment")) c.experiment = j.at("experiment").get<std::string>();
    c.n = j.value("n", 1);
    c.seed = j.value("seed", std::uint64_t{1});
    c.depth = j.value("depth", -1);
    c.resolution_factor = j.value("resolution_factor", 1);
    if (j.contains("params")) c.params = j.at("params");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!c.params.is_object()) throw ConfigError("config: 'params' must be an object");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  return {{"experiment", experiment}, {"n", n},          {"seed", seed},
          {"depth", depth},           {"resolution_factor", resolution_factor}, {"params", params}};
}

void ExperimentConfig::validate() const {
  bool known = false;
  for (const auto& e : experiment_names()) known = known || e == experiment;
  if (!known) throw ConfigError("config: unknown experiment '" + experiment + "'");
  if (n != 1 && n != 2) throw ConfigError("config: n must be 1 or 2");
  if (resolution_factor < 1) throw ConfigError("config: resolution_factor must be >= 1");
  if (depth == 0 || depth < -1 || depth > 14) throw ConfigError("config: depth must lie in 1..14");
  if (params.contains("p") || params.contains("a") || params.contains("b"))
    check_triple(get_number(params, "p", 2.0), get_number(params, "a", 0.0), get_number(params, "b", 0.0), "params");
  if (params.contains("cases")) {
    if (!params["cases"].is_array()) throw ConfigError("config: 'cases' must be an array");
    for (const auto& c : params["cases"])
      check_triple(get_number(c, "p", 2.0), get_number(c, "a", 0.0), get_number(c, "b", 0.0), "cases");
  }
  for (const char* key : {"deltas", "t_values"}) {
    if (!params.contains(key)) continue;
    if (!params[key].is_array()) throw ConfigError(std::string("config: '") + key + "' must be an array");
    for (const auto& v : params[key])
      if (!v.is_number()) throw ConfigError(std::string("config: '") + key + "' must hold numbers");
  }
  if (params.contains("deltas"))
    for (const auto& v : params["deltas"]) {
      const double d = v.get<double>();
      if (!(d > 0.0 && d <= 1.0)) throw ConfigError("config: deltas must lie in (0, 1]");
    }
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
  return get_number(params, key.c_str(), fallback);
}

int ExperimentConfig::integer(const std::string& key, int fallback) const {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number_integer()) throw ConfigError("config: '" + key + "' must be an integer");
  return params[key].get<int>();
}

std::vector<double> ExperimentConfig::numbers(const std::string& key, std::vector<double> fallback) const {
  if (!params.contains(key)) return fallback;
  try {
    return params[key].get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ConfigError("config: '" + key + "' must be an array of numbers");
  }
}

Resolution ExperimentConfig::resolution(int dim) const { return default_resolution(dim).scaled(resolution_factor); }

ResultTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.experiment == "sharp") return run_sharp_sweep(cfg);
  if (cfg.experiment == "window") return run_window_check(cfg);
  if (cfg.experiment == "bound") return run_bound_check(cfg);
  if (cfg.experiment == "domination") return run_domination(cfg);
  return run_structure_audit(cfg);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("fit_slope: need two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace bergman
