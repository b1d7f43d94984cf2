#pragma once

#include "bergman/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bergman {

// Parsed experiment configuration. `params` keeps the experiment-specific
// section; the accessors below fall back to defaults for missing keys.
struct ExperimentConfig {
  std::string experiment;
  int n = 1;
  std::uint64_t seed = 1;
  int depth = -1;           // -1: experiment default
  int resolution_factor = 1;
  nlohmann::json params = nlohmann::json::object();

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  // throws ConfigError on a bad window or grid exponent
  void validate() const;

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
  int depth_or(int fallback) const { return depth > 0 ? depth : fallback; }
  Resolution resolution(int dim) const;  // default_resolution scaled by resolution_factor
};

const std::vector<std::string>& experiment_names();

struct Check {
  std::string name;
  double measured = 0.0;
  std::string relation;  // "<", "<=", ">", ">=", "in"
  double lo = 0.0, hi = 0.0;
  bool pass = false;
  std::string note;
  nlohmann::json to_json() const;
};

// CSV rows of named columns plus a JSON metadata document.
class ResultTable {
 public:
  using Cell = nlohmann::json;  // number, string or bool

  ResultTable() = default;
  ResultTable(std::string experiment, std::vector<std::string> columns);

  const std::string& experiment() const { return experiment_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  void add_row(std::vector<Cell> row);

  nlohmann::json& metadata() { return meta_; }
  const nlohmann::json& metadata() const { return meta_; }

  const Check& check(const std::string& name, double measured, const std::string& relation, double lo,
                     double hi = 0.0, const std::string& note = "");
  const std::vector<Check>& checks() const { return checks_; }
  const Check* find_check(const std::string& name) const;
  bool passed() const;

  std::string csv() const;
  nlohmann::json document() const;  // metadata with checks
  // writes <dir>/<experiment>.csv and <dir>/<experiment>.json
  void write(const std::filesystem::path& dir) const;

 private:
  std::string experiment_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  nlohmann::json meta_ = nlohmann::json::object();
  std::vector<Check> checks_;
};

// Fixed-format number for CSV cells.
std::string format_number(double v);

ResultTable run_sharp_sweep(const ExperimentConfig& cfg);
ResultTable run_window_check(const ExperimentConfig& cfg);
ResultTable run_bound_check(const ExperimentConfig& cfg);
ResultTable run_domination(const ExperimentConfig& cfg);
ResultTable run_structure_audit(const ExperimentConfig& cfg);

// dispatch on cfg.experiment
ResultTable run_experiment(const ExperimentConfig& cfg);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bergman
