#include "bergman/dyadic.hpp"
#include "bergman/error.hpp"
#include "bergman/experiments.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

using namespace bergman;

namespace {

int run_experiment_command(const std::string& name, const std::string& config, const std::string& out, int n,
                           int depth, int res) {
  ExperimentConfig cfg = ExperimentConfig::load(config);
  if (cfg.experiment.empty()) cfg.experiment = name;
  if (cfg.experiment != name)
    throw ConfigError("config is for experiment '" + cfg.experiment + "', not '" + name + "'");
  if (n > 0) cfg.n = n;
  if (depth > 0) cfg.depth = depth;
  if (res > 0) cfg.resolution_factor = res;
  const ResultTable t = run_experiment(cfg);
  t.write(out);
  for (const auto& c : t.checks())
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_number(c.measured) << ' ' << c.relation
              << ' ' << (c.relation == "in" ? "[" + format_number(c.lo) + ", " + format_number(c.hi) + "]"
                                            : format_number(c.lo))
              << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
  std::cout << "wrote " << (std::filesystem::path(out) / (name + ".csv")).string() << " and .json\n";
  return t.passed() ? 0 : 1;
}

int tree_build(int n, int depth, int system, std::uint64_t seed, const std::string& out) {
  const double delta = std::exp(-2.0 * kDefaultTheta);
  const auto systems = build_boundary_systems(n, delta, depth, seed);
  if (system < 0 || system >= static_cast<int>(systems.size()))
    throw ConfigError("tree build: --system must lie in 0.." + std::to_string(systems.size() - 1));
  const double lambda = measure_sandwich(*systems[system], 500, seed).c1;
  const auto tree = BergmanTree::build(systems[system], kDefaultTheta, lambda, depth);
  std::ofstream o(out);
  if (!o) throw ConfigError("tree build: cannot write " + out);
  o << tree.to_json().dump() << '\n';
  std::cout << "tree n=" << n << " depth=" << depth << " nodes=" << tree.size() << " lambda=" << format_number(lambda)
            << " -> " << out << '\n';
  return 0;
}

int tree_verify(const std::string& path, std::size_t samples, const std::string& out) {
  std::ifstream in(path);
  if (!in) throw ConfigError("tree verify: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("tree verify: " + std::string(e.what()));
  }
  const auto tree = BergmanTree::from_json(j);
  const int n = tree.dimension(), depth = tree.max_depth();
  Resolution res = default_resolution(n);
  res.shells = depth + 2;
  if (n == 1) {
    res.angular = std::max(res.angular, 12 * (1 << depth));
  } else {
    res.angular = std::max(res.angular, 48);
    res.latitude = std::max(res.latitude, 16);
  }
  const auto grid = build_grid(n, 0.0, res);
  const TreeReport rep = verify_tree(tree, grid, samples);
  const auto doc = rep.to_json();
  if (out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::ofstream o(out);
    o << doc.dump(2) << '\n';
  }
  const bool ok = rep.partition_violations == 0 && rep.max_children <= rep.child_bound;
  std::cout << (ok ? "PASS" : "FAIL") << " partition violations " << rep.partition_violations << ", max children "
            << rep.max_children << " (bound " << rep.child_bound << ")\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bergman-lab: numerical experiments for weighted Bergman-type operators on the ball"};
  app.require_subcommand(1);

  std::string config, out = "results";
  int n = 0, depth = 0, res = 0;
  std::string chosen;
  for (const auto& name : experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the '" + name + "' experiment");
    sub->add_option("--config", config, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--n", n, "dimension override")->check(CLI::IsMember({1, 2}));
    sub->add_option("--depth", depth, "tree / apex depth override")->check(CLI::Range(1, 14));
    sub->add_option("--res", res, "resolution factor")->check(CLI::Range(1, 8));
    sub->callback([&chosen, name] { chosen = name; });
  }

  auto* tree = app.add_subcommand("tree", "build or verify a Bergman tree (JSON)");
  tree->require_subcommand(1);
  int tn = 1, tdepth = 8, tsys = 0;
  std::uint64_t tseed = 1;
  std::string tout = "tree.json", tin, rout;
  std::size_t samples = 10000;
  auto* tb = tree->add_subcommand("build", "build a tree and write it as JSON");
  tb->add_option("--n", tn, "dimension")->check(CLI::IsMember({1, 2}));
  tb->add_option("--depth", tdepth, "max depth")->check(CLI::Range(1, 14));
  tb->add_option("--system", tsys, "index of the shifted boundary system");
  tb->add_option("--seed", tseed, "seed (n = 2 nets)");
  tb->add_option("--out", tout, "output file");
  auto* tv = tree->add_subcommand("verify", "rebuild a tree from JSON and audit it");
  tv->add_option("--tree", tin, "tree JSON")->required()->check(CLI::ExistingFile);
  tv->add_option("--samples", samples, "sampled points");
  tv->add_option("--out", rout, "report file (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (tb->parsed()) return tree_build(tn, tdepth, tsys, tseed, tout);
    if (tv->parsed()) return tree_verify(tin, samples, rout);
    return run_experiment_command(chosen, config, out, n, depth, res);
  } catch (const std::exception& e) {
    std::cerr << "bergman-lab: " << e.what() << '\n';
    return 2;
  }
}
