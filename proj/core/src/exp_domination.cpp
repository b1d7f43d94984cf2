#include "bergman/dyadic.hpp"
#include "bergman/experiments.hpp"
#include "bergman/operators.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

ResultTable run_domination(const ExperimentConfig& cfg) {
  const int n = cfg.n;
  const double a = cfg.number("a", 0.0), b = cfg.number("b", 0.0);
  const int depth = cfg.depth_or(cfg.integer("max_depth", n == 1 ? 8 : 4));
  const int zdepth = std::min(depth, cfg.integer("sample_depth", n == 1 ? 6 : 3));
  const int samples = cfg.integer("samples", 100);
  const double drift_max = cfg.number("drift_max", 0.2);
  OperatorSpec{n, a, b, KernelFlavor::modulus, OuterForm::Q}.validate();

  ForestOptions fo;
  fo.seed = cfg.seed;
  fo.volume_exponent = b;
  fo.test_apexes = static_cast<std::size_t>(cfg.integer("forest_test_apexes", n == 1 ? 2000 : 500));
  const auto forest = CoveringForest::build(n, kDefaultTheta, depth, fo);
  const BergmanTree& t0 = forest.trees().front();

  Rng rng(cfg.seed);
  std::vector<BallPoint> zs;
  for (int i = 0; i < samples; ++i) zs.push_back(random_apex(n, generation_gap(zdepth, kDefaultTheta), rng));

  // a generation-3 kube and a generation-2 dyadic tent along the first node path
  auto first_at = [&](int gen) {
    for (std::size_t id = 0; id < t0.size(); ++id)
      if (t0.node(static_cast<int>(id)).generation == gen) return static_cast<int>(id);
    return 0;
  };
  const CVec e1 = CVec::unit(n, 0);
  std::vector<TestFunction> dict{
      TestFunction::constant(1.0),
      TestFunction::kube_indicator(t0, first_at(std::min(3, depth))),
      TestFunction::dyadic_tent_indicator(t0, first_at(std::min(2, depth))),
      TestFunction::tent_indicator(BallPoint(e1 * 0.75)),
      TestFunction::custom([](const BallPoint& z) { return cplx(std::sqrt(z.defect())); }, "(1-|z|^2)^(1/2)", true)};

  const Resolution r1 = cfg.resolution(n), r2 = r1.doubled();
  const auto g1 = build_grid(n, b, r1), g2 = build_grid(n, b, r2);

  ResultTable t("domination", {"f", "lower_ratio", "upper_ratio", "single_tree_max", "lower_refined",
                               "upper_refined", "single_tree_refined", "drift_lower", "drift_upper"});
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, drift = 0.0;
  for (const auto& f : dict) {
    const auto d1 = domination_check(forest, a, b, f, zs, g1);
    const auto d2 = domination_check(forest, a, b, f, zs, g2);
    const double dl = std::abs(d2.lower_ratio - d1.lower_ratio) / d1.lower_ratio;
    const double du = std::abs(d2.upper_ratio - d1.upper_ratio) / d1.upper_ratio;
    lo = std::min(lo, std::min(d1.lower_ratio, d2.lower_ratio));
    hi = std::max(hi, std::max(d1.upper_ratio, d2.upper_ratio));
    drift = std::max({drift, dl, du});
    t.add_row({f.descriptor, d1.lower_ratio, d1.upper_ratio, d1.single_tree_max, d2.lower_ratio, d2.upper_ratio,
               d2.single_tree_max, dl, du});
  }
  t.metadata()["n"] = n;
  t.metadata()["a"] = a;
  t.metadata()["b"] = b;
  t.metadata()["forest"] = forest.metadata();
  t.metadata()["samples"] = samples;
  t.metadata()["sample_depth"] = zdepth;
  t.metadata()["grid"] = g1.descriptor();
  t.metadata()["grid_refined"] = g2.descriptor();
  t.metadata()["config"] = cfg.to_json();
  t.check("min lower ratio", lo, ">", 0.0);
  t.check("max upper ratio", hi, "<", 1e6, 0.0, "finite");
  t.check("max refinement drift of the ratios", drift, "<", drift_max);
  return t;
}

}  // namespace bergman
