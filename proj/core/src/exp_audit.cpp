#include "bergman/characteristics.hpp"
#include "bergman/dyadic.hpp"
#include "bergman/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace bergman {

namespace {

struct Family {
  std::string name;
  double p, a, b;
  Weight u;
};

// max of band maxima over min of band minima, depths in [lo, hi]
double band_spread(const std::vector<DepthBand>& bands, int lo, int hi) {
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (const auto& b : bands)
    if (b.depth >= lo && b.depth <= hi && b.nodes > 0) {
      mn = std::min(mn, b.min);
      mx = std::max(mx, b.max);
    }
  return mx / mn;
}

}  // namespace

ResultTable run_structure_audit(const ExperimentConfig& cfg) {
  const int n = cfg.n;
  const int depth = cfg.depth_or(cfg.integer("max_depth", n == 1 ? 12 : 4));
  const double vt = cfg.number("t", 0.0);
  const int apexes = cfg.integer("covering_apexes", 1000);
  const int per_tent = cfg.integer("samples_per_tent", 1000);
  const int points = cfg.integer("partition_samples", 10000);
  const double ratio_max = cfg.number("covering_ratio_max", 100.0);
  const double hat_spread_max = cfg.number("hat_spread_max", 2.0);
  const double band_spread_max = cfg.number("volume_band_spread_max", 64.0);
  const int hat_lo = std::min(cfg.integer("hat_depth_lo", 5), std::max(1, depth - 1));
  const int hat_hi = std::min(cfg.integer("hat_depth_hi", 10), std::max(1, depth - 1));
  const int dyadic_gen = std::min(depth, cfg.integer("dyadic_generation", n == 1 ? 10 : 3));
  const double drift_max = cfg.number("drift_max", 0.2);

  // grid fine enough that every kube to depth D holds >= 16 nodes
  Resolution res = cfg.resolution(n);
  res.shells = depth + 2;
  if (n == 1) {
    res.angular = std::max(res.angular, 12 * (1 << depth));
  } else {
    res.angular = std::max(res.angular, 48);
    res.latitude = std::max(res.latitude, 16);
  }
  const auto grid = build_grid(n, vt, res);

  ForestOptions fo;
  fo.seed = cfg.seed;
  fo.volume_exponent = vt;
  fo.test_apexes = static_cast<std::size_t>(apexes);
  fo.max_systems = cfg.integer("max_systems", fo.max_systems);
  const auto forest = CoveringForest::build(n, kDefaultTheta, depth, fo);
  const BergmanTree& tree = forest.trees().front();
  const TreeReport rep = verify_tree(tree, grid, static_cast<std::size_t>(points), cfg.seed + 6);

  // covering: containment by rejection sampling, volume ratio against the exact tent volume
  Rng rng(cfg.seed + 4);
  std::size_t violations = 0, lookups = 0;
  double worst = 0.0;
  std::map<int, std::size_t> by_tree;
  for (int i = 0; i < apexes; ++i) {
    const BallPoint z = random_apex(n, generation_gap(depth, kDefaultTheta), rng);
    const CoverHit h = covering_lookup(forest, z);
    const BergmanTree& tr = forest.trees()[h.tree];
    for (const auto& w : sample_tent(z, static_cast<std::size_t>(per_tent), tr.outer_radius(), rng))
      if (!tr.dyadic_tent_contains(h.node, w)) ++violations;
    worst = std::max(worst, forest.tent_volume(h.tree, h.node) / tent_volume_exact(z, vt));
    ++by_tree[h.tree];
    ++lookups;
  }

  // tent lower bound and the Holder step on the dyadic tents
  std::vector<Family> fams;
  for (double tv : {-0.5, 0.5}) fams.push_back({"power t=" + format_number(tv), 2, 0, 0, Weight::power(n, tv)});
  fams.push_back({"sharp delta=1/4", 2, 0, 0, sharp_weight(0.25, n, 0.0)});
  fams.push_back({"power t=0.5", 2, 1, 0, Weight::power(n, 0.5)});
  fams.push_back({"sharp delta=1/4", 2, 1, 0, sharp_weight(0.25, n, 0.0)});
  fams.push_back({"power t=1.5", 3, 0, 1, Weight::power(n, 0.5)});
  fams.push_back({"sharp delta=1/2", 3, 0, 1, sharp_weight(0.5, n, 1.0)});

  Resolution coarse = res;
  coarse.angular = n == 1 ? res.angular / 2 : res.angular * 3 / 4;
  std::map<std::pair<double, int>, QuadratureGrid> grids;
  auto grid_for = [&](double t, int level) -> const QuadratureGrid& {
    auto key = std::make_pair(t, level);
    auto it = grids.find(key);
    if (it == grids.end()) it = grids.emplace(key, build_grid(n, t, level ? res : coarse)).first;
    return it->second;
  };

  ResultTable tab("audit", {"section", "name", "p", "a", "b", "value", "value_coarse", "drift", "extra"});
  tab.add_row({"tree", "partition_violations", "", "", "", static_cast<double>(rep.partition_violations), "", "",
               std::to_string(rep.sampled_points) + " points"});
  tab.add_row({"tree", "max_children", "", "", "", rep.max_children, "", "", "bound " + std::to_string(rep.child_bound)});
  for (const auto& b : rep.hat_ratio_by_depth)
    tab.add_row({"tree", "hat_ratio depth " + std::to_string(b.depth), "", "", "", b.max, "", "",
                 "min " + format_number(b.min)});
  for (const auto& b : rep.volume_band_by_depth)
    tab.add_row({"tree", "volume_band depth " + std::to_string(b.depth), "", "", "", b.max, "", "",
                 "min " + format_number(b.min)});
  tab.add_row({"covering", "containment_violations", "", "", "", static_cast<double>(violations), "", "",
               std::to_string(lookups) + " apexes x " + std::to_string(per_tent) + " samples"});
  tab.add_row({"covering", "max_volume_ratio", "", "", "", worst, "", "", "M = " + std::to_string(forest.size())});

  double tent_min = std::numeric_limits<double>::infinity(), holder_max = 0.0, drift = 0.0;
  std::size_t excluded = 0;
  for (const auto& f : fams) {
    const Weight s = dual_weight(f.u, f.p);
    const double pab = f.p * f.a + f.b;
    const auto fine = characteristic_dyadic(f.u, s, f.p, f.a, f.b, tree, grid_for(f.b, 1), grid_for(pab, 1), dyadic_gen);
    const auto crs = characteristic_dyadic(f.u, s, f.p, f.a, f.b, tree, grid_for(f.b, 0), grid_for(pab, 0), dyadic_gen);
    const double dl = std::abs(fine.tent_lower_min - crs.tent_lower_min) / fine.tent_lower_min;
    const double dh = std::abs(fine.holder_max - crs.holder_max) / fine.holder_max;
    tent_min = std::min(tent_min, fine.tent_lower_min);
    holder_max = std::max(holder_max, fine.holder_max);
    drift = std::max({drift, dl, dh});
    excluded += fine.excluded;
    tab.add_row({"tent_lower", f.name, f.p, f.a, f.b, fine.tent_lower_min, crs.tent_lower_min, dl,
                 "dyadic D = " + format_number(fine.value)});
    tab.add_row({"holder", f.name, f.p, f.a, f.b, fine.holder_max, crs.holder_max, dh, ""});
  }

  const double hat_spread = band_spread(rep.hat_ratio_by_depth, hat_lo, hat_hi);
  const double vol_spread = band_spread(rep.volume_band_by_depth, 1, depth);
  nlohmann::json hits = nlohmann::json::object();
  for (const auto& [k, v] : by_tree) hits[std::to_string(k)] = v;
  tab.metadata()["n"] = n;
  tab.metadata()["depth"] = depth;
  tab.metadata()["volume_exponent"] = vt;
  tab.metadata()["grid"] = grid.descriptor();
  tab.metadata()["tree_report"] = rep.to_json();
  tab.metadata()["forest"] = forest.metadata();
  tab.metadata()["covering_hits_per_tree"] = hits;
  tab.metadata()["dyadic_generation"] = dyadic_gen;
  tab.metadata()["dyadic_excluded_nodes"] = excluded;
  tab.metadata()["hat_depths"] = {hat_lo, hat_hi};
  tab.metadata()["config"] = cfg.to_json();

  tab.check("kube partition violations", static_cast<double>(rep.partition_violations), "<=", 0.0);
  tab.check("max child count", rep.max_children, "<=", rep.child_bound);
  tab.check("hat ratio spread over depths " + std::to_string(hat_lo) + ".." + std::to_string(hat_hi), hat_spread,
            "<=", hat_spread_max);
  tab.check("min hat ratio", rep.hat_ratio_min, ">=", 1.0 - 1e-9);
  tab.check("volume band spread", vol_spread, "<=", band_spread_max);
  tab.check("covering containment violations", static_cast<double>(violations), "<=", 0.0);
  tab.check("covering volume ratio", worst, "<", ratio_max);
  tab.check("tent lower bound minimum", tent_min, ">", 0.0);
  tab.check("Holder constant", holder_max, "<", 1e6, 0.0, "finite");
  tab.check("tent lower bound / Holder refinement drift", drift, "<", drift_max);
  return tab;
}

}  // namespace bergman
