#include "bergman/characteristics.hpp"
#include "bergman/experiments.hpp"

#include <cmath>
#include <sstream>

namespace bergman {

namespace {

struct Case {
  double p, a, b;
};

std::vector<Case> read_cases(const ExperimentConfig& cfg) {
  std::vector<Case> out;
  if (!cfg.params.contains("cases")) return {{2, 0, 0}, {2, 1, 0}, {3, 0, 1}};
  for (const auto& c : cfg.params["cases"]) out.push_back({c.value("p", 2.0), c.value("a", 0.0), c.value("b", 0.0)});
  return out;
}

std::string label(const Case& c) {
  std::ostringstream os;
  os << "(p,a,b)=(" << c.p << "," << c.a << "," << c.b << ")";
  return os.str();
}

}  // namespace

ResultTable run_window_check(const ExperimentConfig& cfg) {
  if (cfg.n != 1) throw ConfigError("window: power-weight study runs at n = 1");
  const int n = 1;
  const auto cases = read_cases(cfg);
  const auto cuts = cfg.numbers("cut_shells", {10, 20, 30});
  const int dmin = cfg.integer("min_depth", 1), dmax = cfg.depth_or(cfg.integer("max_depth", 6));
  const double threshold = cfg.number("divergence_threshold", 1e3);
  const double growth_min = cfg.number("growth_ratio", 1.1);
  const double stable_growth = cfg.number("stable_growth", 1.05);
  const double depth_tol = cfg.number("depth_tolerance", 0.05);
  if (cuts.size() < 2) throw ConfigError("window: need at least two cut_shells");
  Resolution res = cfg.resolution(n);
  for (double s : cuts) res.shells = std::max<int>(res.shells, static_cast<int>(s));

  std::vector<BallPoint> apexes;
  for (int N = dmin; N <= dmax; ++N) {
    const double gap = generation_gap(N, res.theta);
    apexes.push_back(BallPoint::with_defect(CVec{1.0 - gap}, gap * (2.0 - gap)));
  }
  std::vector<std::unique_ptr<GlobalGridAverager>> avgs;
  for (double s : cuts) avgs.push_back(std::make_unique<GlobalGridAverager>(res, generation_gap(int(s), res.theta), n));

  std::vector<std::string> cols{"p", "a", "b", "t", "region", "expected"};
  for (double s : cuts) cols.push_back("value_S" + std::to_string(int(s)));
  for (const char* c : {"depth_change", "growth", "flag", "match"}) cols.push_back(c);
  ResultTable t("window", cols);

  std::size_t mismatches = 0, rows = 0;
  nlohmann::json per_case = nlohmann::json::array();
  for (const auto& c : cases) {
    const double lo = -c.p * c.a - 1.0, hi = c.p * (c.b + 1.0) - 1.0, w = hi - lo;
    struct Probe { double t; const char* region; };
    const std::vector<Probe> probes{{lo - 0.5, "outside"}, {lo, "edge"},          {lo + 0.25 * w, "inside"},
                                    {lo + 0.5 * w, "inside"}, {lo + 0.75 * w, "inside"}, {hi, "edge"},
                                    {hi + 0.5, "outside"}};
    std::size_t case_bad = 0;
    for (const auto& pr : probes) {
      const Weight u = Weight::power(n, pr.t - c.b);
      const Weight sigma = dual_weight(u, c.p);
      std::vector<double> vals;
      double depth_change = 0.0;
      for (std::size_t k = 0; k < avgs.size(); ++k) {
        const auto rep = characteristic_D(u, sigma, c.p, c.a, c.b, apexes, *avgs[k], "ray depth");
        vals.push_back(rep.value);
        if (k + 1 == avgs.size()) {
          // change of the per-depth value between the two deepest apexes
          const auto& r = rep.rows;
          if (r.size() >= 2) depth_change = std::abs(r.back().value - r[r.size() - 2].value) / r.back().value;
        }
      }
      bool monotone = true;
      for (std::size_t k = 1; k < vals.size(); ++k) monotone = monotone && vals[k] > vals[k - 1];
      const double growth = vals.back() / vals[vals.size() - 2];
      const bool divergent = vals.back() > threshold || (monotone && growth > growth_min);
      const bool stable = !divergent && growth < stable_growth && depth_change < depth_tol;
      const std::string flag = divergent ? "divergent" : (stable ? "stable" : "undecided");
      const std::string expected = std::string(pr.region) == "inside" ? "stable" : "divergent";
      const bool match = flag == expected;
      if (!match) {
        ++mismatches;
        ++case_bad;
      }
      ++rows;
      std::vector<ResultTable::Cell> row{c.p, c.a, c.b, pr.t, pr.region, expected};
      for (double v : vals) row.push_back(v);
      row.insert(row.end(), {depth_change, growth, flag, match});
      t.add_row(row);
    }
    per_case.push_back({{"case", label(c)}, {"window", {lo, hi}}, {"mismatches", case_bad}});
  }
  t.metadata()["n"] = n;
  t.metadata()["grid"] = res.describe();
  t.metadata()["cases"] = per_case;
  t.metadata()["apex_depths"] = {dmin, dmax};
  t.metadata()["cut_shells"] = cuts;
  t.metadata()["divergence_rule"] = "value > threshold, or monotone growth with last ratio > growth_ratio";
  t.metadata()["stability_rule"] = "last ratio < stable_growth and deepest depth change < depth_tolerance";
  t.metadata()["config"] = cfg.to_json();
  for (const auto& pc : per_case)
    t.check("window verdict mismatches " + pc["case"].get<std::string>(), pc["mismatches"].get<double>(), "<=", 0.0);
  t.check("window verdict mismatches (all)", static_cast<double>(mismatches), "<=", 0.0,
          0.0, std::to_string(rows) + " probes");
  return t;
}

}  // namespace bergman
