#include "bergman/characteristics.hpp"
#include "bergman/experiments.hpp"
#include "bergman/norms.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

namespace {

struct Member {
  std::string family;
  double parameter;
  Weight u;
};

// dictionary for p != 2: sigma-type functions on tents along the positive axis,
// plus kube-like blocks (shell x angular sector) for the random part
std::vector<Witness> tent_dictionary(const QuadratureGrid& g, const Weight& u, double p, int depth) {
  const Weight s = dual_weight(u, p);
  std::vector<Witness> out{{"1", std::vector<cplx>(g.size(), 1.0)}};
  for (double angle : {0.0, std::numbers::pi})
    for (int N = 1; N <= depth; ++N) {
      const double gap = generation_gap(N, g.resolution().theta);
      const BallPoint apex = BallPoint::with_defect(CVec{std::polar(1.0 - gap, angle)}, gap * (2.0 - gap));
      const TentSpec tent{apex};
      Witness w{"sigma 1_T(depth " + std::to_string(N) + ", angle " + format_number(angle) + ")",
                std::vector<cplx>(g.size(), 0.0)};
      for (std::size_t k = 0; k < g.size(); ++k) {
        const BallPoint z = g.node(k);
        if (tent_contains(tent, z)) w.values[k] = s(z);
      }
      out.push_back(std::move(w));
    }
  return out;
}

std::vector<int> block_pieces(const QuadratureGrid& g, int sectors) {
  std::vector<int> out(g.size());
  const std::size_t nd = g.direction_count();
  const int per_shell = g.resolution().radial;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const int shell = static_cast<int>(k / nd) / per_shell;
    const int sector = static_cast<int>(g.direction_angle(k % nd) / (2.0 * std::numbers::pi) * sectors);
    out[k] = shell * sectors + std::min(sector, sectors - 1);
  }
  return out;
}

}  // namespace

ResultTable run_bound_check(const ExperimentConfig& cfg) {
  if (cfg.n != 1) throw ConfigError("bound: norm estimates run at n = 1");
  const int n = 1;
  const double b = cfg.number("b", 0.0);
  const auto powers = cfg.numbers("power_t", {-0.5, 0.0, 0.5});
  const auto deltas = cfg.numbers("deltas", {0.5, 0.25, 0.125});
  const auto extra_p = cfg.numbers("witness_p", {3.0, 1.5});
  const double upper_max = cfg.number("upper_max", 10.0), lower_min = cfg.number("lower_min", 0.1);
  const double drift_max = cfg.number("drift_max", 0.2);
  ApexSetOptions aso;
  aso.min_depth = cfg.integer("min_depth", 2);
  aso.max_depth = cfg.depth_or(cfg.integer("max_depth", 12));
  aso.directions = cfg.integer("directions", 16);
  aso.seed = cfg.seed;
  TentGridOptions topt;
  topt.radial *= cfg.resolution_factor;
  topt.angular *= cfg.resolution_factor;
  const AdaptedTentAverager avg(topt);

  std::vector<Member> family;
  for (double tv : powers) family.push_back({"power", tv, Weight::power(n, tv - b)});
  for (double d : deltas) family.push_back({"sharp", d, sharp_weight(d, n, b)});

  const Resolution r1 = cfg.resolution(n), r2 = r1.doubled();
  const auto g1 = build_grid(n, b, r1), g2 = build_grid(n, b, r2);
  const OperatorSpec P{n, 0.0, b, KernelFlavor::analytic, OuterForm::S};
  const auto op1 = spectral_kernel_operator(P, g1), op2 = spectral_kernel_operator(P, g2);
  NormOptions nopt;
  nopt.seed = cfg.seed;

  ResultTable t("bound", {"family", "parameter", "p", "C_hat", "N_hat", "N_hat_refined", "drift", "converged",
                          "upper_quantity", "lower_quantity", "method"});
  double up = 0.0, low = std::numeric_limits<double>::infinity(), drift = 0.0;
  bool all_converged = true;
  for (const auto& m : family) {
    const auto C = characteristic_B(m.u, 2.0, b, default_apex_set(n, m.u, aso), avg, describe(aso)).value;
    const auto e1 = weighted_norm(op1, g1, m.u, m.u, 2.0, NormMethod::power_iteration, {}, {}, nopt);
    const auto e2 = weighted_norm(op2, g2, m.u, m.u, 2.0, NormMethod::power_iteration, {}, {}, nopt);
    const double d = std::abs(e2.value - e1.value) / e1.value;
    const double uq = e2.value / C, lq = e2.value / std::pow(C, 0.25);
    up = std::max(up, uq);
    low = std::min(low, lq);
    drift = std::max(drift, d);
    all_converged = all_converged && e1.converged && e2.converged;
    t.add_row({m.family, m.parameter, 2.0, C, e1.value, e2.value, d, e1.converged && e2.converged, uq, lq,
               e2.method});
  }

  // p != 2: witness search on a coarser grid, power weights inside the window; logged
  double extra_min = std::numeric_limits<double>::infinity(), extra_max = 0.0;
  if (!extra_p.empty()) {
    Resolution rc = r1;
    rc.angular = std::max(64, r1.angular / 4);
    const auto gc = build_grid(n, b, rc);
    const auto opc = spectral_kernel_operator(P, gc);
    const auto pieces = block_pieces(gc, 16);
    for (double p : extra_p)
      for (double q : {0.25, 0.5, 0.75}) {
        // quarter points of the window -1 < t < p(b+1) - 1
        const double tv = -1.0 + q * p * (b + 1.0);
        const Weight u = Weight::power(n, tv - b);
        const auto C = characteristic_B(u, p, b, default_apex_set(n, u, aso), avg, describe(aso)).value;
        const auto e = weighted_norm(opc, gc, u, u, p, NormMethod::witness_search, tent_dictionary(gc, u, p, 8),
                                     pieces, nopt);
        const double uq = e.value / std::pow(C, std::max(1.0, 1.0 / (p - 1.0)));
        const double lq = e.value / std::pow(C, 1.0 / (2.0 * p));
        extra_min = std::min({extra_min, uq, lq});
        extra_max = std::max({extra_max, uq, lq});
        t.add_row({"power", tv, p, C, e.value, "", "", true, uq, lq, e.method + ": " + e.witness});
      }
  }

  t.metadata()["n"] = n;
  t.metadata()["b"] = b;
  t.metadata()["grid"] = g1.descriptor();
  t.metadata()["grid_refined"] = g2.descriptor();
  t.metadata()["operator"] = op1.name;
  t.metadata()["apex_set"] = describe(aso);
  t.metadata()["averager"] = avg.describe();
  t.metadata()["note"] =
      "N_hat is a lower bound for the discretized norm; the upper quantity N_hat/C_hat is a consistency check";
  t.metadata()["config"] = cfg.to_json();
  t.check("max N_hat/C_hat (p=2)", up, "<=", upper_max, 0.0, "consistency check: N_hat is a lower bound");
  t.check("min N_hat/C_hat^(1/4) (p=2)", low, ">=", lower_min);
  t.check("max refinement drift of N_hat", drift, "<", drift_max);
  t.check("power iteration converged", all_converged ? 1.0 : 0.0, ">=", 1.0);
  if (!extra_p.empty()) {
    t.check("min sandwich quantity (p != 2)", extra_min, ">", 0.0);
    t.check("max sandwich quantity (p != 2)", extra_max, "<", 1e6, 0.0, "finite");
  }
  return t;
}

}  // namespace bergman
