#include "bergman/characteristics.hpp"
#include "bergman/experiments.hpp"
#include "bergman/operators.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

namespace {

struct WitnessRatio {
  double f_norm = 0.0;    // ||f||_{L^2_b(u)}
  double pf_norm = 0.0;   // ||P_b f||_{L^2_b(u)} restricted to T_{-1/2}
  double f_avg = 0.0;     // <f>^{dv_b} over T_{1/2}
  double pf_min = 0.0;    // min |P_b f| on the T_{-1/2} grid
};

// f = u^{-1} 1_{T_{1/2}}. The norm of P_b f is taken over T_{-1/2} only, where
// the kernel is smooth; this is a lower bound for the full norm.
WitnessRatio sharp_witness(const Weight& u, double b, const TentGridOptions& opt) {
  const int n = u.dimension();
  const CVec e1 = CVec::unit(n, 0);
  const BallPoint plus(e1 * 0.5), minus(e1 * -0.5);
  const Weight uinv = u.pow(-1.0);
  const auto inner = build_tent_grid(n, b, plus, opt, uinv.hint(e1));
  const auto outer = build_tent_grid(n, b, minus, opt, u.hint(e1 * -1.0));

  std::vector<CVec> w(inner.size());
  std::vector<double> cf(inner.size());
  double f2 = 0.0;
  for (std::size_t j = 0; j < inner.size(); ++j) {
    const BallPoint x = inner.node(j);
    w[j] = x.vec();
    const double v = uinv(x);
    cf[j] = inner.coeff(j) * v;  // f = u^{-1} on the tent
    f2 += inner.coeff(j) * v;    // |f|^2 u = u^{-1}
  }
  const KernelPower kp(n + 1 + b);
  WitnessRatio r;
  r.pf_min = std::numeric_limits<double>::infinity();
  double p2 = 0.0;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const BallPoint z = outer.node(i);
    cplx s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += cf[j] * kp.analytic(1.0 - pairing(z.vec(), w[j]));
    p2 += outer.coeff(i) * std::norm(s) * u(z);
    r.pf_min = std::min(r.pf_min, std::abs(s));
  }
  r.f_norm = std::sqrt(f2);
  r.pf_norm = std::sqrt(p2);
  r.f_avg = f2 / tent_volume_exact(plus, b);
  return r;
}

}  // namespace

ResultTable run_sharp_sweep(const ExperimentConfig& cfg) {
  const int n = cfg.n;
  const double b = cfg.number("b", 0.0);
  const auto deltas = cfg.numbers("deltas", {1.0, 0.5, 0.25, 0.125, 0.0625});
  ApexSetOptions aso;
  aso.min_depth = cfg.integer("min_depth", 2);
  aso.max_depth = cfg.depth_or(cfg.integer("max_depth", 12));
  aso.directions = cfg.integer("directions", n == 1 ? 16 : 8);
  aso.seed = cfg.seed;
  TentGridOptions topt;
  if (n == 2) topt = {12, 8, 4, 6};
  topt.radial *= cfg.resolution_factor;
  topt.angular *= cfg.resolution_factor;
  const AdaptedTentAverager avg(topt);
  const double spread_max = cfg.number("spread_max", 5.0);
  const double slope_lo = cfg.number("slope_lo", 0.8), slope_hi = cfg.number("slope_hi", 1.2);

  ResultTable t("sharp", {"delta", "B2", "B2_alt", "attaining_radius", "attaining_angle", "excluded", "f_norm",
                          "Pf_norm_lower", "ratio", "ratio_over_B2", "f_avg", "Pf_min_over_f_avg"});
  std::vector<double> lx, ly, rb;
  double b2_at_one = std::numeric_limits<double>::quiet_NaN();
  for (double d : deltas) {
    const Weight u = sharp_weight(d, n, b);
    const auto apexes = default_apex_set(n, u, aso);
    const auto rep = characteristic_B(u, 2.0, b, apexes, avg, describe(aso));
    const auto wr = sharp_witness(u, b, topt);
    const double ratio = wr.pf_norm / wr.f_norm;
    const BallPoint& za = rep.attaining_apex;
    t.add_row({d, rep.value, rep.value_alt, za.norm(), za.norm() > 0 ? std::arg(za[0]) : 0.0, rep.excluded,
               wr.f_norm, wr.pf_norm, ratio, ratio / rep.value, wr.f_avg, wr.pf_min / wr.f_avg});
    if (d < 1.0) {
      lx.push_back(std::log(1.0 / d));
      ly.push_back(std::log(rep.value));
      rb.push_back(ratio / rep.value);
    } else {
      b2_at_one = rep.value;
    }
  }
  t.metadata()["n"] = n;
  t.metadata()["b"] = b;
  t.metadata()["p"] = 2.0;
  t.metadata()["apex_set"] = describe(aso);
  t.metadata()["averager"] = avg.describe();
  t.metadata()["witness"] = "f = u^-1 1_T(1/2); ||P_b f|| over T(-1/2) (lower bound)";
  t.metadata()["config"] = cfg.to_json();

  if (!std::isnan(b2_at_one)) t.check("B2 at delta=1 equals 1", b2_at_one, "in", 1.0 - 1e-6, 1.0 + 1e-6);
  if (lx.size() >= 2) {
    t.check("slope of log B2 vs log(1/delta)", fit_slope(lx, ly), "in", slope_lo, slope_hi);
    const auto [mn, mx] = std::minmax_element(rb.begin(), rb.end());
    t.check("min ratio/B2", *mn, ">", 0.0);
    t.check("max/min of ratio/B2", *mx / *mn, "<=", spread_max);
  }
  return t;
}

}  // namespace bergman
