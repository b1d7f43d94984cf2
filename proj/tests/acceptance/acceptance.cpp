// One PASS/FAIL line per acceptance criterion. Exit code 0 iff all gated lines pass.
#include "bergman/dyadic.hpp"
#include "bergman/experiments.hpp"
#include "bergman/operators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace bergman;

namespace {

using Clock = std::chrono::steady_clock;

struct Line {
  int id;
  bool pass;
  std::string detail;
  double seconds;
  double budget;
  bool gated = true;
};

std::vector<Line> lines;

std::string fmt(double v) { return format_number(v); }

void report(const Line& l) {
  const bool ok = l.pass && l.seconds < l.budget;
  std::printf("criterion %2d: %s  %s  [%.1f s, budget %.0f s]%s\n", l.id, ok ? "PASS" : "FAIL", l.detail.c_str(),
              l.seconds, l.budget, l.gated ? "" : "  (info, not gated)");
  std::fflush(stdout);
  lines.push_back(l);
  lines.back().pass = ok;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ExperimentConfig config(const std::string& name, int n = 1) {
  auto c = ExperimentConfig::load(std::string(BERGMAN_CONFIG_DIR) + "/" + name + ".json");
  c.n = n;
  return c;
}

std::string failed_checks(const ResultTable& t, const std::vector<std::string>& names) {
  std::string s;
  for (const auto& c : t.checks()) {
    bool wanted = names.empty();
    for (const auto& n : names) wanted = wanted || c.name.rfind(n, 0) == 0;
    if (wanted) s += (s.empty() ? "" : "; ") + c.name + " = " + fmt(c.measured) + (c.pass ? "" : " (fail)");
  }
  return s;
}

bool all_pass(const ResultTable& t, const std::vector<std::string>& names) {
  for (const auto& c : t.checks())
    for (const auto& n : names)
      if (c.name.rfind(n, 0) == 0 && !c.pass) return false;
  return true;
}

BallPoint random_point(int n, Rng& rng, double rmax) {
  return BallPoint(random_sphere_point(n, rng) * (rmax * std::pow(uniform01(rng), 1.0 / (2 * n))));
}

void geometry() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int n : {1, 2}) {
    Rng rng(1000 + n);
    for (int i = 0; i < 1000; ++i) {
      const BallPoint z = random_point(n, rng, 0.99), w = random_point(n, rng, 0.99);
      worst = std::max(worst, (mobius(z, mobius(z, w)).vec() - w.vec()).norm());
      worst = std::max(worst, (mobius(z, BallPoint::origin(n)).vec() - z.vec()).norm());
      worst = std::max(worst, mobius(z, z).norm());
      const double rhs = z.defect() * w.defect() / std::norm(1.0 - pairing(z.vec(), w.vec()));
      worst = std::max(worst, std::abs(1.0 - mobius(z, w).norm2() - rhs) / std::max(1.0, rhs));
    }
  }
  report({1, worst < 1e-10, "geometry identities, max error " + fmt(worst) + " < 1e-10", since(t0), 1});
}

void normalization() {
  const auto t0 = Clock::now();
  double mass = 0.0, drift = 0.0;
  const std::vector<std::function<double(const BallPoint&)>> smooth{
      [](const BallPoint& z) { return z.norm2(); },
      [](const BallPoint& z) { return std::exp(z[0].real()); },
      [](const BallPoint& z) { return 1.0 / (1.0 + std::norm(z[0] - 0.3)); },
      [](const BallPoint& z) { return std::cos(3.0 * z[0].imag()) + z.norm2() * z.norm2(); }};
  for (int n : {1, 2})
    for (double t : {0.0, 1.0, 2.0}) {
      const Resolution r = default_resolution(n);
      const auto g1 = build_grid(n, t, r), g2 = build_grid(n, t, r.doubled());
      mass = std::max(mass, std::abs(integrate(g1, [](const BallPoint&) { return 1.0; }) - 1.0));
      for (const auto& f : smooth) {
        const double a = integrate(g1, f), b = integrate(g2, f);
        drift = std::max(drift, std::abs(a - b) / std::abs(b));
      }
    }
  report({2, mass < 1e-6 && drift < 0.01,
          "|int dv_t - 1| = " + fmt(mass) + " < 1e-6, refinement drift " + fmt(drift) + " < 0.01", since(t0), 10});
}

// max relative error of P_b z^k over the test points; Berezin of 1 alongside
struct Repro {
  double err = 0.0, berezin = 0.0;
};

Repro reproduce(int n, double b, const Resolution& res, const std::vector<BallPoint>& zs) {
  const auto g = build_grid(n, b, res);
  const KernelOperator P({n, 0.0, b, KernelFlavor::analytic, OuterForm::S}, g);
  Repro r;
  const int deg = n == 1 ? 5 : 3;
  for (int k1 = 0; k1 <= deg; ++k1)
    for (int k2 = 0; k1 + k2 <= deg; ++k2) {
      if (n == 1 && k2 > 0) continue;
      const auto f = TestFunction::monomial({k1, k2});
      const auto fv = P.sample(f);
      for (const auto& z : zs) {
        const cplx want = f(z);
        // relative to |z^k| with a floor for points near the zero set
        r.err = std::max(r.err, std::abs(P.apply(fv, z) - want) / std::max(std::abs(want), 1e-3));
      }
    }
  for (const auto& z : zs)
    r.berezin = std::max(r.berezin, std::abs(berezin(b, TestFunction::constant(1.0), z, g) - 1.0));
  return r;
}

void reproducing() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string d;
  for (int n : {1, 2}) {
    Rng rng(3000 + n);
    std::vector<BallPoint> zs;
    for (int i = 0; i < 20; ++i) zs.push_back(random_point(n, rng, n == 1 ? 0.9 : 0.7));
    Resolution fine = default_resolution(n);
    if (n == 1) fine = fine.doubled();
    else fine.angular = 48;  // default 40
    for (double b : {0.0, 1.0}) {
      const Repro a = reproduce(n, b, default_resolution(n), zs), c = reproduce(n, b, fine, zs);
      // decreasing, or already at rounding level
      const bool dec = c.err <= a.err || c.err < 1e-11;
      ok = ok && a.err < 1e-4 && dec && a.berezin < 1e-4;
      d += (d.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + " b=" + fmt(b) + ": " + fmt(a.err) +
           " -> " + fmt(c.err) + ", Berezin " + fmt(a.berezin);
    }
  }
  report({3, ok, "reproducing error < 1e-4 and decreasing, |B1 - 1| < 1e-4 (" + d + ")", since(t0), 60});
}

void audit(int n, bool gated) {
  const auto t0 = Clock::now();
  const auto t = run_structure_audit(config("audit", n));
  const double s = since(t0);
  const std::string dim = " [n=" + std::to_string(n) + "]";
  const std::vector<std::string> c4{"kube partition", "max child", "hat ratio spread", "min hat", "volume band"};
  const std::vector<std::string> c5{"covering"};
  const std::vector<std::string> c10{"tent lower bound", "Holder"};
  report({4, all_pass(t, c4), "tree audit" + dim + ": " + failed_checks(t, c4), s, 60, gated});
  report({5, all_pass(t, c5), "covering" + dim + ": " + failed_checks(t, c5), s, 120, gated});
  report({10, all_pass(t, c10), "dyadic tent lower bound / Holder step" + dim + ": " + failed_checks(t, c10), s, 60, gated});
}

void experiment(int id, const std::string& name, int n, double budget, bool gated = true) {
  const auto t0 = Clock::now();
  const auto t = run_experiment(config(name, n));
  report({id, t.passed(), name + " [n=" + std::to_string(n) + "]: " + failed_checks(t, {}), since(t0), budget, gated});
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  try {
    geometry();
    normalization();
    reproducing();
    audit(1, true);
    experiment(6, "domination", 1, 120);
    experiment(6, "domination", 2, 120);
    experiment(7, "sharp", 1, 180);
    experiment(8, "window", 1, 60);
    experiment(9, "bound", 1, 300);
    audit(2, false);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  int gated_fail = 0, info_fail = 0;
  for (const auto& l : lines) (l.pass ? 0 : (l.gated ? ++gated_fail : ++info_fail));
  std::printf("summary: %d gated failures, %d informational failures, total %.0f s (budget 900 s)\n", gated_fail,
              info_fail, since(t0));
  return gated_fail == 0 && since(t0) < 900 ? 0 : 1;
}
