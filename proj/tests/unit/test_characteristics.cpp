#include "bergman/characteristics.hpp"
#include "bergman/dyadic.hpp"
#include "bergman/experiments.hpp"

#include <doctest.h>

#include <cmath>

using namespace bergman;

namespace {

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

// whole-ball average of (1-|z|^2)^s against dv_b
double ball_average(int n, double s, double b) { return beta_fn(n, b + s + 1.0) / beta_fn(n, b + 1.0); }

}  // namespace

TEST_SUITE("characteristics") {

TEST_CASE("apex at the origin: closed form for power weights") {
  const AdaptedTentAverager avg;
  for (int n : {1, 2})
    for (double b : {0.0, 1.0})
      for (double s : {-0.5, 0.3}) {
        const double p = 2.0;
        const Weight u = Weight::power(n, s);
        const auto rep = characteristic_B(u, p, b, {BallPoint::origin(n)}, avg);
        const double oracle = ball_average(n, -s, b) * ball_average(n, s, b);
        // the split-ball grid resolves the edge weight up to the corner where the
        // cut plane meets the sphere, hence 2e-4 rather than rounding level
        CHECK(rep.value == doctest::Approx(oracle).epsilon(2e-4));
      }
}

TEST_CASE("characteristic of a constant weight is one") {
  const AdaptedTentAverager avg;
  ApexSetOptions o;
  o.max_depth = 8;
  for (int n : {1, 2}) {
    const Weight u = Weight::constant(n, 7.0);
    const auto apexes = default_apex_set(n, u, o);
    for (double p : {1.5, 2.0, 3.0})
      CHECK(characteristic_B(u, p, 0.0, apexes, avg).value == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("property: Holder gives B_p >= 1, scale invariance") {
  const AdaptedTentAverager avg;
  ApexSetOptions o;
  o.max_depth = 6;
  o.directions = 4;
  for (double d : {0.5, 0.25}) {
    const Weight u = sharp_weight(d, 1, 0.0);
    const auto apexes = default_apex_set(1, u, o);
    const auto rep = characteristic_B(u, 2.0, 0.0, apexes, avg);
    for (const auto& r : rep.rows) CHECK(r.value >= 1.0 - 1e-9);
    CHECK(characteristic_B(u.scaled(50.0), 2.0, 0.0, apexes, avg).value ==
          doctest::Approx(rep.value).epsilon(1e-10));
  }
}

TEST_CASE("the two forms of D_{p,a,b} agree up to a bounded factor") {
  const AdaptedTentAverager avg;
  ApexSetOptions o;
  o.max_depth = 8;
  const Weight u = Weight::power(1, 0.5);
  const double p = 2.0, a = 1.0, b = 0.0;
  const auto rep = characteristic_D(u, dual_weight(u, p), p, a, b, default_apex_set(1, u, o), avg);
  CHECK(rep.form_ratio_min > 0.1);
  CHECK(rep.form_ratio_max < 10.0);
}

TEST_CASE("adapted and global averagers agree on a moderate tent") {
  const BallPoint apex{cplx(0.0, 0.7)};
  const Weight u = sharp_weight(0.5, 1, 0.0);
  const AdaptedTentAverager a;
  Resolution res = default_resolution(1);
  const GlobalGridAverager g(res);
  const auto x = a.integrate(u, 0.0, apex), y = g.integrate(u, 0.0, apex);
  CHECK(y.average() == doctest::Approx(x.average()).epsilon(2e-3));
}

TEST_CASE("sharp weights: characteristic grows like 1/delta") {
  const AdaptedTentAverager avg;
  ApexSetOptions o;
  o.min_depth = 2;
  o.max_depth = 12;
  std::vector<double> x, y;
  for (double d : {0.5, 0.25, 0.125, 0.0625}) {
    const Weight u = sharp_weight(d, 1, 0.0);
    x.push_back(std::log(1.0 / d));
    y.push_back(std::log(characteristic_B(u, 2.0, 0.0, default_apex_set(1, u, o), avg).value));
  }
  const double slope = fit_slope(x, y);
  CHECK(slope > 0.8);
  CHECK(slope < 1.2);
}

}
