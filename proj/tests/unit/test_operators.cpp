#include "bergman/operators.hpp"

#include <doctest.h>

#include <cmath>

using namespace bergman;

namespace {

Resolution res1() {
  Resolution r = default_resolution(1);
  r.angular = 256;
  return r;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("kernel powers") {
  const cplx d(0.3, -0.2);
  for (double m : {2.0, 3.0, 2.5, 4.75}) {
    const KernelPower kp(m);
    CHECK(std::abs(kp.analytic(d) - std::pow(d, -m)) < 1e-12 * std::abs(std::pow(d, -m)));
    CHECK(kp.modulus(d) == doctest::Approx(std::pow(std::abs(d), -m)).epsilon(1e-12));
  }
}

TEST_CASE("reproducing property in the disc") {
  for (double b : {0.0, 1.0}) {
    const auto g = build_grid(1, b, res1());
    const KernelOperator P({1, 0.0, b, KernelFlavor::analytic, OuterForm::S}, g);
    Rng rng(21);
    for (int k = 0; k <= 5; ++k) {
      const auto fv = P.sample(TestFunction::monomial({k, 0}));
      for (int i = 0; i < 10; ++i) {
        const BallPoint z(random_sphere_point(1, rng) * (0.9 * std::sqrt(uniform01(rng))));
        const cplx want = std::pow(z[0], k);
        CHECK(std::abs(P.apply(fv, z) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
      }
    }
    // P_b annihilates conj(z)
    const auto cv = P.sample(TestFunction::conj_coordinate(0));
    CHECK(std::abs(P.apply(cv, BallPoint{cplx(0.3, 0.4)})) < 1e-9);
  }
}

TEST_CASE("Berezin transform of 1 is 1") {
  for (int n : {1, 2}) {
    const auto g = build_grid(n, 0.0, n == 1 ? res1() : default_resolution(2));
    // n = 2: the default 40 Hopf angles alias like |z|^40, so stay inside |z| <= 0.7
    for (double r : {0.0, 0.5, n == 1 ? 0.8 : 0.7}) {
      const BallPoint z(CVec::unit(n, 0) * r);
      INFO("n = " << n << ", r = " << r);
      CHECK(berezin(0.0, TestFunction::constant(1.0), z, g) == doctest::Approx(1.0).epsilon(r > 0.6 && n == 2 ? 1e-4 : 1e-6));
    }
  }
}

TEST_CASE("sparse operator on constants counts ancestors") {
  auto sys = std::make_shared<ArcSystem>(2, 0, 6);
  const BergmanTree tree = BergmanTree::build(sys, kDefaultTheta, 0.2, 6);
  Resolution r = res1();
  r.shells = 8;
  const auto g = build_grid(1, 0.0, r);
  const SparseOperator T(tree, 0.0, 0.0, g);
  const std::vector<double> one(g.size(), 1.0);
  const auto c = T.coefficients(one);
  Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    const BallPoint z(random_sphere_point(1, rng) * (tree.outer_radius() * std::sqrt(uniform01(rng))));
    // T 1 (z) = sum over ancestors of <1> = generation + 1
    CHECK(T.apply(c, z) == doctest::Approx(tree.locate(z).generation + 1.0).epsilon(1e-12));
  }
  // T is positive and linear
  std::vector<double> f(g.size()), h(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    f[k] = 1.0 + g.node(k)[0].real();
    h[k] = g.node(k).norm2();
  }
  std::vector<double> fh(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) fh[k] = 2.0 * f[k] + 3.0 * h[k];
  const auto tf = T.apply_grid(f), th = T.apply_grid(h), tfh = T.apply_grid(fh);
  for (std::size_t k = 0; k < g.size(); k += 97) {
    CHECK(tf[k] >= 0.0);
    CHECK(tfh[k] == doctest::Approx(2.0 * tf[k] + 3.0 * th[k]).epsilon(1e-10));
  }
}

TEST_CASE("maximal operator: constants map to constants, pointwise dominance") {
  auto sys = std::make_shared<ArcSystem>(2, 1, 5);
  const BergmanTree tree = BergmanTree::build(sys, kDefaultTheta, 0.2, 5);
  Resolution r = res1();
  r.shells = 7;
  const auto g = build_grid(1, 0.0, r);
  const MaximalOperator M(tree, Weight::power(1, 0.5), g);
  const auto m1 = M.apply_grid(std::vector<double>(g.size(), 2.0));
  for (std::size_t k = 0; k < g.size(); k += 53)
    if (m1[k] > 0.0) CHECK(m1[k] == doctest::Approx(2.0).epsilon(1e-12));
  std::vector<double> f(g.size()), f2(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    f[k] = std::abs(g.node(k)[0].imag());
    f2[k] = f[k] + 1.0;
  }
  const auto a = M.apply_grid(f), b = M.apply_grid(f2);
  for (std::size_t k = 0; k < g.size(); k += 53) CHECK(b[k] >= a[k]);
}

TEST_CASE("domination ratios are finite and positive") {
  ForestOptions fo;
  fo.test_apexes = 200;
  const auto forest = CoveringForest::build(1, kDefaultTheta, 6, fo);
  Rng rng(23);
  std::vector<BallPoint> zs;
  for (int i = 0; i < 30; ++i) zs.push_back(random_apex(1, generation_gap(4, kDefaultTheta), rng));
  Resolution r = res1();
  r.shells = 8;
  const auto g = build_grid(1, 0.0, r);
  const auto d = domination_check(forest, 0.0, 0.0, TestFunction::constant(1.0), zs, g);
  CHECK(d.lower_ratio > 0.0);
  CHECK(d.lower_ratio <= d.upper_ratio);
  CHECK(std::isfinite(d.upper_ratio));
  CHECK_THROWS(domination_check(forest, 0.0, 0.0, TestFunction::monomial({1, 0}), zs, g));
}

TEST_CASE("operator parameters are validated") {
  CHECK_THROWS((OperatorSpec{1, -2.0, 0.0, KernelFlavor::modulus, OuterForm::Q}.validate()));
  CHECK_NOTHROW((OperatorSpec{2, 0.5, 1.0, KernelFlavor::analytic, OuterForm::S}.validate()));
}

}
