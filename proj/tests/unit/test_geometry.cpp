#include "bergman/error.hpp"
#include "bergman/geometry.hpp"
#include "bergman/rng.hpp"
#include "bergman/dyadic.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bergman;

namespace {

BallPoint random_point(int n, Rng& rng, double rmax = 0.95) {
  const CVec d = random_sphere_point(n, rng);
  return BallPoint(d * (rmax * std::pow(uniform01(rng), 1.0 / (2 * n))));
}

double dist(const CVec& a, const CVec& b) { return (a - b).norm(); }

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("mobius map: involution, phi_z(0) = z, phi_z(z) = 0") {
  for (int n : {1, 2}) {
    Rng rng(100 + n);
    for (int i = 0; i < 500; ++i) {
      const BallPoint z = random_point(n, rng), w = random_point(n, rng);
      CHECK(dist(mobius(z, mobius(z, w)).vec(), w.vec()) < 1e-10);
      CHECK(dist(mobius(z, BallPoint::origin(n)).vec(), z.vec()) < 1e-12);
      CHECK(mobius(z, z).norm() < 1e-12);
    }
  }
}

TEST_CASE("1 - |phi_z(w)|^2 identity") {
  for (int n : {1, 2}) {
    Rng rng(200 + n);
    for (int i = 0; i < 500; ++i) {
      const BallPoint z = random_point(n, rng), w = random_point(n, rng);
      const double lhs = 1.0 - mobius(z, w).norm2();
      const double rhs = z.defect() * w.defect() / std::norm(1.0 - pairing(z.vec(), w.vec()));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("Bergman distance: symmetric, invariant, radius from 0") {
  for (int n : {1, 2}) {
    Rng rng(300 + n);
    for (int i = 0; i < 200; ++i) {
      const BallPoint a = random_point(n, rng, 0.8), z = random_point(n, rng, 0.8), w = random_point(n, rng, 0.8);
      const double d = bergman_dist(z, w);
      CHECK(d == doctest::Approx(bergman_dist(w, z)).epsilon(1e-12));
      CHECK(bergman_dist(mobius(a, z), mobius(a, w)) == doctest::Approx(d).epsilon(1e-9));
      CHECK(bergman_dist(BallPoint::origin(n), z) == doctest::Approx(bergman_radius(z)).epsilon(1e-12));
    }
  }
}

TEST_CASE("norm_const matches the Gamma closed form") {
  for (int n : {1, 2})
    for (double t : {-0.5, 0.0, 0.5, 1.0, 2.0, 3.7}) {
      // c_t = Gamma(n+t+1) / (pi^n Gamma(t+1)) against Lebesgue measure
      const double oracle = std::tgamma(n + t + 1.0) / (std::pow(std::numbers::pi, n) * std::tgamma(t + 1.0));
      CHECK(norm_const(n, t) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("generation gap without cancellation") {
  const double th = 0.5 * std::numbers::ln2;
  for (int N = 0; N < 40; ++N) {
    CHECK(generation_radius(N, th) == doctest::Approx(std::tanh(N * th)));
    // 1 - tanh(x) = 2 / (e^{2x} + 1); with theta = log2 / 2 this is 2 / (2^N + 1)
    CHECK(generation_gap(N, th) == doctest::Approx(2.0 / (std::ldexp(1.0, N) + 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("tents") {
  const BallPoint apex{cplx(0.6, 0.0)};
  const TentSpec t{apex};
  CHECK(t.height() == doctest::Approx(0.4));
  CHECK(tent_contains(t, BallPoint{cplx(0.8, 0.0)}));
  CHECK_FALSE(tent_contains(t, BallPoint{cplx(0.5, 0.0)}));
  CHECK_FALSE(tent_contains(t, BallPoint{cplx(-0.8, 0.0)}));
  // the whole-ball tent over the origin
  CHECK(tent_contains(TentSpec{BallPoint::origin(1)}, BallPoint{cplx(-0.99, 0.0)}));
}

TEST_CASE("points too close to the sphere are rejected") {
  const BallPoint z{cplx(0.3, 0.0)};
  CHECK_THROWS_AS(mobius(z, BallPoint{cplx(1.0, 0.0)}), DomainError);
  CHECK_THROWS_AS(BoundaryPoint(CVec(2)), std::exception);
}

TEST_CASE("defect is carried separately near the sphere") {
  const double gap = 1e-14;
  const BallPoint z = BallPoint::with_defect(CVec{1.0 - gap}, gap * (2.0 - gap));
  CHECK(z.defect() == doctest::Approx(2e-14).epsilon(1e-6));
}

}
