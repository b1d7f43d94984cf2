#include "bergman/dyadic.hpp"
#include "bergman/error.hpp"
#include "bergman/weights.hpp"

#include <doctest.h>

#include <cmath>

using namespace bergman;

TEST_SUITE("weights") {

TEST_CASE("power and sharp weights evaluate in closed form") {
  const BallPoint z{cplx(0.3, -0.4)};
  CHECK(Weight::power(1, 0.7)(z) == doctest::Approx(std::pow(1.0 - 0.25, 0.7)));
  for (double d : {1.0, 0.5, 0.125}) {
    const double e = 2.0 * (1.0 - d);  // n + 1 + b with n = 1, b = 0
    const double oracle = std::pow(std::abs(1.0 - z[0]), e) * std::pow(std::abs(1.0 + z[0]), -e);
    CHECK(sharp_weight(d, 1, 0.0)(z) == doctest::Approx(oracle).epsilon(1e-13));
  }
  CHECK(sharp_weight(1.0, 2, 1.0)(BallPoint{cplx(0.2), cplx(0.1)}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sharp_weight(0.0, 1, 0.0), ParameterError);
}

TEST_CASE("dual, tilde and psi/nu transforms") {
  const Weight u = sharp_weight(0.25, 1, 0.0).times_defect(0.3);
  const BallPoint z{cplx(-0.2, 0.5)};
  for (double p : {1.5, 2.0, 3.0}) {
    const double pp = conjugate_exponent(p);
    CHECK(pp == doctest::Approx(p / (p - 1.0)));
    CHECK(dual_weight(u, p)(z) == doctest::Approx(std::pow(u(z), -pp / p)).epsilon(1e-12));
    CHECK(tilde_weight(u, p, 0.5)(z) == doctest::Approx(u(z) * std::pow(z.defect(), 0.5 * p)).epsilon(1e-12));
    const double a = 0.5, b = 1.0;
    const auto [psi, nu] = psi_nu_transform(u, p, a, b);
    const double psi_oracle = std::pow(u(z), -pp / p) * std::pow(z.defect(), -(pp * b + p * a) / p);
    CHECK(psi(z) == doctest::Approx(psi_oracle).epsilon(1e-12));
    CHECK(nu(z) == doctest::Approx(std::pow(psi_oracle, -p / pp)).epsilon(1e-12));
  }
}

TEST_CASE("powers compose and scale") {
  const Weight u = Weight::power(2, -0.4).scaled(3.0);
  const BallPoint z{cplx(0.1, 0.2), cplx(-0.3, 0.0)};
  CHECK(u.pow(2.0).pow(0.5)(z) == doctest::Approx(u(z)).epsilon(1e-13));
  CHECK(u.pow(-1.0)(z) * u(z) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("singularity hints follow the anchor") {
  const Weight u = sharp_weight(0.5, 1, 0.0).times_defect(0.25);
  const SingularityHint hp = u.hint(CVec{1.0}), hm = u.hint(CVec{-1.0}), h0 = u.hint(CVec{cplx(0.0, 1.0)});
  CHECK(hp.point == doctest::Approx(1.0));
  CHECK(hm.point == doctest::Approx(-1.0));
  CHECK(h0.point == 0.0);
  CHECK(hp.edge == doctest::Approx(0.25));
}

TEST_CASE("JSON descriptors rebuild the same weight") {
  Rng rng(4);
  for (const Weight& u : {Weight::constant(1, 2.5), Weight::power(1, -0.3), sharp_weight(0.125, 1, 1.0)}) {
    const Weight v = Weight::from_json(u.descriptor(), 1);
    for (int i = 0; i < 20; ++i) {
      const BallPoint z(random_sphere_point(1, rng) * (0.95 * uniform01(rng)));
      CHECK(v(z) == doctest::Approx(u(z)).epsilon(1e-13));
    }
  }
}

TEST_CASE("custom weights must stay positive") {
  const Weight w = Weight::custom(1, [](const BallPoint& z) { return z[0].real(); }, "Re z");
  CHECK(w(BallPoint{cplx(0.5)}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(w(BallPoint{cplx(-0.5)}), EvaluationError);
}

}
