#include "bergman/dyadic.hpp"
#include "bergman/gauss.hpp"
#include "bergman/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bergman;

namespace {

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

// int |z|^{2k} dv_t = B(n+k, t+1) / B(n, t+1)
double radial_moment(int n, double t, int k) { return beta_fn(n + k, t + 1.0) / beta_fn(n, t + 1.0); }

Resolution small(int n) {
  Resolution r = default_resolution(n);
  if (n == 1) r.angular = 64;
  return r;
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Jacobi rules are exact on polynomials") {
  for (double al : {0.0, -0.5, 1.5})
    for (double be : {0.0, 0.5, -0.7}) {
      const Rule1D r = gauss_jacobi01(10, al, be);
      for (int k = 0; k < 20; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(r.x[i], k);
        // int_0^1 x^{k+al} (1-x)^be dx
        CHECK(s == doctest::Approx(beta_fn(k + al + 1.0, be + 1.0)).epsilon(1e-12));
      }
      for (std::size_t i = 0; i < r.size(); ++i) CHECK(r.xc[i] == doctest::Approx(1.0 - r.x[i]).epsilon(1e-12));
    }
}

TEST_CASE("periodic trapezoid integrates trigonometric polynomials") {
  const Rule1D r = trapezoid_periodic(16);
  for (int k = 0; k < 16; ++k) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::polar(1.0, k * r.x[i]);
    CHECK(std::abs(s - (k == 0 ? 2.0 * std::numbers::pi : 0.0)) < 1e-12);
  }
}

TEST_CASE("global grid: total mass and radial moments") {
  for (int n : {1, 2})
    for (double t : {0.0, 1.0, 2.0, -0.5}) {
      const auto g = build_grid(n, t, small(n));
      CHECK(integrate(g, [](const BallPoint&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-10));
      for (int k = 1; k <= 4; ++k) {
        const double v = integrate(g, [k](const BallPoint& z) { return std::pow(z.norm2(), k); });
        CHECK(v == doctest::Approx(radial_moment(n, t, k)).epsilon(1e-9));
      }
    }
}

TEST_CASE("global grid: analytic monomials are orthogonal") {
  const auto g = build_grid(2, 0.0, small(2));
  // <z^a, z^b> = 0 for a != b; ||z1 z2||^2 = 1! 1! n! / (n+2)! for t = 0
  const cplx off = integrate(g, [](const BallPoint& z) { return z[0] * std::conj(z[1]); });
  CHECK(std::abs(off) < 1e-12);
  const double nn = integrate(g, [](const BallPoint& z) { return std::norm(z[0] * z[1]); });
  CHECK(nn == doctest::Approx(2.0 / 24.0).epsilon(1e-9));
}

TEST_CASE("tail switch: a grid without tail covers the shells only") {
  Resolution r = small(1);
  r.tail = false;
  const auto g = build_grid(1, 0.0, r);
  // v_0(|z| < R) = R^2 for n = 1
  const double R = generation_radius(r.shells, r.theta);
  CHECK(integrate(g, [](const BallPoint&) { return 1.0; }) == doctest::Approx(R * R).epsilon(1e-9));
}

TEST_CASE("tent-adapted grids: volumes against the closed form in n = 1") {
  // n = 1, t = 0: the tent over r e^{i0} is the lune |1 - w| < h inside the disc;
  // its normalized area is (1/pi)[h^2 acos(h/2) + acos(1 - h^2/2) - (h/2) sqrt(4 - h^2)]
  for (double r : {0.2, 0.5, 0.9, 0.99}) {
    const double h = 1.0 - r;
    const double oracle = (h * h * std::acos(h / 2) + std::acos(1.0 - h * h / 2) - 0.5 * h * std::sqrt(4.0 - h * h)) /
                          std::numbers::pi;
    CHECK(tent_volume_exact(BallPoint{cplx(r, 0.0)}, 0.0) == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("tent volumes: rotation invariant and consistent with node filtering") {
  for (int n : {1, 2}) {
    Rng rng(9);
    const auto apex = BallPoint(random_sphere_point(n, rng) * 0.5);
    const double exact = tent_volume_exact(apex, 1.0);
    const double axis = tent_volume_exact(BallPoint(CVec::unit(n, 0) * 0.5), 1.0);
    CHECK(exact == doctest::Approx(axis).epsilon(1e-10));
    Resolution res = default_resolution(n);
    if (n == 2) res.angular = 48, res.latitude = 16;
    const auto g = build_grid(n, 1.0, res);
    const RegionIntegral ri = tent_volume(g, apex);
    CHECK(ri.value == doctest::Approx(exact).epsilon(n == 1 ? 1e-3 : 3e-2));
  }
}

TEST_CASE("a singularity hint is absorbed by the coefficients") {
  // int_T |1 - w|^{-1/2} dv_0 on the n = 1 tent at 1/2: hinted grid vs refined plain grid
  const BallPoint apex{cplx(0.5, 0.0)};
  auto f = [](const BallPoint& w) { return std::pow(std::abs(1.0 - w[0]), -0.5); };
  const auto hinted = build_tent_grid(1, 0.0, apex, {}, SingularityHint{-0.5, 0.0});
  double a = 0.0;
  for (std::size_t k = 0; k < hinted.size(); ++k) a += hinted.coeff(k) * f(hinted.node(k));
  const auto plain = build_tent_grid(1, 0.0, apex, TentGridOptions{}.doubled().doubled());
  double b = 0.0;
  for (std::size_t k = 0; k < plain.size(); ++k) b += plain.coeff(k) * f(plain.node(k));
  CHECK(a == doctest::Approx(b).epsilon(2e-3));

}

TEST_CASE("refinement drift on smooth integrands is small") {
  for (int n : {1, 2}) {
    const Resolution r = small(n);
    const auto g1 = build_grid(n, 1.0, r), g2 = build_grid(n, 1.0, r.doubled());
    auto f = [](const BallPoint& z) { return std::exp(z[0].real()) * (1.0 + z.norm2()); };
    const double a = integrate(g1, f), b = integrate(g2, f);
    CHECK(std::abs(a - b) / std::abs(b) < 1e-6);
  }
}

TEST_CASE("bad exponents are rejected") {
  CHECK_THROWS(build_grid(1, -1.0, small(1)));
  CHECK_THROWS(build_grid(3, 0.0, small(1)));
}

}
