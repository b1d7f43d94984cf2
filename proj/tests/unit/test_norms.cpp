#include "bergman/norms.hpp"

#include <doctest.h>

#include <cmath>

using namespace bergman;

namespace {

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

// ||P_0||_{L^2((1-|z|^2)^t)} in the disc: sup over modes k of
// (k+1)^2 B(k+1, t+1) B(k+1, 1-t), a value approached as k grows
double power_weight_norm(double t) {
  double s = 0.0;
  for (int k = 0; k < 200000; k += 1 + k / 10) s = std::max(s, (k + 1.0) * (k + 1.0) * beta_fn(k + 1, t + 1) * beta_fn(k + 1, 1 - t));
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("norms") {

TEST_CASE("oracle: power weight norms") {
  CHECK(power_weight_norm(0.0) == doctest::Approx(1.0).epsilon(1e-9));
  // the k -> infinity limit is Gamma(1+t) Gamma(1-t) = pi t / sin(pi t)
  CHECK(power_weight_norm(0.5) == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-4));
}

TEST_CASE("identity has norm one in any weighted L^2") {
  Resolution r = default_resolution(1);
  r.angular = 64;
  const auto g = build_grid(1, 0.0, r);
  const auto e = weighted_norm(identity_operator(g.size()), g, sharp_weight(0.5, 1, 0.0), sharp_weight(0.5, 1, 0.0), 2.0,
                               NormMethod::power_iteration);
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("spectral projection: unweighted norm is one, power weights approach the oracle from below") {
  Resolution r = default_resolution(1);
  r.angular = 512;
  const auto g = build_grid(1, 0.0, r);
  const auto op = spectral_kernel_operator({1, 0.0, 0.0, KernelFlavor::analytic, OuterForm::S}, g);
  const Weight one = Weight::constant(1, 1.0);
  CHECK(weighted_norm(op, g, one, one, 2.0, NormMethod::power_iteration).value == doctest::Approx(1.0).epsilon(2e-3));
  for (double t : {-0.5, 0.5}) {
    const Weight u = Weight::power(1, t);
    const auto e = weighted_norm(op, g, u, u, 2.0, NormMethod::power_iteration);
    CHECK(e.converged);
    CHECK(e.value <= power_weight_norm(t) * (1.0 + 1e-3));
    CHECK(e.value == doctest::Approx(power_weight_norm(t)).epsilon(1e-2));
  }
}

TEST_CASE("spectral operator reproduces holomorphic polynomials on the grid") {
  Resolution r = default_resolution(1);
  r.angular = 128;
  const auto g = build_grid(1, 1.0, r);
  const auto op = spectral_kernel_operator({1, 0.0, 1.0, KernelFlavor::analytic, OuterForm::S}, g);
  std::vector<cplx> f(g.size()), out;
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = std::pow(g.node(k)[0], 3);
  op.apply(f, out);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.node(k).norm() < 0.9) err = std::max(err, std::abs(out[k] - f[k]));
  // the filter damps mode 3 of 64 only by exp(-36 (3/64)^8)
  CHECK(err < 1e-8);
}

TEST_CASE("adjoint is the l^2 conjugate transpose") {
  Resolution r = default_resolution(1);
  r.angular = 32;
  r.shells = 6;
  const auto g = build_grid(1, 0.0, r);
  const auto op = spectral_kernel_operator({1, 0.0, 0.0, KernelFlavor::analytic, OuterForm::S}, g);
  Rng rng(31);
  std::vector<cplx> x(g.size()), y(g.size()), ax, aty;
  for (auto& v : x) v = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
  for (auto& v : y) v = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
  op.apply(x, ax);
  op.adjoint(y, aty);
  cplx l = 0.0, rr = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    l += ax[k] * std::conj(y[k]);
    rr += x[k] * std::conj(aty[k]);
  }
  CHECK(std::abs(l - rr) <= 1e-9 * std::abs(l));
}

TEST_CASE("witness search is a lower bound and sees the dictionary") {
  Resolution r = default_resolution(1);
  r.angular = 64;
  const auto g = build_grid(1, 0.0, r);
  const auto id = identity_operator(g.size());
  const Weight u = Weight::power(1, 0.3);
  std::vector<Witness> dict{{"1", std::vector<cplx>(g.size(), 1.0)}};
  const auto e = weighted_norm(id, g, u, u, 3.0, NormMethod::witness_search, dict);
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.method == "witness-search");
}

TEST_CASE("grid norms") {
  Resolution r = default_resolution(1);
  r.angular = 64;
  const auto g = build_grid(1, 0.0, r);
  std::vector<double> u(g.size(), 1.0);
  std::vector<cplx> f(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = g.node(k)[0];
  // ||z||_{L^2(dv_0)}^2 = 1/2 in the disc
  CHECK(grid_norm(g, u, f, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
}

}
