#include "bergman/characteristics.hpp"
#include "bergman/dyadic.hpp"
#include "bergman/geometry.hpp"
#include "bergman/norms.hpp"
#include "bergman/operators.hpp"

#include <benchmark/benchmark.h>

using namespace bergman;

static void BM_mobius(benchmark::State& s) {
  const int n = static_cast<int>(s.range(0));
  Rng rng(1);
  const BallPoint z(random_sphere_point(n, rng) * 0.7), w(random_sphere_point(n, rng) * 0.4);
  for (auto _ : s) benchmark::DoNotOptimize(mobius(z, w));
}
BENCHMARK(BM_mobius)->Arg(1)->Arg(2);

static void BM_build_grid(benchmark::State& s) {
  const int n = static_cast<int>(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(build_grid(n, 0.0, default_resolution(n)).size());
}
BENCHMARK(BM_build_grid)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_bergman_project_n1(benchmark::State& s) {
  const auto g = build_grid(1, 0.0, default_resolution(1));
  const KernelOperator P({1, 0.0, 0.0, KernelFlavor::analytic, OuterForm::S}, g);
  const auto f = P.sample(TestFunction::monomial({3, 0}));
  const BallPoint z{cplx(0.3, 0.4)};
  for (auto _ : s) benchmark::DoNotOptimize(P.apply(f, z));
}
BENCHMARK(BM_bergman_project_n1)->Unit(benchmark::kMillisecond);

static void BM_spectral_apply(benchmark::State& s) {
  const auto g = build_grid(1, 0.0, default_resolution(1));
  const auto op = spectral_kernel_operator({1, 0.0, 0.0, KernelFlavor::analytic, OuterForm::S}, g);
  std::vector<cplx> x(g.size(), 1.0), y;
  for (auto _ : s) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_spectral_apply)->Unit(benchmark::kMillisecond);

static void BM_tree_locate(benchmark::State& s) {
  const auto sys = build_boundary_systems(1, 0.5, 12);
  const auto tree = BergmanTree::build(sys[0], kDefaultTheta, 0.1, 12);
  Rng rng(2);
  std::vector<BallPoint> zs;
  for (int i = 0; i < 1024; ++i) zs.push_back(random_apex(1, generation_gap(12, kDefaultTheta), rng));
  std::size_t i = 0;
  for (auto _ : s) benchmark::DoNotOptimize(tree.locate_id(zs[i++ & 1023]));
}
BENCHMARK(BM_tree_locate);

static void BM_sharp_B2(benchmark::State& s) {
  const Weight u = sharp_weight(0.125, 1, 0.0);
  ApexSetOptions o;
  o.min_depth = 2;
  const auto apexes = default_apex_set(1, u, o);
  const AdaptedTentAverager avg;
  for (auto _ : s) benchmark::DoNotOptimize(characteristic_B(u, 2.0, 0.0, apexes, avg).value);
}
BENCHMARK(BM_sharp_B2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
