#include <random>

#include <benchmark/benchmark.h>

#include "sparse_triangle/sparse_triangle.hpp"

namespace st = sparse_triangle;

namespace {

st::DenseVector gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = g(rng);
  return st::DenseVector(std::move(v));
}

void BM_SoftThreshold(benchmark::State& state) {
  const auto y = gaussian(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(st::soft_threshold(y, 0.5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SoftThreshold)->Range(64, 1 << 16);

void BM_PhiCurve(benchmark::State& state) {
  const auto y = gaussian(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(st::PhiCurve(y));
}
BENCHMARK(BM_PhiCurve)->Range(64, 1 << 16);

void BM_BetaGeom(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(st::beta_geom(100.0));
}
BENCHMARK(BM_BetaGeom);

void BM_BetaArithQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(st::beta_arith_quadrature(100.0));
}
BENCHMARK(BM_BetaArithQuadrature);

void BM_TriangleMetrics(benchmark::State& state) {
  const auto y = gaussian(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(st::triangle_metrics(y));
}
BENCHMARK(BM_TriangleMetrics)->Arg(300)->Arg(3000);

void BM_InnerSolve(benchmark::State& state) {
  const auto p = st::recovery_instance(250, 100, 10, 1);
  const st::AffineConstraint constraint(p.matrix, p.b);
  const auto v = gaussian(250, 4);
  for (auto _ : state) benchmark::DoNotOptimize(st::inner_solve(constraint, v, 0.5, {}));
}
BENCHMARK(BM_InnerSolve)->Unit(benchmark::kMillisecond);

void BM_Dca(benchmark::State& state) {
  const auto method = state.range(0) == 0 ? st::RatioMethod::l1_over_linf : st::RatioMethod::l1_over_l2;
  const auto p = st::recovery_instance(250, 100, 10, 1);
  for (auto _ : state) benchmark::DoNotOptimize(st::dca_solve(p, method));
}
BENCHMARK(BM_Dca)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
