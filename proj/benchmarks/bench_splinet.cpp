#include <benchmark/benchmark.h>

#include <random>

#include "splinet/inner_product.hpp"
#include "splinet/orthogonalize.hpp"
#include "splinet/periodic.hpp"
#include "splinet/projection.hpp"

using namespace splinet;

namespace {

MeshPtr circle(std::size_t segments) {
  return make_mesh(KnotMesh::uniform(segments, 0.0, 1.0, true));
}

SplineFamily open_bsplines(std::size_t segments, int k) {
  return build_bsplines(make_mesh(KnotMesh::uniform(segments, 0.0, 1.0)), k);
}

// Argument pairs: (k, n) with n = k * 2^N
void dyadic_args(benchmark::internal::Benchmark* b) {
  for (int k = 1; k <= 3; ++k) {
    for (int N = 3; N <= 7; N += 2) {
      b->Args({k, static_cast<long>(k) << N});
    }
  }
}

void BM_gram_matrix(benchmark::State& state) {
  const SplineFamily f = open_bsplines(static_cast<std::size_t>(state.range(1)), static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram_matrix(f));
  }
}

void BM_one_sided(benchmark::State& state) {
  const SplineFamily f = open_bsplines(static_cast<std::size_t>(state.range(1)), static_cast<int>(state.range(0)));
  std::size_t cross = 0;
  for (auto _ : state) {
    OpCounter c;
    benchmark::DoNotOptimize(gram_schmidt_one_sided(f, c));
    cross = c.cross_evaluations();
  }
  state.counters["cross"] = static_cast<double>(cross);
}

void BM_two_sided(benchmark::State& state) {
  const SplineFamily f = open_bsplines(static_cast<std::size_t>(state.range(1)), static_cast<int>(state.range(0)));
  std::size_t cross = 0;
  for (auto _ : state) {
    OpCounter c;
    benchmark::DoNotOptimize(gram_schmidt_symmetric(f, c));
    cross = c.cross_evaluations();
  }
  state.counters["cross"] = static_cast<double>(cross);
}

void BM_dyadic(benchmark::State& state) {
  const SplineFamily f = open_bsplines(static_cast<std::size_t>(state.range(1)), static_cast<int>(state.range(0)));
  std::size_t cross = 0;
  for (auto _ : state) {
    OpCounter c;
    benchmark::DoNotOptimize(dyadic_splinet(f, c));
    cross = c.cross_evaluations();
  }
  state.counters["cross"] = static_cast<double>(cross);
}

void BM_periodic_splinet(benchmark::State& state) {
  const PeriodicBasis b =
      build_periodic_bsplines(circle(static_cast<std::size_t>(state.range(1))), static_cast<int>(state.range(0)));
  std::size_t cross = 0;
  for (auto _ : state) {
    OpCounter c;
    benchmark::DoNotOptimize(build_periodic_splinet(b, c));
    cross = c.cross_evaluations();
  }
  state.counters["cross"] = static_cast<double>(cross);
}

void BM_projection(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  OpCounter c;
  const auto net = std::make_shared<const Splinet>(build_periodic_splinet(build_periodic_bsplines(circle(n), k), c));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  const PeriodicBasis fine = build_periodic_bsplines(circle(2 * n + 1), k);
  Eigen::VectorXd w(static_cast<Eigen::Index>(fine.members.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    w(i) = g(rng);
  }
  const Spline target = linear_combination(fine.members, w);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_spline(target, net));
  }
}

} // namespace

BENCHMARK(BM_gram_matrix)->Apply(dyadic_args);
BENCHMARK(BM_one_sided)->Apply(dyadic_args);
BENCHMARK(BM_two_sided)->Apply(dyadic_args);
BENCHMARK(BM_dyadic)->Apply(dyadic_args);
BENCHMARK(BM_periodic_splinet)->Apply(dyadic_args);
BENCHMARK(BM_projection)->Apply(dyadic_args);
BENCHMARK_MAIN();
