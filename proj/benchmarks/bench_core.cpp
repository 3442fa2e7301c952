#include <benchmark/benchmark.h>

#include <random>

#include "mkf/init.hpp"
#include "mkf/kflats.hpp"
#include "mkf/median_kflats.hpp"
#include "mkf/synth.hpp"

namespace {

mkf::LabeledDataset make_data(int d, int K, int D) {
  mkf::SynthParams params;
  params.K = K;
  params.dims.assign(K, d);
  params.D = D;
  params.outlier_frac = 0.30;
  params.seed = 7;
  return mkf::generate_hlm(params);
}

void BM_SgdStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int D = static_cast<int>(state.range(1));
  const auto data = make_data(d, 2, D);
  const auto cloud = mkf::normalize_to_sphere(data.cloud);

  mkf::ModelState model;
  model.config.rng_seed = 3;
  model.rng.seed(3);
  std::mt19937_64 rng(1);
  model.bases = mkf::random_init(2, d, D, rng);

  std::uniform_int_distribution<long> pick(0, cloud.size() - 1);
  for (auto _ : state) {
    const Eigen::VectorXd x = cloud.points.row(pick(rng));
    benchmark::DoNotOptimize(mkf::sgd_step(model, x));
  }
}
BENCHMARK(BM_SgdStep)->Args({4, 6})->Args({10, 15})->Args({15, 20});

void BM_Energy(benchmark::State& state) {
  const auto data = make_data(10, 2, 15);
  const auto cloud = mkf::normalize_to_sphere(data.cloud);
  std::mt19937_64 rng(1);
  const auto bases = mkf::random_init(2, 10, 15, rng);
  const auto labels = mkf::assign_labels(cloud, bases);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mkf::l1_energy(cloud, labels, bases));
  }
}
BENCHMARK(BM_Energy);

void BM_KFlatsRound(benchmark::State& state) {
  const auto data = make_data(10, 2, 15);
  const auto cloud = mkf::normalize_to_sphere(data.cloud);
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    auto init = mkf::random_init(2, 10, 15, rng);
    benchmark::DoNotOptimize(
        mkf::kflats_fit(cloud, 2, 10, std::move(init), 1));
  }
}
BENCHMARK(BM_KFlatsRound);

void BM_FarthestInsertion(benchmark::State& state) {
  const auto data = make_data(4, 3, 6);
  const auto cloud = mkf::normalize_to_sphere(data.cloud);
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mkf::farthest_insertion_init(cloud, 3, 4, rng));
  }
}
BENCHMARK(BM_FarthestInsertion);

}  // namespace

BENCHMARK_MAIN();
