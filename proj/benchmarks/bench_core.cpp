// Microbenchmarks for the operations that dominate real workloads:
// rank-one inversion vs. plain dense inversion, likelihood evaluation,
// field simulation, prior sampling, and the variance bound.
#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "variomat/elliptope.hpp"
#include "variomat/inverse.hpp"
#include "variomat/model.hpp"
#include "variomat/projection.hpp"

namespace {

Eigen::MatrixXd bench_corr(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = normal(gen);
  }
  Eigen::MatrixXd s =
      a * a.transpose() + 0.3 * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd d = s.diagonal().array().rsqrt();
  Eigen::MatrixXd r = d.asDiagonal() * s * d.asDiagonal();
  r = ((r + r.transpose()) / 2.0).eval();
  r.diagonal().setOnes();
  return r;
}

variomat::KrigeModel bench_model(Eigen::Index n) {
  const auto r = variomat::CorrelationMatrix::from_matrix(bench_corr(n, 2));
  return variomat::KrigeModel(0.3, 1.7,
                              variomat::gamma_from_sigma_r(1.7, r));
}

void BM_sm_inverse(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::MatrixXd a = 1.7 * bench_corr(n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(variomat::sm_inverse(a));
  }
}
BENCHMARK(BM_sm_inverse)->Arg(8)->Arg(32)->Arg(128);

void BM_direct_inverse(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::MatrixXd a = 1.7 * bench_corr(n, 3);
  const Eigen::MatrixXd m =
      Eigen::MatrixXd::Ones(n, n) - a;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Eigen::MatrixXd(m.inverse()));
  }
}
BENCHMARK(BM_direct_inverse)->Arg(8)->Arg(32)->Arg(128);

void BM_loglik(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const variomat::KrigeModel m = bench_model(n);
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = normal(gen);
  for (auto _ : state) {
    benchmark::DoNotOptimize(variomat::loglik(y, m));
  }
}
BENCHMARK(BM_loglik)->Arg(8)->Arg(32)->Arg(128);

void BM_simulate_field(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const variomat::KrigeModel m = bench_model(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(variomat::simulate_field(m.gamma(), 100, 11));
  }
}
BENCHMARK(BM_simulate_field)->Arg(8)->Arg(32);

void BM_sample_rejection3(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(variomat::sample_rejection(3, 100, 13));
  }
}
BENCHMARK(BM_sample_rejection3);

void BM_min_sigma2(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const variomat::KrigeModel m = bench_model(n);
  const variomat::VariogramMatrix gamma = m.gamma();
  for (auto _ : state) {
    benchmark::DoNotOptimize(variomat::min_sigma2(gamma));
  }
}
BENCHMARK(BM_min_sigma2)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
