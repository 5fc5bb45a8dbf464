#include <benchmark/benchmark.h>

#include "qnet/dynamics.hpp"
#include "qnet/network.hpp"
#include "qnet/slh.hpp"
#include "qnet/standard_ops.hpp"
#include "qnet/wire.hpp"

#include <random>

using namespace qnet;

namespace {

Matrix random_hermitian(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> normal;
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return (m + m.adjoint()) / 2.0;
}

Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

StratonovichCoefficients random_coefficients(std::mt19937_64& rng, Index n, Index d) {
  return {OperatorMatrix(n, n, d, random_hermitian(rng, n * d)), OperatorMatrix(n, 1, d, random_matrix(rng, n * d, d)),
          Operator(random_hermitian(rng, d))};
}

SLHTriple cavity(double kappa, double delta, Index levels) {
  return SLHTriple(OperatorMatrix::identity(1, levels),
                   OperatorMatrix(1, 1, levels, std::sqrt(kappa) * ops::annihilation(levels).matrix()),
                   delta * ops::number(levels));
}

void BM_StratonovichToIto(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Index n = state.range(0), d = state.range(1);
  const StratonovichCoefficients c = random_coefficients(rng, n, d);
  for (auto _ : state) benchmark::DoNotOptimize(stratonovich_to_ito(c));
}
BENCHMARK(BM_StratonovichToIto)->Args({1, 2})->Args({3, 3})->Args({4, 8});

void BM_SeriesShared(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Index n = state.range(0), d = state.range(1);
  const SLHTriple g1 = stratonovich_to_ito(random_coefficients(rng, n, d));
  const SLHTriple g2 = stratonovich_to_ito(random_coefficients(rng, n, d));
  for (auto _ : state) benchmark::DoNotOptimize(series(g2, g1, SystemSpace::shared));
}
BENCHMARK(BM_SeriesShared)->Args({2, 4})->Args({2, 16});

void BM_ReduceCavityChain(benchmark::State& state) {
  const auto length = static_cast<std::size_t>(state.range(0));
  NetworkSpec spec;
  for (std::size_t k = 0; k < length; ++k) {
    spec.components.push_back({"c" + std::to_string(k), cavity(1.0 + 0.1 * k, 0.2 * k, 2)});
    if (k > 0) spec.internal_edges.push_back(Edge{{"c" + std::to_string(k - 1), 0}, {"c" + std::to_string(k), 0}});
  }
  spec.external_inputs = {{"c0", 0}};
  spec.external_outputs = {{"c" + std::to_string(length - 1), 0}};
  for (auto _ : state) benchmark::DoNotOptimize(reduce_network(spec));
}
BENCHMARK(BM_ReduceCavityChain)->Arg(2)->Arg(4)->Arg(6);

void BM_IntegrateMaster(benchmark::State& state) {
  const Index levels = state.range(0);
  const SLHTriple g = cavity(1.0, 0.5, levels);
  const DensityMatrix rho0 = DensityMatrix::pure(ops::coherent_state(levels, 1.0));
  IntegrationOptions opt;
  opt.t_end = 1.0;
  opt.dt = 1e-2;
  opt.store_every = 100;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_master(g, rho0, opt));
}
BENCHMARK(BM_IntegrateMaster)->Arg(4)->Arg(16)->Arg(32);

void BM_TransferSweep(benchmark::State& state) {
  const LinearPassive c{Matrix::Identity(1, 1), Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 0.5)};
  const std::vector<double> grid = frequency_grid(-10.0, 10.0, 401);
  for (auto _ : state) {
    for (double omega : grid) benchmark::DoNotOptimize(transfer_function(c, omega));
  }
}
BENCHMARK(BM_TransferSweep);

}  // namespace

BENCHMARK_MAIN();
