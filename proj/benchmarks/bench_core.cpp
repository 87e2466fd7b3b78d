#include <benchmark/benchmark.h>

#include <random>

#include "qpv/hidden.hpp"
#include "qpv/protocol.hpp"

using namespace qpv;

namespace {

Matrix random_isometry(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Matrix q(rows, cols);
  for (int j = 0; j < cols; ++j) {
    Vector v = g.col(j);
    for (int k = 0; k < j; ++k) v -= q.col(k).dot(v) * q.col(k);
    q.col(j) = v / v.norm();
  }
  return q;
}

HiddenInstance bench_instance(int w_dim, int v1, int v2) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  HiddenInstance inst;
  inst.u = random_isometry(rng, v1 * v2, 2 * w_dim);
  inst.w_dim = w_dim;
  inst.v1_dim = v1;
  inst.v2_dim = v2;
  Vector w(w_dim);
  for (int i = 0; i < w_dim; ++i) w(i) = Complex(gauss(rng), gauss(rng));
  inst.w = w / w.norm();
  inst.p = QubitProjector::from_bloch({0.6, 0.0, 0.8});
  return inst;
}

}  // namespace

static void bm_trace_norm(benchmark::State& state) {
  std::mt19937_64 rng(7);
  int n = static_cast<int>(state.range(0));
  Matrix m = Matrix::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm(m));
}
BENCHMARK(bm_trace_norm)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

static void bm_partial_trace(benchmark::State& state) {
  Matrix m = Matrix::Random(64, 64);
  RegisterShape shape{{4, 4, 4}};
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(m, shape, {0, 2}));
}
BENCHMARK(bm_partial_trace);

static void bm_marginal_criterion(benchmark::State& state) {
  HiddenInstance inst = bench_instance(4, 4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(check_marginal_distance(inst));
}
BENCHMARK(bm_marginal_criterion);

static void bm_block_criterion(benchmark::State& state) {
  HiddenInstance inst = bench_instance(4, 4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(check_block_equations(inst));
}
BENCHMARK(bm_block_criterion);

static void bm_membership_residual(benchmark::State& state) {
  HiddenInstance inst = bench_instance(4, 4, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(hidden_set_residual(inst.u, inst.w_dim, inst.v1_dim,
                                                 inst.v2_dim, inst.p.bloch, inst.w));
}
BENCHMARK(bm_membership_residual);

static void bm_decoder_seesaw(benchmark::State& state) {
  CheatingStrategy attack = bb84_attack();
  QubitProjector z = attack.u_family.front().first;
  Matrix sigma0 = final_cheat_density_ad_bc(attack, z, 0);
  Matrix sigma1 = final_cheat_density_ad_bc(attack, z, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(optimize_decoders(sigma0, sigma1, 16, 16, 10));
}
BENCHMARK(bm_decoder_seesaw);

static void bm_assess_attack(benchmark::State& state) {
  CheatingStrategy attack = bb84_attack();
  ProtocolConfig config;
  config.basis_set = {attack.u_family[0].first, attack.u_family[1].first};
  for (auto _ : state) benchmark::DoNotOptimize(assess_strategy(config, attack));
}
BENCHMARK(bm_assess_attack);

BENCHMARK_MAIN();
