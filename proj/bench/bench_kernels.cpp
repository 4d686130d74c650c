#include <benchmark/benchmark.h>

#include <random>
#include <span>
#include <vector>

#include "axiflow/flow_rhs.hpp"
#include "axiflow/kernels.hpp"
#include "axiflow/linearization.hpp"
#include "axiflow/scenarios.hpp"

using namespace axiflow;

namespace {

struct Inputs {
  HProfile h;
  QuotientFields q;
  kernels::PointwiseInputs in;

  explicit Inputs(int n) : h(dumbbell(n, 1.0, 0.5)), q(quotient_fields(h.grid(), h.values())) {
    in = {h.values(), q.s2, q.ds, q.r, h.grid().cos(), h.d(), 1.0 / q.fit.h2_0(), 1.0 / q.fit.h2_pi()};
  }
};

template <class Kernel>
void phi1_kernel(benchmark::State& state, Kernel kernel) {
  const Inputs x(static_cast<int>(state.range(0)));
  Field out(x.h.values().size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel(x.in, out));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Kernel>
void coefficient_kernel(benchmark::State& state, Kernel kernel) {
  const Inputs x(static_cast<int>(state.range(0)));
  const std::size_t m = x.h.values().size();
  std::vector<Field> a(6, Field(m));
  for (auto _ : state) {
    kernel(x.in, {a[0], a[1], a[2], a[3], a[4], a[5]});
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Kernel>
void row_scaled_kernel(benchmark::State& state, Kernel kernel) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Field> scales(3, Field(n)), ops(3, Field(static_cast<std::size_t>(n) * n));
  for (auto& f : scales)
    for (double& v : f) v = u(rng);
  for (auto& f : ops)
    for (double& v : f) v = u(rng);
  const kernels::RowScaledTerm terms[] = {{scales[0], ops[0]}, {scales[1], ops[1]}, {scales[2], ops[2]}};
  Field out(ops[0].size());
  for (auto _ : state) {
    kernel(std::span<const kernels::RowScaledTerm>(terms), out, n);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void full_rhs_exec(benchmark::State& state, Exec exec) {
  const HProfile h = dumbbell(static_cast<int>(state.range(0)), 1.0, 0.5);
  RhsOptions opts;
  opts.exec = exec;
  for (auto _ : state) benchmark::DoNotOptimize(full_rhs(h, opts));
}

void frechet_exec(benchmark::State& state, Exec exec) {
  const HProfile h = dumbbell(static_cast<int>(state.range(0)), 1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_frechet(h, exec));
}

}  // namespace

BENCHMARK_CAPTURE(phi1_kernel, serial, kernels::serial::phi1)->RangeMultiplier(4)->Range(256, 65536);
BENCHMARK_CAPTURE(phi1_kernel, omp, kernels::omp::phi1)->RangeMultiplier(4)->Range(256, 65536);
BENCHMARK_CAPTURE(coefficient_kernel, serial, kernels::serial::frechet_coefficients)->RangeMultiplier(4)->Range(256, 65536);
BENCHMARK_CAPTURE(coefficient_kernel, omp, kernels::omp::frechet_coefficients)->RangeMultiplier(4)->Range(256, 65536);
BENCHMARK_CAPTURE(row_scaled_kernel, serial, kernels::serial::row_scaled_sum)->Arg(257)->Arg(513)->Arg(1025);
BENCHMARK_CAPTURE(row_scaled_kernel, omp, kernels::omp::row_scaled_sum)->Arg(257)->Arg(513)->Arg(1025);
BENCHMARK_CAPTURE(full_rhs_exec, serial, Exec::serial)->Arg(256)->Arg(4096);
BENCHMARK_CAPTURE(full_rhs_exec, parallel, Exec::parallel)->Arg(256)->Arg(4096);
BENCHMARK_CAPTURE(frechet_exec, serial, Exec::serial)->Arg(256)->Arg(512);
BENCHMARK_CAPTURE(frechet_exec, parallel, Exec::parallel)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
