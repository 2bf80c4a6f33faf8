// OpenMP kernels against their serial reference versions.
#include <benchmark/benchmark.h>

#include "qatlab/common.hpp"
#include "qatlab/exact_oracle.hpp"
#include "qatlab/kernel_grid.hpp"
#include "qatlab/phase_diagram.hpp"
#include "qatlab/verification.hpp"

using namespace qat;

namespace {

KernelGrid test_grid(std::size_t L) {
  KernelGrid a = mu_grid(L, 1.3);
  for (std::size_t i = 0; i < L; ++i) a(i, i) += 0.1;
  return a;
}

void BM_enumerate(benchmark::State& st) {
  ModelParams p = make_params(1.0, 0.5);
  DisorderSample d = make_disorder(3, 1);
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_path_partition(p, d, st.range(0), PathMode::corrected));
}
void BM_enumerate_reference(benchmark::State& st) {
  ModelParams p = make_params(1.0, 0.5);
  DisorderSample d = make_disorder(3, 1);
  for (auto _ : st) benchmark::DoNotOptimize(reference::enumerate_path_partition(p, d, st.range(0), PathMode::corrected));
}

void BM_overlap_deviations(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(overlap_deviations(50, 1.0, 16, st.range(0), 3));
}
void BM_overlap_deviations_reference(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(reference::overlap_deviations(50, 1.0, 16, st.range(0), 3));
}

void BM_hs_inner(benchmark::State& st) {
  KernelGrid a = test_grid(st.range(0)), b = mu_grid(st.range(0), 0.4);
  for (auto _ : st) benchmark::DoNotOptimize(hs_inner(a, b));
}
void BM_hs_inner_reference(benchmark::State& st) {
  KernelGrid a = test_grid(st.range(0)), b = mu_grid(st.range(0), 0.4);
  for (auto _ : st) benchmark::DoNotOptimize(reference::hs_inner(a, b));
}

void BM_operator_norm(benchmark::State& st) {
  KernelGrid a = test_grid(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(operator_norm(a));
}
void BM_operator_norm_reference(benchmark::State& st) {
  KernelGrid a = test_grid(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(reference::operator_norm(a));
}

Tolerances one_level() {
  Tolerances t;
  t.levels = 1;
  return t;
}
void BM_scan_grid(benchmark::State& st) {
  ScanWindow w{0.1, 1.1, 0.3, 1.4, 4, 4};
  for (auto _ : st) benchmark::DoNotOptimize(scan_grid(w, one_level()));
}
void BM_scan_grid_reference(benchmark::State& st) {
  ScanWindow w{0.1, 1.1, 0.3, 1.4, 4, 4};
  for (auto _ : st) benchmark::DoNotOptimize(reference::scan_grid(w, one_level()));
}

}  // namespace

BENCHMARK(BM_enumerate)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_enumerate_reference)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_overlap_deviations)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_overlap_deviations_reference)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_hs_inner)->Arg(256)->Arg(1024);
BENCHMARK(BM_hs_inner_reference)->Arg(256)->Arg(1024);
BENCHMARK(BM_operator_norm)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_operator_norm_reference)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_grid)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_scan_grid_reference)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
