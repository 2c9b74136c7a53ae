// Copyright 2026 The pnsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "pnsim/decompose.hpp"
#include "pnsim/faults.hpp"
#include "pnsim/mvm.hpp"

namespace pnsim {
namespace {

void BM_DecomposeClements(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CMatrix u = haar_random_unitary(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_clements(u));
}
BENCHMARK(BM_DecomposeClements)->RangeMultiplier(2)->Range(4, 64);

void BM_ForwardMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MeshTopology t = build_clements(n);
  const PhaseProgram p = decompose_clements(haar_random_unitary(n, 2));
  for (auto _ : state) benchmark::DoNotOptimize(forward_matrix(t, p));
}
BENCHMARK(BM_ForwardMatrix)->RangeMultiplier(2)->Range(4, 64);

void BM_ApplyMesh(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MeshTopology t = build_clements(n);
  const PhaseProgram p = decompose_clements(haar_random_unitary(n, 3));
  const CVector x = random_unit_vector(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(apply_mesh(t, p, x));
}
BENCHMARK(BM_ApplyMesh)->RangeMultiplier(2)->Range(4, 64);

void BM_FitFldzhyan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MeshTopology t = build_fldzhyan(n);
  const CMatrix u = haar_random_unitary(n, 5);
  FitConfig cfg;
  cfg.restarts = 1;
  cfg.max_iterations = 200;
  for (auto _ : state) benchmark::DoNotOptimize(fit_phases(t, u, cfg));
}
BENCHMARK(BM_FitFldzhyan)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_DeviceRun(benchmark::State& state) {
  const auto m = static_cast<std::uint32_t>(state.range(0));
  const MvmLayout layout = MvmLayout::make(8, m, 1);
  CMatrix inputs(8, m);
  for (std::uint32_t j = 0; j < m; ++j) {
    const CVector x = random_unit_vector(8, 100 + j);
    for (std::uint32_t i = 0; i < 8; ++i) inputs(i, j) = 0.9 * x[i];
  }
  const auto image = pack_host_image(layout, 0.9 * haar_random_unitary(8, 6), inputs);
  const HostScript script = make_mvm_script(layout);
  for (auto _ : state) benchmark::DoNotOptimize(run_device({}, image, script));
}
BENCHMARK(BM_DeviceRun)->Arg(1)->Arg(8)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace pnsim

BENCHMARK_MAIN();
