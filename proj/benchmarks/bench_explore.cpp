/*
 * Copyright (c) 2026, the ratm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#include <benchmark/benchmark.h>

#include "ratm/corpus.hpp"
#include "ratm/explorer.hpp"
#include "ratm/refinement.hpp"

using namespace ratm;

static void BM_explore_plain_mp(benchmark::State& state) {
  LitmusProgram p = builtin_program("mp-ra");
  for (auto _ : state) {
    ExplorationResult res = explore(p, Backend::Plain, {});
    benchmark::DoNotOptimize(res.stats.states);
  }
}
BENCHMARK(BM_explore_plain_mp);

static void BM_explore_tx_mp(benchmark::State& state) {
  LitmusProgram p = builtin_program("tx-mp");
  Backend b = state.range(0) == 0 ? Backend::Tms2Ra : Backend::TmlRa;
  ExploreOptions opt;
  opt.step.retry_budget = 2;
  for (auto _ : state) {
    ExplorationResult res = explore(p, b, opt);
    benchmark::DoNotOptimize(res.stats.states);
  }
  state.SetLabel(to_string(b));
}
BENCHMARK(BM_explore_tx_mp)->Arg(0)->Arg(1);

static void BM_canonical_key(benchmark::State& state) {
  LitmusProgram p = builtin_program("tx-chain");
  Configuration c = initial_configuration(p, Backend::TmlRa);
  StepOptions opt;
  for (int i = 0; i < 12; ++i) {
    auto succs = enabled_steps(p, Backend::TmlRa, c, opt);
    if (succs.empty()) break;
    c = succs.front().config;
  }
  for (auto _ : state) {
    std::string key = c.canonical_key(p, Backend::TmlRa);
    benchmark::DoNotOptimize(key);
  }
}
BENCHMARK(BM_canonical_key);

static void BM_enabled_steps_tml(benchmark::State& state) {
  LitmusProgram p = builtin_program("tx-chain");
  Configuration c = initial_configuration(p, Backend::TmlRa);
  StepOptions opt;
  for (int i = 0; i < 8; ++i) {
    auto succs = enabled_steps(p, Backend::TmlRa, c, opt);
    if (succs.empty()) break;
    c = succs.back().config;
  }
  for (auto _ : state) {
    auto succs = enabled_steps(p, Backend::TmlRa, c, opt);
    benchmark::DoNotOptimize(succs.size());
  }
}
BENCHMARK(BM_enabled_steps_tml);

static void BM_forward_simulation_tx_mp(benchmark::State& state) {
  LitmusProgram p = builtin_program("tx-mp");
  RefinementOptions opt;
  opt.concrete_step.retry_budget = 1;
  opt.abstract_step.retry_budget = 1;
  for (auto _ : state) {
    SimReport rep = check_forward_simulation(p, opt);
    benchmark::DoNotOptimize(rep.ok);
  }
}
BENCHMARK(BM_forward_simulation_tx_mp);

BENCHMARK_MAIN();
