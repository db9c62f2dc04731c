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

#include "doctest.h"

#include "ratm/corpus.hpp"
#include "ratm/refinement.hpp"
#include "ratm/serializability.hpp"

using namespace ratm;

TEST_CASE("the lock-to-epoch map halves") {
  CHECK(wc(0) == 0);
  CHECK(wc(2) == 1);
  CHECK(wc(3) == 1);  // an odd lock value names the same epoch
  CHECK(wc(7) == 3);
}

TEST_CASE("state refinement is reflexive and view-directional") {
  LitmusProgram p = builtin_program("mp-ra");
  Configuration c = initial_configuration(p, Backend::Plain);
  ClientObs obs = client_obs(p, Backend::Plain, c);
  CHECK(state_refines(obs, obs));

  // Write d := 5 by t1; let only the abstract side keep the stale view.
  WriteId w = -1;
  Configuration written = c;
  written.mem = c.mem.mem_write(0, 0, 5, 0, false, &w);
  Configuration concrete = written;
  concrete.mem = written.mem.mem_read(1, w, false, nullptr);  // t2's view advances

  ClientObs abs_obs = client_obs(p, Backend::Plain, written);
  ClientObs con_obs = client_obs(p, Backend::Plain, concrete);
  // The concrete side observes fewer writes: refinement holds one way only.
  CHECK(state_refines(con_obs, abs_obs));
  CHECK_FALSE(state_refines(abs_obs, con_obs));
}

TEST_CASE("trace refinement needs equal lengths") {
  LitmusProgram p = builtin_program("mp-ra");
  Configuration c = initial_configuration(p, Backend::Plain);
  ClientObs obs = client_obs(p, Backend::Plain, c);
  ClientTrace one{obs};
  ClientTrace two{obs, obs};
  CHECK(trace_refines(one, one));
  CHECK_FALSE(trace_refines(one, two));
}

TEST_CASE("a matching trace pair exists for the corpus") {
  LitmusProgram p = builtin_program("tx-mp");
  RefinementOptions opt;
  opt.concrete_step.retry_budget = 2;
  opt.abstract_step.retry_budget = 2;
  auto pair = witness_trace_pair(p, opt);
  REQUIRE(pair.has_value());
  CHECK(trace_refines(pair->first, pair->second));
}

TEST_CASE("the simulation relation holds on initial states") {
  for (const auto& id : builtin_ids()) {
    LitmusProgram p = builtin_program(id);
    Configuration c0 = initial_configuration(p, Backend::TmlRa);
    Configuration a0 = initial_configuration(p, Backend::Tms2Ra);
    SimCheck check = simulation_holds(p, a0, c0);
    CHECK_MESSAGE(check.holds(), (id + ": " + check.failing()));
  }
}

TEST_CASE("forward simulation and trace inclusion hold on the corpus") {
  RefinementOptions opt;
  opt.concrete_step.retry_budget = 2;
  opt.abstract_step.retry_budget = 2;
  for (const auto& id : {"tx-mp", "tx-relaxed"}) {
    LitmusProgram p = builtin_program(id);
    SimReport sim = check_forward_simulation(p, opt);
    CHECK_MESSAGE(sim.ok, (id + std::string(": ") + sim.detail));
    CHECK(sim.view_stability_ok);
    SimReport ref = check_program_refinement(p, opt);
    CHECK_MESSAGE(ref.ok, (id + std::string(": ") + ref.detail));
  }
}

TEST_CASE("simulation implies trace inclusion on the corpus") {
  // Checked empirically: whenever the simulation game succeeds, the trace
  // game must too.
  RefinementOptions opt;
  opt.concrete_step.retry_budget = 2;
  opt.abstract_step.retry_budget = 2;
  LitmusProgram p = builtin_program("tx-relaxed");
  if (check_forward_simulation(p, opt).ok) CHECK(check_program_refinement(p, opt).ok);
}

TEST_CASE("dropped release-acquire annotations break the simulation") {
  LitmusProgram p = builtin_program("tx-mp");
  for (const char* name : {"drop-e2-release", "drop-b3-acquire"}) {
    RefinementOptions opt;
    opt.concrete_step.retry_budget = 2;
    opt.abstract_step.retry_budget = 2;
    REQUIRE(apply_mutation(name, &opt.concrete_step.mutations));
    SimReport sim = check_forward_simulation(p, opt);
    CHECK_FALSE(sim.ok);
    CHECK_FALSE(sim.trace.empty());
    CHECK(sim.detail.find("client-observation") != std::string::npos);
  }
}

TEST_CASE("the weakened validation test is caught on the snapshot program") {
  LitmusProgram p = builtin_program("two-writer-snapshot");
  RefinementOptions opt;
  SimReport clean = check_forward_simulation(p, opt);
  CHECK(clean.ok);
  REQUIRE(apply_mutation("weaken-r10-test", &opt.concrete_step.mutations));
  SimReport mutated = check_forward_simulation(p, opt);
  CHECK_FALSE(mutated.ok);
}

TEST_CASE("the demoted first-read update is caught on the publication program") {
  LitmusProgram p = builtin_program("causal-publish");
  ExploreOptions opt;
  ExplorationResult clean = explore(p, Backend::TmlRa, opt);
  CHECK(clean.verdict);
  REQUIRE(apply_mutation("r4-plain-read", &opt.step.mutations));
  ExplorationResult mutated = explore(p, Backend::TmlRa, opt);
  CHECK_FALSE(mutated.verdict);
}

TEST_CASE("commit-order serializability holds where wall-clock order cannot") {
  LitmusProgram p = builtin_program("tx-mp");
  ExploreOptions opt;
  opt.step.retry_budget = 2;
  SerializabilityReport ra = check_program_serializability(p, opt);
  CHECK(ra.failures == 0);
  CHECK(ra.histories > 0);
  // The relaxed TxBegin admits stale snapshots, so the sequentially
  // consistent reading of real time is refutable by design.
  SerializabilityReport sc =
      check_program_serializability(p, opt, SerializabilityMode::WallClock);
  CHECK(sc.failures > 0);
}

TEST_CASE("external reads only ever return committed snapshot values") {
  LitmusProgram p = builtin_program("tx-relaxed");
  ExploreOptions opt;
  auto histories = enumerate_histories(p, opt);
  for (const auto& h : histories) {
    std::vector<std::vector<Val>> mem{std::vector<Val>(p.sym.tx_locs.size(), 0)};
    std::vector<LocValMap> pending(p.num_threads());
    for (const TmEvent& e : h) {
      switch (e.kind) {
        case TmEvent::Kind::Write: pending[e.thread].put(e.tx_loc, e.val); break;
        case TmEvent::Kind::ReadExt: {
          REQUIRE(e.idx >= 0);
          REQUIRE(e.idx < static_cast<int>(mem.size()));
          CHECK(mem[e.idx][e.tx_loc] == e.val);
          break;
        }
        case TmEvent::Kind::CommitWR: {
          std::vector<Val> next = mem.back();
          for (auto& [l, v] : pending[e.thread].entries) next[l] = v;
          mem.push_back(std::move(next));
          pending[e.thread] = {};
          break;
        }
        case TmEvent::Kind::CommitRO:
        case TmEvent::Kind::Abort: pending[e.thread] = {}; break;
        default: break;
      }
    }
  }
}
