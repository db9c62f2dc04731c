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

#include <set>

#include "ratm/corpus.hpp"
#include "ratm/explorer.hpp"
#include "ratm/parser.hpp"
#include "ratm/serializability.hpp"

using namespace ratm;

namespace {

Configuration drive_single(const LitmusProgram& p) {
  Configuration c = initial_configuration(p, Backend::TmlRa);
  StepOptions opt;
  for (int guard = 0; guard < 300 && !c.all_terminal(p); ++guard) {
    auto succs = enabled_steps(p, Backend::TmlRa, c, opt);
    REQUIRE_FALSE(succs.empty());
    REQUIRE(succs.size() == 1);  // single thread, deterministic
    c = succs.front().config;
  }
  REQUIRE(c.all_terminal(p));
  return c;
}

}  // namespace

TEST_CASE("a single writer walks the lock through 0,1,2") {
  LitmusProgram p = parse_litmus(R"(
program "one-writer"
txlocations x
thread t1 { TxBegin^RA {}; TxWrite(x, 7); TxEnd; }
forall true
)");
  Configuration c = drive_single(p);
  LocId glb = p.tml_glb_loc();
  std::vector<Val> lock_vals;
  for (WriteId w : c.mem.mo(glb)) lock_vals.push_back(c.mem.write(w).val);
  CHECK(lock_vals == std::vector<Val>{0, 1, 2});
  std::vector<Val> x_vals;
  for (WriteId w : c.mem.mo(p.tml_beta_loc(0))) x_vals.push_back(c.mem.write(w).val);
  CHECK(x_vals == std::vector<Val>{0, 7});
  CHECK(c.tml_status[0] == TxnStatus::Committed);
}

TEST_CASE("a read-only transaction commits without touching the lock value") {
  LitmusProgram p = parse_litmus(R"(
program "one-reader"
txlocations x
thread t1 { TxBegin^RA {r}; TxRead(x, r); TxEnd; }
forall r == 0
)");
  Configuration c = drive_single(p);
  LocId glb = p.tml_glb_loc();
  // The first-read update installs a fresh lock write with the same value.
  std::vector<Val> lock_vals;
  for (WriteId w : c.mem.mo(glb)) lock_vals.push_back(c.mem.write(w).val);
  CHECK(lock_vals == std::vector<Val>{0, 0});
  CHECK(c.mem.covered(c.mem.mo(glb)[0]));
  CHECK(c.regs[0] == RegVal{0});
  CHECK(c.tml_status[0] == TxnStatus::Committed);
}

TEST_CASE("later reads in a transaction skip the first-read update") {
  LitmusProgram p = parse_litmus(R"(
program "two-reads"
txlocations x y
thread t1 { TxBegin^RA {r, s}; TxRead(x, r); TxRead(y, s); TxEnd; }
forall r == 0 /\ s == 0
)");
  Configuration c = drive_single(p);
  LocId glb = p.tml_glb_loc();
  // Only one value-preserving update: the second read validates instead.
  CHECK(c.mem.mo(glb).size() == 2);
  CHECK(c.tml_status[0] == TxnStatus::Committed);
}

TEST_CASE("a reader racing a writer aborts or reads consistently") {
  LitmusProgram p = parse_litmus(R"(
program "race"
txlocations x
thread t1 { TxBegin^RA {}; TxWrite(x, 1); TxEnd; }
thread t2 { TxBegin^RA {r}; TxRead(x, r); TxEnd; }
forall true
)");
  ExplorationResult res = explore(p, Backend::TmlRa, {});
  CHECK(res.invariant_violations.empty());
  std::set<RegVal> rs;
  for (const auto& regs : res.finals) rs.insert(regs[0]);
  // Completed runs: committed reads of 0 or 1, or an aborted (poisoned) read.
  CHECK(rs.count(RegVal{0}) == 1);
  CHECK(rs.count(RegVal{1}) == 1);
  CHECK(rs.count(RegVal{}) == 1);
}

TEST_CASE("a writing transaction does not force read-only ones to abort") {
  // The parallelism witness: a reader that begins before the writer's
  // release still commits after it.
  LitmusProgram p = parse_litmus(R"(
program "parallel"
txlocations x y
thread t1 { TxBegin^RA {}; TxWrite(y, 1); TxEnd; }
thread t2 { TxBegin^RA {r}; TxRead(x, r); TxEnd; }
forall true
)");
  // Search the execution graph for begin(reader) < commit(writer) <
  // commit(reader): a product walk over (configuration, phase).
  StepOptions sopt;
  std::set<std::string> seen;
  std::vector<std::pair<Configuration, int>> work;
  work.emplace_back(initial_configuration(p, Backend::TmlRa), 0);
  bool found = false;
  while (!work.empty() && !found) {
    auto [c, phase] = std::move(work.back());
    work.pop_back();
    std::string key = c.canonical_key(p, Backend::TmlRa) + char('0' + phase);
    if (!seen.insert(std::move(key)).second) continue;
    for (Successor& s : enabled_steps(p, Backend::TmlRa, c, sopt)) {
      int next = phase;
      if (phase == 0 && s.action.kind == Action::Kind::TmlBeginDone && s.action.thread == 1)
        next = 1;
      if (phase == 1 && s.action.kind == Action::Kind::TmlCommit && s.action.thread == 0)
        next = 2;
      if (phase == 2 && s.action.kind == Action::Kind::TmlCommit && s.action.thread == 1) {
        found = true;
        break;
      }
      work.emplace_back(std::move(s.config), next);
    }
  }
  CHECK(found);
}

TEST_CASE("aborts poison every leased register") {
  LitmusProgram p = builtin_program("tx-mp");
  ExploreOptions opt;
  opt.step.retry_budget = 1;
  ExplorationResult res = explore(p, Backend::TmlRa, opt);
  CHECK(res.invariant_violations.empty());  // includes the abort-soundness check
}

TEST_CASE("the mutation catalogue is named and applicable") {
  CHECK(tml_mutation_catalogue().size() == 4);
  TmlMutations m;
  CHECK(apply_mutation("drop-e2-release", &m));
  CHECK(apply_mutation("drop-b3-acquire", &m));
  CHECK(apply_mutation("weaken-r10-test", &m));
  CHECK(apply_mutation("r4-plain-read", &m));
  CHECK_FALSE(apply_mutation("no-such-mutation", &m));
  CHECK(m.any());
}

TEST_CASE("mutated interpreters still explore without crashing") {
  LitmusProgram p = builtin_program("tx-mp");
  for (const auto& info : tml_mutation_catalogue()) {
    ExploreOptions opt;
    opt.step.retry_budget = 2;
    REQUIRE(apply_mutation(info.name, &opt.step.mutations));
    ExplorationResult res = explore(p, Backend::TmlRa, opt);
    CHECK(res.stats.states > 0);
  }
}
