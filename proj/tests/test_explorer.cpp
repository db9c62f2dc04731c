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

#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ratm/corpus.hpp"
#include "ratm/explorer.hpp"
#include "ratm/parser.hpp"

using namespace ratm;

namespace {

std::set<Val> reg_set(const LitmusProgram& p, const ExplorationResult& res,
                      const std::string& reg) {
  int r = p.sym.find_reg(reg);
  REQUIRE(r >= 0);
  std::set<Val> out;
  for (const auto& regs : res.finals)
    if (regs[r]) out.insert(*regs[r]);
  return out;
}

}  // namespace

TEST_CASE("relaxed message passing can read the stale value") {
  LitmusProgram p = builtin_program("mp-relaxed");
  ExplorationResult res = explore(p, Backend::Plain, {});
  CHECK(res.verdict);
  CHECK(reg_set(p, res, "r2") == std::set<Val>{0, 5});
  CHECK(res.invariant_violations.empty());
}

TEST_CASE("release-acquire message passing cannot") {
  LitmusProgram p = builtin_program("mp-ra");
  ExplorationResult res = explore(p, Backend::Plain, {});
  CHECK(res.verdict);
  CHECK(reg_set(p, res, "r2") == std::set<Val>{5});
  CHECK(res.invariant_violations.empty());
}

TEST_CASE("reachable values at a control point") {
  LitmusProgram p = builtin_program("mp-ra");
  // Thread 2, label 2: the final read of d after the loop exits.
  CHECK(reachable_values(p, Backend::Plain, 1, 2, "d", {}) == std::vector<Val>{5});
  LitmusProgram q = builtin_program("mp-relaxed");
  CHECK(reachable_values(q, Backend::Plain, 1, 2, "d", {}) == std::vector<Val>{0, 5});
  // Before anything runs, only the initial value is observable.
  CHECK(reachable_values(q, Backend::Plain, 0, 0, "d", {}) == std::vector<Val>{0});
}

TEST_CASE("plain and specification backends agree without transactions") {
  LitmusProgram p = builtin_program("mp-ra");
  ExplorationResult plain = explore(p, Backend::Plain, {});
  ExplorationResult spec = explore(p, Backend::Tms2Ra, {});
  CHECK(plain.finals == spec.finals);
}

TEST_CASE("the plain backend rejects transactional programs") {
  LitmusProgram p = builtin_program("tx-mp");
  CHECK_THROWS_AS((void)explore(p, Backend::Plain, {}), ApiError);
}

TEST_CASE("canonicalization does not change the reachable finals") {
  LitmusProgram p = builtin_program("tx-mp");
  ExploreOptions with, without;
  with.step.retry_budget = 2;
  without.step.retry_budget = 2;
  without.memoize = false;
  ExplorationResult a = explore(p, Backend::Tms2Ra, with);
  ExplorationResult b = explore(p, Backend::Tms2Ra, without);
  CHECK(a.finals == b.finals);
}

TEST_CASE("worker pools produce the same verdict and finals") {
  LitmusProgram p = builtin_program("tx-mp");
  ExploreOptions one, four;
  one.step.retry_budget = 2;
  four.step.retry_budget = 2;
  four.workers = 4;
  ExplorationResult a = explore(p, Backend::Tms2Ra, one);
  ExplorationResult b = explore(p, Backend::Tms2Ra, four);
  CHECK(a.finals == b.finals);
  CHECK(a.stats.states == b.stats.states);
}

TEST_CASE("the state ceiling raises an explicit exhaustion error") {
  LitmusProgram p = builtin_program("tx-mp");
  ExploreOptions opt;
  opt.state_ceiling = 10;
  CHECK_THROWS_AS((void)explore(p, Backend::Tms2Ra, opt), ExhaustionError);
}

TEST_CASE("result json follows the documented schema") {
  LitmusProgram p = builtin_program("mp-ra");
  ExplorationResult res = explore(p, Backend::Plain, {});
  auto j = nlohmann::json::parse(res.json(p, Backend::Plain));
  CHECK(j["program"] == "mp-ra");
  CHECK(j["backend"] == "plain");
  CHECK(j["verdict"] == true);
  CHECK(j["finals"].is_array());
  CHECK(j["stats"]["states"].get<long long>() > 0);
  for (const auto& f : j["finals"]) CHECK(f.contains("regs"));
}

TEST_CASE("counterexamples come with a trace") {
  LitmusProgram p = parse_litmus(R"(
program "never"
locations x
thread t1 { x := 1; }
thread t2 { r <- x; }
forall r == 7
)");
  ExplorationResult res = explore(p, Backend::Plain, {});
  CHECK_FALSE(res.verdict);
  REQUIRE(res.counterexample_trace.has_value());
  CHECK_FALSE(res.counterexample_trace->empty());
}

TEST_CASE("transactional litmus verdicts under the specification backend") {
  LitmusProgram p = builtin_program("tx-mp");
  ExploreOptions opt;
  opt.step.retry_budget = 2;
  ExplorationResult res = explore(p, Backend::Tms2Ra, opt);
  CHECK(res.verdict);
  CHECK(reg_set(p, res, "r2") == std::set<Val>{5});
  CHECK(res.invariant_violations.empty());
}

TEST_CASE("transactional litmus verdicts under the lock backend") {
  LitmusProgram p = builtin_program("tx-mp");
  ExploreOptions opt;
  opt.step.retry_budget = 2;
  ExplorationResult res = explore(p, Backend::TmlRa, opt);
  CHECK(res.verdict);
  CHECK(reg_set(p, res, "r2") == std::set<Val>{5});
  CHECK(res.invariant_violations.empty());
}

TEST_CASE("single-threaded programs behave sequentially") {
  // Exploration of a straight-line single-threaded program must leave each
  // location observing exactly the last value the program wrote to it.
  std::mt19937 rng(11);
  for (int round = 0; round < 25; ++round) {
    std::ostringstream src;
    src << "program \"seq\"\nlocations x y\nthread t {\n";
    Val last_x = 0, last_y = 0;
    for (int i = 0; i < 6; ++i) {
      bool to_x = rng() % 2 == 0;
      Val v = static_cast<Val>(1 + rng() % 5);
      (to_x ? last_x : last_y) = v;
      src << "  " << (to_x ? "x" : "y") << (rng() % 2 ? " :=^R " : " := ") << v << ";\n";
    }
    src << "}\nforall true\n";
    LitmusProgram p = parse_litmus(src.str());
    ReachGraph g = explore_graph(p, Backend::Plain, {});
    int finals = 0;
    for (const Configuration& c : g.configs) {
      if (!c.all_terminal(p)) continue;
      ++finals;
      CHECK(c.mem.observable_values(0, 0) == std::vector<Val>{last_x});
      CHECK(c.mem.observable_values(0, 1) == std::vector<Val>{last_y});
    }
    CHECK(finals == 1);
  }
}

TEST_CASE("lock-backend finals are contained in the specification finals") {
  LitmusProgram p = builtin_program("tx-relaxed");
  ExplorationResult tml = explore(p, Backend::TmlRa, {});
  ExplorationResult tms = explore(p, Backend::Tms2Ra, {});
  std::set<std::vector<RegVal>> spec_finals(tms.finals.begin(), tms.finals.end());
  for (const auto& f : tml.finals) CHECK(spec_finals.count(f) == 1);
}
