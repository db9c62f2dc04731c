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
#include "ratm/parser.hpp"

using namespace ratm;

TEST_CASE("the builtin corpus parses with stable ids") {
  auto ids = builtin_ids();
  REQUIRE(ids == std::vector<std::string>{"mp-relaxed", "mp-ra", "tx-mp", "tx-relaxed",
                                          "tx-chain"});
  for (const auto& id : ids) {
    LitmusProgram p = builtin_program(id);
    CHECK(p.id == id);
    CHECK(p.num_threads() >= 2);
  }
  CHECK(builtin_program("tx-chain").num_threads() == 3);
  CHECK(builtin_program("tx-mp").has_tx_commands);
  CHECK_FALSE(builtin_program("mp-ra").has_tx_commands);
}

TEST_CASE("postconditions are recorded as written") {
  LitmusProgram p = builtin_program("tx-relaxed");
  REQUIRE(p.posts.size() == 2);
  CHECK(p.posts[0].universal);
  CHECK_FALSE(p.posts[1].universal);
  CHECK(p.posts[1].text.find("r3") != std::string::npos);
}

TEST_CASE("lowering produces branch targets and abort continuations") {
  LitmusProgram p = builtin_program("tx-mp");
  // Thread 2: TxBegin, TxRead, TxEnd, until-guard, final read.
  const ThreadCode& t2 = p.threads[1];
  REQUIRE(t2.code.size() == 5);
  CHECK(t2.code[0].cmd.kind == AtomicCommand::Kind::TxBegin);
  CHECK(t2.code[3].kind == LabelledCommand::Kind::If);
  CHECK(t2.code[3].back_edge_on_else);
  CHECK(t2.code[3].else_label == 0);
  // Abort from any transactional command lands on the until-guard.
  for (int l = 0; l <= 2; ++l) CHECK(t2.code[l].abort_next == 3);
}

TEST_CASE("empty thread bodies are allowed") {
  LitmusProgram p = parse_litmus("locations x\nthread a { }\nthread b { r <- x; }\nforall true");
  CHECK(p.threads[0].terminal() == 0);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_litmus("locations x\nthread t { r <-^Q x; }"), ParseError);
  CHECK_THROWS_AS(parse_litmus("txlocations f\nthread t { f := 1; }"), ParseError);
  CHECK_THROWS_AS(parse_litmus("txlocations f\nthread t { TxRead(f, r); }"), ParseError);
  CHECK_THROWS_AS(parse_litmus("locations x\nthread t { TxBegin^A {r}; }"), ParseError);
  // Register owned by another thread.
  CHECK_THROWS_AS(
      parse_litmus("locations x\nthread a { r <- x; }\nthread b { r <- x; }\nforall true"),
      ParseError);
  // TxRead target outside the transaction's register set.
  CHECK_THROWS_AS(parse_litmus("txlocations f\nthread t { TxBegin^A {}; TxRead(f, r); TxEnd; }"),
                  ParseError);
}

TEST_CASE("guards are deterministic and terminal configs have no steps") {
  LitmusProgram p = builtin_program("mp-ra");
  Configuration c = initial_configuration(p, Backend::Plain);
  StepOptions opt;
  auto steps = enabled_steps(p, Backend::Plain, c, opt);
  // Both threads have exactly one enabled first step (store / single read).
  int t0 = 0, t1 = 0;
  for (const Successor& s : steps) (s.thread == 0 ? t0 : t1) += 1;
  CHECK(t0 == 1);
  CHECK(t1 == 1);

  // Drive writer-first, then let the reader take its newest choice; the
  // final configuration offers no steps.
  Configuration cur = c;
  for (int guard = 0; guard < 200; ++guard) {
    auto succ = enabled_steps(p, Backend::Plain, cur, opt);
    if (cur.all_terminal(p)) {
      CHECK(succ.empty());
      break;
    }
    REQUIRE_FALSE(succ.empty());
    const Successor* pick = &succ.back();
    for (const Successor& s : succ)
      if (s.thread == 0) pick = &s;
    cur = pick->config;
  }
  CHECK(cur.all_terminal(p));
}

TEST_CASE("a poisoned guard sticks the thread") {
  LitmusProgram p =
      parse_litmus("locations x\nthread t { r := 1; do { r <- x; } until r == 0; }\nforall true");
  Configuration c = initial_configuration(p, Backend::Plain);
  c.regs[0] = std::nullopt;
  c.pc[0] = 2;  // at the until-guard with a poisoned register
  StepOptions opt;
  CHECK(enabled_steps(p, Backend::Plain, c, opt).empty());
}

TEST_CASE("json export names every piece") {
  LitmusProgram p = builtin_program("tx-chain");
  std::string j = p.json();
  CHECK(j.find("\"tx-chain\"") != std::string::npos);
  CHECK(j.find("txbegin") != std::string::npos);
  CHECK(j.find("\"forall\"") != std::string::npos);
}
