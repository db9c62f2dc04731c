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
#include "ratm/outline.hpp"
#include "ratm/parser.hpp"
#include "ratm/rules.hpp"

using namespace ratm;

namespace {

struct TxFixture {
  LitmusProgram p = builtin_program("tx-mp");
  Configuration c0 = initial_configuration(p, Backend::Tms2Ra);

  bool eval(const std::string& text, const Configuration& c) {
    return eval_assertion(parse_assertion(text, p), p, Backend::Tms2Ra, c);
  }

  /// Runs thread 1 to completion: d := 5; TxBegin^R; TxWrite(f,1); TxEnd.
  Configuration writer_done() {
    Configuration c = c0;
    StepOptions opt;
    opt.explore_aborts = false;
    while (c.pc[0] < p.threads[0].terminal()) {
      auto succs = enabled_steps(p, Backend::Tms2Ra, c, opt);
      bool advanced = false;
      for (Successor& s : succs)
        if (s.thread == 0) {
          c = std::move(s.config);
          advanced = true;
          break;
        }
      REQUIRE(advanced);
    }
    return c;
  }
};

}  // namespace

TEST_CASE("definite and possible value assertions") {
  TxFixture fx;
  CHECK(fx.eval("[d = 0]@t1", fx.c0));
  CHECK(fx.eval("[d = 0]@t2", fx.c0));
  CHECK(fx.eval("[f^ = 0]@t2", fx.c0));
  CHECK_FALSE(fx.eval("[f^ ~ 1]@t2", fx.c0));

  Configuration c = fx.writer_done();
  CHECK(fx.eval("[d = 5]@t1", c));
  CHECK_FALSE(fx.eval("[d = 5]@t2", c));  // the reader still sees 0 or 5
  CHECK(fx.eval("[d ~ 5]@t2", c));
  CHECK(fx.eval("[d ~ 0]@t2", c));
  CHECK(fx.eval("[f^ ~ 1]@t2", c));
  CHECK_FALSE(fx.eval("[f^ = 1]@t2", c));  // snapshot 0 still visible
  CHECK(fx.eval("status@t1 == committed", c));
  CHECK(fx.eval("memlen == 2", c));
  CHECK(fx.eval("M[f^ = 1]@1", c));
  CHECK(fx.eval("NW[f^, 2]", c));
  CHECK_FALSE(fx.eval("NW[f^, 1]", c));
  CHECK(fx.eval("obs(d)@t2 subset {0, 5}", c));
  CHECK_FALSE(fx.eval("obs(d)@t2 subset {5}", c));
}

TEST_CASE("definite implies possible on reachable states") {
  TxFixture fx;
  ExploreOptions opt;
  opt.step.retry_budget = 1;
  ReachGraph g = explore_graph(fx.p, Backend::Tms2Ra, opt);
  Assertion def = parse_assertion("[d = 5]@t2", fx.p);
  Assertion poss = parse_assertion("[d ~ 5]@t2", fx.p);
  for (const Configuration& c : g.configs) {
    if (eval_assertion(def, fx.p, Backend::Tms2Ra, c))
      CHECK(eval_assertion(poss, fx.p, Backend::Tms2Ra, c));
  }
}

TEST_CASE("never-written excludes possible observation everywhere") {
  TxFixture fx;
  ExploreOptions opt;
  opt.step.retry_budget = 1;
  ReachGraph g = explore_graph(fx.p, Backend::Tms2Ra, opt);
  Assertion nw = parse_assertion("NW[f^, 3]", fx.p);
  Assertion poss1 = parse_assertion("[f^ ~ 3]@t1", fx.p);
  Assertion poss2 = parse_assertion("[f^ ~ 3]@t2", fx.p);
  for (const Configuration& c : g.configs) {
    REQUIRE(eval_assertion(nw, fx.p, Backend::Tms2Ra, c));
    CHECK_FALSE(eval_assertion(poss1, fx.p, Backend::Tms2Ra, c));
    CHECK_FALSE(eval_assertion(poss2, fx.p, Backend::Tms2Ra, c));
  }
}

TEST_CASE("transactional quantifiers agree with direct enumeration") {
  TxFixture fx;
  Configuration c = fx.writer_done();
  const TMSpecState& spec = *c.spec;
  bool all1 = true, any1 = false;
  for (int i : spec.visible_memories(1)) {
    all1 = all1 && spec.memory(i)[0] == 1;
    any1 = any1 || spec.memory(i)[0] == 1;
  }
  CHECK(fx.eval("[f^ = 1]@t2", c) == all1);
  CHECK(fx.eval("[f^ ~ 1]@t2", c) == any1);
}

TEST_CASE("the transactional conditional observation transfers views") {
  TxFixture fx;
  Configuration c = fx.writer_done();
  // The committed memory {f -> 1} is releasing and its view holds the last
  // write of d, so reading 1 promises the definite value after commit.
  CHECK(fx.eval("< f^ = 1 >[d = 5]@t2", c));
  CHECK_FALSE(fx.eval("< f^ = 1 >[d = 0]@t2", c));
  CHECK(fx.eval("< f^ = 3 >[d = 0]@t2", c));  // vacuous: 3 is never installed
}

TEST_CASE("the conditional trigger's synchronisation flag has two readings") {
  // An acquiring-only writer installs a snapshot whose flag is A: it does
  // not release, so the default reading rejects the conditional; the
  // any-non-relaxed reading accepts it.
  LitmusProgram p = parse_litmus(R"(
program "acq-writer"
locations d
txlocations f
thread t1 { d := 5; TxBegin^A {}; TxWrite(f, 1); TxEnd; }
thread t2 { TxBegin^A {r1}; TxRead(f, r1); TxEnd; }
forall true
)");
  Configuration c = initial_configuration(p, Backend::Tms2Ra);
  StepOptions sopt;
  sopt.explore_aborts = false;
  while (c.pc[0] < p.threads[0].terminal()) {
    bool moved = false;
    for (Successor& s : enabled_steps(p, Backend::Tms2Ra, c, sopt))
      if (s.thread == 0) {
        c = std::move(s.config);
        moved = true;
        break;
      }
    REQUIRE(moved);
  }
  Assertion cond = parse_assertion("< f^ = 1 >[d = 5]@t2", p);
  CHECK_FALSE(eval_assertion(cond, p, Backend::Tms2Ra, c, {}));
  AssertOptions nonrelaxed;
  nonrelaxed.si_nonrelaxed = true;
  CHECK(eval_assertion(cond, p, Backend::Tms2Ra, c, nonrelaxed));
}

TEST_CASE("commit-conditional definite values") {
  TxFixture fx;
  Configuration c = fx.writer_done();
  StepOptions opt;
  opt.explore_aborts = false;
  // Walk t2: TxBegin^A, then read f externally at index 1.
  auto begin = enabled_steps(fx.p, Backend::Tms2Ra, c, opt);
  Configuration c1;
  bool got = false;
  for (Successor& s : begin)
    if (s.thread == 1 && s.action.kind == Action::Kind::TxBegin && s.action.aux == 0) {
      c1 = std::move(s.config);
      got = true;
    }
  REQUIRE(got);
  Configuration c2;
  got = false;
  for (Successor& s : enabled_steps(fx.p, Backend::Tms2Ra, c1, opt))
    if (s.thread == 1 && s.action.kind == Action::Kind::TxReadExt && s.action.aux == 1) {
      c2 = std::move(s.config);
      got = true;
    }
  REQUIRE(got);
  // Having read from the releasing snapshot, committing must establish
  // [d = 5] for the reader.
  CHECK(fx.eval("[d S= 5]@t2", c2));
  CHECK_FALSE(fx.eval("[d S= 0]@t2", c2));
  CHECK(fx.eval("(f, r1) in RS@t2", c2));
  CHECK(fx.eval("WS@t2 = {}", c2));
  CHECK(fx.eval("Acq@t2", c2));
  CHECK_FALSE(fx.eval("Rel@t2", c2));
}

TEST_CASE("client conditional observation on plain memory") {
  LitmusProgram p = builtin_program("mp-ra");
  Configuration c = initial_configuration(p, Backend::Plain);
  StepOptions opt;
  // Run thread 1 to completion: d := 5; f :=^R 1.
  for (int i = 0; i < 2; ++i) {
    for (Successor& s : enabled_steps(p, Backend::Plain, c, opt))
      if (s.thread == 0) {
        c = std::move(s.config);
        break;
      }
  }
  CHECK(eval_assertion(parse_assertion("< f = 1 >[d = 5]@t2", p), p, Backend::Plain, c));
  CHECK_FALSE(eval_assertion(parse_assertion("< f = 1 >[d = 0]@t2", p), p, Backend::Plain, c));
  CHECK(eval_assertion(parse_assertion("< f = 3 >[d = 0]@t2", p), p, Backend::Plain, c));
}

TEST_CASE("transactional assertions reject non-specification backends") {
  LitmusProgram p = builtin_program("tx-mp");
  Configuration c = initial_configuration(p, Backend::TmlRa);
  CHECK_THROWS_AS(
      (void)eval_assertion(parse_assertion("[f^ = 0]@t2", p), p, Backend::TmlRa, c), ApiError);
}

TEST_CASE("the transactional message-passing outline is valid") {
  AnnotatedProgram ap = parse_outline(outline_fixture("fig-mp"));
  OutlineOptions opt;
  opt.explore.step.retry_budget = 2;
  OutlineVerdict reach = check_reachable_annotations(ap.program, ap.outline, opt);
  CHECK_MESSAGE(reach.ok, reach.detail);
  OutlineVerdict og = check_og_validity(ap.program, ap.outline, opt);
  CHECK_MESSAGE(og.ok, (og.clause + ": " + og.detail));
}

TEST_CASE("the weakened message-passing outline is refuted") {
  AnnotatedProgram ap = parse_outline(outline_fixture("fig-mp-weak"));
  OutlineOptions opt;
  opt.explore.step.retry_budget = 2;
  OutlineVerdict reach = check_reachable_annotations(ap.program, ap.outline, opt);
  OutlineVerdict og = check_og_validity(ap.program, ap.outline, opt);
  CHECK((!reach.ok || !og.ok));
}

TEST_CASE("a trivial outline passes everything") {
  LitmusProgram p = builtin_program("tx-mp");
  ProofOutline o;
  o.init = assert_true();
  o.fin = assert_true();
  o.ann.resize(p.num_threads());
  for (ThreadId t = 0; t < p.num_threads(); ++t)
    o.ann[t].assign(p.threads[t].terminal() + 1, assert_true());
  OutlineOptions opt;
  opt.explore.step.retry_budget = 1;
  CHECK(check_reachable_annotations(p, o, opt).ok);
  CHECK(check_og_validity(p, o, opt).ok);
}

TEST_CASE("single rules hold and falsified ones are refuted") {
  CHECK(check_rule("core-write-enters-ws").as_expected());
  RuleOutcome no_rel = check_rule("falsified-transfer-no-rel");
  CHECK(no_rel.falsified);
  CHECK_FALSE(no_rel.held);
  CHECK_FALSE(no_rel.counterexample.empty());
}
