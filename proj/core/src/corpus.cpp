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

#include "ratm/corpus.hpp"

#include <map>

#include "ratm/parser.hpp"

namespace ratm {

namespace {

const char* kMpRelaxed = R"(
program "mp-relaxed"
locations d f
thread t1 {
  d := 5;
  f := 1;
}
thread t2 {
  do {
    r1 <- f;
  } until r1 == 1;
  r2 <- d;
}
forall r2 == 0 \/ r2 == 5
)";

const char* kMpRa = R"(
program "mp-ra"
locations d f
thread t1 {
  d := 5;
  f :=^R 1;
}
thread t2 {
  do {
    r1 <-^A f;
  } until r1 == 1;
  r2 <- d;
}
forall r2 == 5
)";

const char* kTxMp = R"(
program "tx-mp"
locations d
txlocations f
thread t1 {
  d := 5;
  TxBegin^R {};
  TxWrite(f, 1);
  TxEnd;
}
thread t2 {
  do {
    TxBegin^A {r1};
    TxRead(f, r1);
    TxEnd;
  } until r1 == 1;
  r2 <- d;
}
forall r2 == 5
)";

const char* kTxRelaxed = R"(
program "tx-relaxed"
locations d1
txlocations d2 f
thread t1 {
  d1 := 5;
  TxBegin^RX {};
  TxWrite(d2, 10);
  TxWrite(f, 1);
  TxEnd;
}
thread t2 {
  TxBegin^RX {r1, r2};
  TxRead(f, r1);
  if r1 == 1 {
    TxRead(d2, r2);
  }
  TxEnd;
  r3 <- d1;
}
forall r1 == 1 => r2 == 10 /\ (r3 == 0 \/ r3 == 5)
exists r3 == 0
)";

const char* kTxChain = R"(
program "tx-chain"
locations d1 d2
txlocations f
thread t1 {
  d1 := 5;
  TxBegin^R {};
  TxWrite(f, 1);
  TxEnd;
}
thread t2 {
  d2 := 10;
  TxBegin^RA {r2};
  TxRead(f, r2);
  if r2 == 1 {
    TxWrite(f, 2);
  }
  TxEnd;
}
thread t3 {
  TxBegin^A {r3};
  TxRead(f, r3);
  TxEnd;
  if r3 == 2 {
    s1 <- d1;
    s2 <- d2;
  }
}
forall r3 == 2 => s1 == 5 /\ s2 == 10
)";

// ---------------------------------------------------------------------------
// Mutation-harness programs: the corpus never drives the lock algorithm's
// second-read validation or the first-read publication chain, so the
// sensitivity harness adds two programs that do.
// ---------------------------------------------------------------------------

// Two writers install two epochs; a committed reader must see one snapshot,
// so its pair of reads stays on the diagonal (aborted reads are poisoned
// and satisfy the guard vacuously).
const char* kTwoWriterSnapshot = R"(
program "two-writer-snapshot"
txlocations x y
thread w1 { TxBegin^RA {}; TxWrite(x, 1); TxWrite(y, 1); TxEnd; }
thread w2 { TxBegin^RA {}; TxWrite(x, 2); TxWrite(y, 2); TxEnd; }
thread rd {
  TxBegin^RA {a, b};
  TxRead(x, a);
  TxRead(y, b);
  TxEnd;
}
forall a in {0, 1, 2} /\ b in {0, 1, 2}
      => (a == 0 /\ b == 0 \/ a == 1 /\ b == 1 \/ a == 2 /\ b == 2)
)";

// A committed read-only transaction publishes its view through the lock
// word; a later writer inherits it and hands it on to its own readers.
const char* kCausalPublish = R"(
program "causal-publish"
locations d
txlocations y
thread ta { d := 5; TxBegin^RA {a}; TxRead(y, a); TxEnd; }
thread tb { TxBegin^RA {}; TxWrite(y, 1); TxEnd; }
thread tc { TxBegin^RA {c}; TxRead(y, c); TxEnd; if c == 1 { r <- d; } }
forall a == 0 /\ c == 1 => r == 5
)";

// ---------------------------------------------------------------------------
// Proof-outline fixtures.
// ---------------------------------------------------------------------------

const char* kFigMp = R"(
program "tx-mp"
locations d
txlocations f
init {| [d = 0]@t1 /\ [d = 0]@t2 /\ [f^ = 0]@t1 /\ [f^ = 0]@t2 |}
thread t1 {
  {| ! [f^ ~ 1]@t2 /\ [d = 0]@t1 |}
  d := 5;
  {| ! [f^ ~ 1]@t2 /\ [d = 5]@t1 |}
  TxBegin^R {};
  {| ! [f^ ~ 1]@t2 /\ [d = 5]@t1 /\ Rel@t1 |}
  TxWrite(f, 1);
  {| ! [f^ ~ 1]@t2 /\ [d = 5]@t1 /\ Rel@t1 /\ (f, 1) in WS@t1 |}
  TxEnd;
  {| true |}
}
thread t2 {
  do {
    {| < f^ = 1 >[d = 5]@t2 |}
    TxBegin^A {r1};
    {| < f^ = 1 >[d = 5]@t2 /\ WS@t2 = {} /\ Acq@t2 |}
    TxRead(f, r1);
    {| < f^ = 1 >[d = 5]@t2 /\ WS@t2 = {} /\ Acq@t2 /\ (f, r1) in RS@t2
       /\ (r1 == 1 => [d S= 5]@t2) |}
    TxEnd;
    {| < f^ = 1 >[d = 5]@t2 /\ (r1 == 1 => [d = 5]@t2) |}
  } until r1 == 1;
  {| [d = 5]@t2 |}
  r2 <- d;
  {| r2 == 5 |}
}
final {| r2 == 5 |}
forall r2 == 5
)";

const char* kFigMpWeak = R"(
program "tx-mp"
locations d
txlocations f
init {| [d = 0]@t1 /\ [d = 0]@t2 /\ [f^ = 0]@t1 /\ [f^ = 0]@t2 |}
thread t1 {
  {| ! [f^ ~ 1]@t2 /\ [d = 0]@t1 |}
  d := 5;
  {| ! [f^ ~ 1]@t2 /\ [d = 5]@t1 |}
  TxBegin^R {};
  {| ! [f^ ~ 1]@t2 /\ [d = 5]@t1 /\ Rel@t1 |}
  TxWrite(f, 1);
  {| ! [f^ ~ 1]@t2 /\ [d = 5]@t1 /\ Rel@t1 /\ (f, 1) in WS@t1 |}
  TxEnd;
  {| true |}
}
thread t2 {
  do {
    {| < f^ = 1 >[d = 5]@t2 |}
    TxBegin^A {r1};
    {| < f^ = 1 >[d = 5]@t2 /\ WS@t2 = {} /\ Acq@t2 |}
    TxRead(f, r1);
    {| < f^ = 1 >[d = 5]@t2 /\ WS@t2 = {} /\ Acq@t2 /\ (f, r1) in RS@t2
       /\ [d S= 5]@t2 |}
    TxEnd;
    {| < f^ = 1 >[d = 5]@t2 /\ (r1 == 1 => [d = 5]@t2) |}
  } until r1 == 1;
  {| [d = 5]@t2 |}
  r2 <- d;
  {| r2 == 5 |}
}
final {| r2 == 5 |}
forall r2 == 5
)";

const char* kFigChain = R"(
program "tx-chain"
locations d1 d2
txlocations f
ghost tf1 = 0
init {| [f^ = 0]@t1 /\ [d1 = 0]@t1 /\ [d2 = 0]@t1
     /\ [f^ = 0]@t2 /\ [d1 = 0]@t2 /\ [d2 = 0]@t2
     /\ [f^ = 0]@t3 /\ [d1 = 0]@t3 /\ [d2 = 0]@t3 |}
thread t1 {
  {| ! [f^ ~ 1]@t2 /\ [d1 = 0]@t1 /\ ! tf1 |}
  d1 := 5;
  {| ! [f^ ~ 1]@t2 /\ [d1 = 5]@t1 /\ ! tf1 |}
  TxBegin^R {};
  {| ! [f^ ~ 1]@t2 /\ [d1 = 5]@t1 /\ Rel@t1 /\ ! tf1 |}
  TxWrite(f, 1);
  {| ! [f^ ~ 1]@t2 /\ [d1 = 5]@t1 /\ Rel@t1 /\ (f, 1) in WS@t1 /\ ! tf1 |}
  TxEnd with tf1 := 1;
  {| < f^ = 1 >[d1 = 5]@t2 /\ tf1 |}
}
thread t2 {
  {| [d2 = 0]@t2 /\ < f^ = 1 >[d1 = 5]@t2 /\ ! [f^ ~ 2]@t1 /\ ! [f^ ~ 2]@t3
     /\ ([f^ ~ 1]@t2 => tf1) |}
  d2 := 10;
  {| [d2 = 10]@t2 /\ < f^ = 1 >[d1 = 5]@t2 /\ ! [f^ ~ 2]@t1 /\ ! [f^ ~ 2]@t3
     /\ ([f^ ~ 1]@t2 => tf1) |}
  TxBegin^RA {r2};
  {| [d2 = 10]@t2 /\ < f^ = 1 >[d1 = 5]@t2 /\ ! [f^ ~ 2]@t1 /\ ! [f^ ~ 2]@t3
     /\ ([f^ ~ 1]@t2 => tf1) /\ Acq@t2 /\ Rel@t2 /\ WS@t2 = {} |}
  TxRead(f, r2);
  {| [d2 = 10]@t2 /\ < f^ = 1 >[d1 = 5]@t2 /\ ! [f^ ~ 2]@t1 /\ ! [f^ ~ 2]@t3
     /\ (r2 == 1 => [d1 S= 5]@t2 /\ tf1)
     /\ Acq@t2 /\ Rel@t2 /\ WS@t2 = {} /\ (f, r2) in RS@t2 |}
  if r2 == 1 {
    {| [d2 = 10]@t2 /\ < f^ = 1 >[d1 = 5]@t2 /\ ! [f^ ~ 2]@t1 /\ ! [f^ ~ 2]@t3
       /\ [d1 S= 5]@t2 /\ tf1 /\ r2 == 1
       /\ Acq@t2 /\ Rel@t2 /\ WS@t2 = {} /\ (f, r2) in RS@t2 |}
    TxWrite(f, 2);
  }
  {| [d2 = 10]@t2 /\ Acq@t2 /\ Rel@t2
     /\ (r2 != 1 => WS@t2 = {})
     /\ (r2 == 1 => [d1 S= 5]@t2 /\ tf1 /\ (f, 2) in WS@t2)
     /\ (f, r2) in RS@t2 |}
  TxEnd;
  {| < f^ = 2 >[d2 = 10]@t3
     /\ (r2 != 1 => ! [f^ ~ 2]@t1 /\ ! [f^ ~ 2]@t3)
     /\ (r2 == 1 => tf1 /\ < f^ = 2 >[d1 = 5]@t3) |}
}
thread t3 {
  {| < f^ = 2 >[d1 = 5]@t3 /\ < f^ = 2 >[d2 = 10]@t3
     /\ (! tf1 => ! [f^ ~ 1]@t3 /\ ! [f^ ~ 2]@t3) |}
  TxBegin^A {r3};
  {| < f^ = 2 >[d1 = 5]@t3 /\ < f^ = 2 >[d2 = 10]@t3
     /\ (! tf1 => ! [f^ ~ 1]@t3 /\ ! [f^ ~ 2]@t3)
     /\ WS@t3 = {} /\ Acq@t3 |}
  TxRead(f, r3);
  {| < f^ = 2 >[d1 = 5]@t3 /\ < f^ = 2 >[d2 = 10]@t3
     /\ (! tf1 => ! [f^ ~ 1]@t3 /\ ! [f^ ~ 2]@t3)
     /\ WS@t3 = {} /\ (f, r3) in RS@t3 /\ Acq@t3
     /\ (r3 == 2 => [d1 S= 5]@t3 /\ [d2 S= 10]@t3) |}
  TxEnd;
  {| r3 == 2 => [d1 = 5]@t3 /\ [d2 = 10]@t3 |}
  if r3 == 2 {
    {| [d1 = 5]@t3 /\ [d2 = 10]@t3 |}
    s1 <- d1;
    {| s1 == 5 /\ [d2 = 10]@t3 |}
    s2 <- d2;
    {| s1 == 5 /\ s2 == 10 |}
  }
  {| r3 == 2 => s1 == 5 /\ s2 == 10 |}
}
final {| r3 == 2 => s1 == 5 /\ s2 == 10 |}
forall r3 == 2 => s1 == 5 /\ s2 == 10
)";

const char* kFigChainWeak = R"(
program "tx-chain"
locations d1 d2
txlocations f
ghost tf1 = 0
init {| [f^ = 0]@t1 /\ [d1 = 0]@t1 /\ [d2 = 0]@t1
     /\ [f^ = 0]@t2 /\ [d1 = 0]@t2 /\ [d2 = 0]@t2
     /\ [f^ = 0]@t3 /\ [d1 = 0]@t3 /\ [d2 = 0]@t3 |}
thread t1 {
  {| ! [f^ ~ 1]@t2 /\ [d1 = 0]@t1 /\ ! tf1 |}
  d1 := 5;
  {| ! [f^ ~ 1]@t2 /\ [d1 = 5]@t1 /\ ! tf1 |}
  TxBegin^R {};
  {| ! [f^ ~ 1]@t2 /\ [d1 = 5]@t1 /\ Rel@t1 /\ ! tf1 |}
  TxWrite(f, 1);
  {| ! [f^ ~ 1]@t2 /\ [d1 = 5]@t1 /\ Rel@t1 /\ (f, 1) in WS@t1 /\ ! tf1 |}
  TxEnd with tf1 := 1;
  {| < f^ = 1 >[d1 = 5]@t2 /\ tf1 |}
}
thread t2 {
  {| true |}
  d2 := 10;
  {| true |}
  TxBegin^RA {r2};
  {| true |}
  TxRead(f, r2);
  {| true |}
  if r2 == 1 {
    {| true |}
    TxWrite(f, 2);
  }
  {| true |}
  TxEnd;
  {| true |}
}
thread t3 {
  {| true |}
  TxBegin^A {r3};
  {| true |}
  TxRead(f, r3);
  {| true |}
  TxEnd;
  {| [d1 = 5]@t3 |}
  if r3 == 2 {
    {| [d1 = 5]@t3 /\ [d2 = 10]@t3 |}
    s1 <- d1;
    {| s1 == 5 /\ [d2 = 10]@t3 |}
    s2 <- d2;
    {| s1 == 5 /\ s2 == 10 |}
  }
  {| r3 == 2 => s1 == 5 /\ s2 == 10 |}
}
final {| r3 == 2 => s1 == 5 /\ s2 == 10 |}
forall r3 == 2 => s1 == 5 /\ s2 == 10
)";

const char* kFigRelaxed = R"(
program "tx-relaxed"
locations d1
txlocations d2 f
init {| NW[f^, 1] /\ NW[d2^, 10] /\ [d1 = 0]@t1 /\ [d1 = 0]@t2 /\ memlen == 1 |}
thread t1 {
  {| NW[f^, 1] /\ NW[d2^, 10] /\ [d1 = 0]@t1 /\ memlen == 1 |}
  d1 := 5;
  {| NW[f^, 1] /\ NW[d2^, 10] /\ [d1 = 5]@t1 /\ memlen == 1 |}
  TxBegin^RX {};
  {| ! [f^ ~ 1]@t2 /\ ! [d2^ ~ 10]@t2 /\ [d1 = 5]@t1 /\ ! Rel@t1
     /\ status@t1 == ready /\ ! Acq@t1 /\ memlen == 1 |}
  TxWrite(d2, 10);
  {| (d2, 10) in WS@t1 /\ ! [f^ ~ 1]@t2 /\ ! [d2^ ~ 10]@t2 /\ [d1 = 5]@t1
     /\ ! Rel@t1 /\ status@t1 == ready /\ ! Acq@t1 /\ memlen == 1 |}
  TxWrite(f, 1);
  {| (f, 1) in WS@t1 /\ (d2, 10) in WS@t1 /\ ! [f^ ~ 1]@t2 /\ ! [d2^ ~ 10]@t2
     /\ [d1 = 5]@t1 /\ ! Rel@t1 /\ status@t1 == ready /\ ! Acq@t1 /\ memlen == 1 |}
  TxEnd;
  {| true |}
}
thread t2 {
  {| M[f^ = 0]@0 /\ M[d2^ = 0]@0
     /\ (status@t1 == committed => M[f^ = 1]@1 /\ M[d2^ = 10]@1)
     /\ (status@t1 == committed => ([f^ ~ 0]@t2 \/ [f^ ~ 1]@t2))
     /\ (status@t1 == committed => ([d2^ ~ 0]@t2 \/ [d2^ ~ 10]@t2))
     /\ obs(d1)@t2 subset {0, 5}
     /\ (! status@t1 == committed => [f^ = 0]@t2 /\ [d2^ = 0]@t2)
     /\ WS@t2 = {}
     /\ forall i in M ( i != 0 => ! M[d2^ = 0]@i )
     /\ forall i in M ( i != 1 => ! M[f^ = 1]@i ) |}
  TxBegin^RX {r1, r2};
  {| M[f^ = 0]@0 /\ M[d2^ = 0]@0
     /\ (status@t1 == committed => M[f^ = 1]@1 /\ M[d2^ = 10]@1)
     /\ (status@t1 == committed => ([f^ ~ 0]@t2 \/ [f^ ~ 1]@t2))
     /\ (status@t1 == committed => ([d2^ ~ 0]@t2 \/ [d2^ ~ 10]@t2))
     /\ obs(d1)@t2 subset {0, 5}
     /\ (! status@t1 == committed => [f^ = 0]@t2 /\ [d2^ = 0]@t2)
     /\ WS@t2 = {} /\ ! Acq@t2
     /\ forall i in M ( i != 0 => ! M[d2^ = 0]@i )
     /\ forall i in M ( i != 1 => ! M[f^ = 1]@i ) |}
  TxRead(f, r1);
  {| M[f^ = 0]@0 /\ M[d2^ = 0]@0
     /\ (r1 == 1 => status@t1 == committed)
     /\ (r1 == 1 => (f, 1) in RS@t2)
     /\ (r1 == 1 => M[f^ = 1]@1 /\ M[d2^ = 10]@1)
     /\ obs(d1)@t2 subset {0, 5}
     /\ WS@t2 = {} /\ ! Acq@t2
     /\ forall i in M ( i != 0 => ! M[d2^ = 0]@i )
     /\ forall i in M ( i != 1 => ! M[f^ = 1]@i ) |}
  if r1 == 1 {
    {| M[f^ = 0]@0 /\ M[d2^ = 0]@0 /\ M[f^ = 1]@1 /\ M[d2^ = 10]@1
       /\ r1 == 1 /\ (f, 1) in RS@t2
       /\ obs(d1)@t2 subset {0, 5}
       /\ WS@t2 = {} /\ ! Acq@t2 /\ status@t1 == committed
       /\ forall i in M ( i != 0 => ! M[d2^ = 0]@i )
       /\ forall i in M ( i != 1 => ! M[f^ = 1]@i ) |}
    TxRead(d2, r2);
  }
  {| (r1 == 1 => r2 == 10) /\ obs(d1)@t2 subset {0, 5} /\ WS@t2 = {} /\ ! Acq@t2 |}
  TxEnd;
  {| obs(d1)@t2 subset {0, 5}
     /\ (status@t2 == committed /\ r1 == 1 => r2 == 10) |}
  r3 <- d1;
  {| status@t2 == committed /\ r1 == 1 => r2 == 10 /\ r3 in {0, 5} |}
}
final {| status@t2 == committed /\ r1 == 1 => r2 == 10 /\ r3 in {0, 5} |}
forall r1 == 1 => r2 == 10 /\ (r3 == 0 \/ r3 == 5)
exists r3 == 0
)";

const char* kFigRelaxedWeak = R"(
program "tx-relaxed"
locations d1
txlocations d2 f
thread t1 {
  d1 := 5;
  TxBegin^RX {};
  TxWrite(d2, 10);
  TxWrite(f, 1);
  TxEnd;
}
thread t2 {
  TxBegin^RX {r1, r2};
  TxRead(f, r1);
  if r1 == 1 {
    TxRead(d2, r2);
  }
  TxEnd;
  r3 <- d1;
  {| status@t2 == committed /\ r1 == 1 => r2 == 10 /\ r3 == 5 |}
}
final {| status@t2 == committed /\ r1 == 1 => r2 == 10 /\ r3 == 5 |}
forall r1 == 1 => r2 == 10 /\ (r3 == 0 \/ r3 == 5)
exists r3 == 0
)";

const std::map<std::string, const char*>& program_sources() {
  static const std::map<std::string, const char*> m = {
      {"mp-relaxed", kMpRelaxed},
      {"mp-ra", kMpRa},
      {"tx-mp", kTxMp},
      {"tx-relaxed", kTxRelaxed},
      {"tx-chain", kTxChain},
      {"two-writer-snapshot", kTwoWriterSnapshot},
      {"causal-publish", kCausalPublish},
  };
  return m;
}

const std::map<std::string, const char*>& fixture_sources() {
  static const std::map<std::string, const char*> m = {
      {"fig-mp", kFigMp},           {"fig-mp-weak", kFigMpWeak},
      {"fig-chain", kFigChain},     {"fig-chain-weak", kFigChainWeak},
      {"fig-relaxed", kFigRelaxed}, {"fig-relaxed-weak", kFigRelaxedWeak},
  };
  return m;
}

}  // namespace

std::vector<std::string> builtin_ids() {
  return {"mp-relaxed", "mp-ra", "tx-mp", "tx-relaxed", "tx-chain"};
}

std::vector<std::string> mutation_harness_ids() {
  return {"two-writer-snapshot", "causal-publish"};
}

const std::string& builtin_source(const std::string& id) {
  static std::map<std::string, std::string> cache;
  auto it = program_sources().find(id);
  if (it == program_sources().end()) throw ApiError("unknown builtin program '" + id + "'");
  return cache.emplace(id, it->second).first->second;
}

LitmusProgram builtin_program(const std::string& id) {
  return parse_litmus(builtin_source(id));
}

std::vector<LitmusProgram> builtin_corpus() {
  std::vector<LitmusProgram> out;
  for (const std::string& id : builtin_ids()) out.push_back(builtin_program(id));
  return out;
}

const std::string& outline_fixture(const std::string& name) {
  static std::map<std::string, std::string> cache;
  auto it = fixture_sources().find(name);
  if (it == fixture_sources().end()) throw ApiError("unknown outline fixture '" + name + "'");
  return cache.emplace(name, it->second).first->second;
}

std::vector<std::string> outline_fixture_ids() {
  return {"fig-mp", "fig-mp-weak", "fig-chain", "fig-chain-weak", "fig-relaxed",
          "fig-relaxed-weak"};
}

}  // namespace ratm
