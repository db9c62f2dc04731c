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

#include "ratm/tms2ra.hpp"

using namespace ratm;

namespace {

constexpr ThreadId kT1 = 0;
constexpr ThreadId kT2 = 1;
constexpr int kF = 0;  // transactional location
constexpr LocId kD = 0;  // client location

/// Client memory with location d; t1 has already written d := 5.
struct Fixture {
  ClientMemoryState beta0{1, 2};
  ClientMemoryState beta;
  TMSpecState gamma;
  WriteId d5 = -1;

  Fixture() {
    beta = beta0.mem_write(kT1, kD, 5, 0, false, &d5);
    gamma = TMSpecState(1, 2, beta);
  }

  /// Runs t1's releasing writer transaction: begin, write f := 1, commit.
  std::pair<TMSpecState, ClientMemoryState> committed_writer() const {
    auto b = gamma.tx_begin(kT1, SyncFlag::R, 0, {});
    REQUIRE(b);
    auto w = b->state.tx_write(kT1, kF, 1);
    REQUIRE(w);
    auto e = w->tx_end_wr(kT1, beta);
    REQUIRE(e);
    return {e->state, e->client};
  }
};

}  // namespace

TEST_CASE("initial specification state") {
  Fixture fx;
  CHECK(fx.gamma.mem_len() == 1);
  CHECK(fx.gamma.check_lengths());
  CHECK(fx.gamma.sync_type(0) == SyncFlag::RX);
  CHECK(fx.gamma.visible_memories(kT2) == std::vector<int>{0});
  CHECK(fx.gamma.memory(0)[kF] == 0);
}

TEST_CASE("visible memories grow with writer commits") {
  Fixture fx;
  auto [g1, b1] = fx.committed_writer();
  CHECK(g1.mem_len() == 2);
  CHECK(g1.check_lengths());
  CHECK(g1.visible_memories(kT2) == std::vector<int>{0, 1});
  CHECK(g1.memory(1)[kF] == 1);
  CHECK(g1.sync_type(1) == SyncFlag::R);
  // The new snapshot's modification view carries the writer's d view.
  CHECK(g1.mod_view(1)[kD] == fx.d5);
  // A collapsed window is a singleton.
  CHECK(g1.visible_memories(kT1).size() == 2);
}

TEST_CASE("view_of_indices is the pointwise maximum") {
  Fixture fx;
  auto [g1, b1] = fx.committed_writer();
  CHECK(g1.view_of_indices({1}, b1) == g1.mod_view(1));
  CHECK(g1.view_of_indices({0, 1}, b1) == g1.mod_view(1));  // initial views are minimal
  CHECK_THROWS_AS((void)g1.view_of_indices({}, b1), ApiError);
}

TEST_CASE("view_of_indices mixes incomparable views pointwise") {
  // Two writers touching disjoint client locations produce snapshots whose
  // views must be maximised location by location.
  ClientMemoryState beta(2, 2);
  WriteId a = -1, b = -1;
  beta = beta.mem_write(0, 0, 1, 0, false, &a);
  beta = beta.mem_write(1, 1, 2, 0, false, &b);
  TMSpecState g(1, 2, beta);
  auto b1 = g.tx_begin(0, SyncFlag::R, 0, {});
  auto w1 = b1->state.tx_write(0, kF, 1);
  auto e1 = w1->tx_end_wr(0, beta);
  auto b2 = e1->state.tx_begin(1, SyncFlag::R, 0, {});
  auto w2 = b2->state.tx_write(1, kF, 2);
  auto e2 = w2->tx_end_wr(1, e1->client);
  const TMSpecState& gf = e2->state;
  View mixed = gf.view_of_indices({1, 2}, e2->client);
  // Brute-force pointwise maximum over the two snapshots' views.
  for (LocId x = 0; x < 2; ++x) {
    WriteId expect = gf.mod_view(1)[x];
    if (e2->client.tst_leq(expect, gf.mod_view(2)[x])) expect = gf.mod_view(2)[x];
    CHECK(mixed[x] == expect);
  }
}

TEST_CASE("tx_begin guards its window and thread") {
  Fixture fx;
  CHECK_FALSE(fx.gamma.tx_begin(kT1, SyncFlag::R, 1, {}).has_value());  // out of range
  auto b = fx.gamma.tx_begin(kT1, SyncFlag::R, 0, {});
  REQUIRE(b);
  CHECK(b->state.txn(b->txn).status == TxnStatus::Ready);
  CHECK(b->state.txn(b->txn).begin_idx == 0);
  CHECK_FALSE(b->state.tx_begin(kT1, SyncFlag::R, 0, {}).has_value());  // busy thread
}

TEST_CASE("tx_write is lazy and overriding") {
  Fixture fx;
  CHECK_FALSE(fx.gamma.tx_write(kT1, kF, 1).has_value());  // no live transaction
  auto b = fx.gamma.tx_begin(kT1, SyncFlag::R, 0, {});
  auto w1 = b->state.tx_write(kT1, kF, 1);
  REQUIRE(w1);
  CHECK(w1->mem_len() == 1);  // lazy write-back
  auto w2 = w1->tx_write(kT1, kF, 7);
  CHECK(*w2->txn(0).wr_set.get(kF) == 7);
}

TEST_CASE("reads are internal when the location was written") {
  Fixture fx;
  auto b = fx.gamma.tx_begin(kT1, SyncFlag::R, 0, {});
  auto w = b->state.tx_write(kT1, kF, 1);
  CHECK(w->read_is_internal(kT1, kF));
  auto r = w->tx_read_internal(kT1, kF);
  REQUIRE(r);
  CHECK(r->second == 1);
  CHECK(r->first.txn(0).rd_set.empty());
}

TEST_CASE("external reads validate and record releasing indices") {
  Fixture fx;
  auto [g1, b1] = fx.committed_writer();
  auto b = g1.tx_begin(kT2, SyncFlag::A, 0, {});
  REQUIRE(b);
  CHECK(b->state.valid_read_indices(kT2, kF) == std::vector<int>{0, 1});
  auto r1 = b->state.tx_read_external(kT2, kF, 1);
  REQUIRE(r1);
  CHECK(r1->second == 1);
  CHECK(r1->first.txn(1).seen_idxs == std::vector<int>{1});
  // Reading the relaxed initial snapshot leaves seenIdxs empty.
  auto r0 = b->state.tx_read_external(kT2, kF, 0);
  REQUIRE(r0);
  CHECK(r0->second == 0);
  CHECK(r0->first.txn(1).seen_idxs.empty());
  // After reading f=1 the stale snapshot is no longer consistent.
  CHECK(r1->first.valid_read_indices(kT2, kF) == std::vector<int>{1});
}

TEST_CASE("read-only commits synchronise acquiring clients") {
  Fixture fx;
  auto [g1, b1] = fx.committed_writer();
  auto b = g1.tx_begin(kT2, SyncFlag::A, 0, {});
  auto r = b->state.tx_read_external(kT2, kF, 1);
  REQUIRE(r);
  auto e = r->first.tx_end_ro(kT2, b1);
  REQUIRE(e);
  CHECK(e->state.txn(1).status == TxnStatus::Committed);
  // The client view of d moved to the writer's last write.
  CHECK(e->client.tview(kT2)[kD] == fx.d5);
  CHECK(e->state.txview(kT2) == 1);
}

TEST_CASE("relaxed read-only commits leave client views alone") {
  Fixture fx;
  auto [g1, b1] = fx.committed_writer();
  auto b = g1.tx_begin(kT2, SyncFlag::RX, 0, {});
  auto r = b->state.tx_read_external(kT2, kF, 1);
  auto e = r->first.tx_end_ro(kT2, b1);
  REQUIRE(e);
  CHECK(e->client.tview(kT2)[kD] == b1.tview(kT2)[kD]);
  CHECK(e->state.txview(kT2) == 1);  // the transaction view still advances
}

TEST_CASE("commits with nothing seen leave the thread window alone") {
  Fixture fx;
  auto b = fx.gamma.tx_begin(kT2, SyncFlag::A, 0, {});
  auto r = b->state.tx_read_external(kT2, kF, 0);
  auto e = r->first.tx_end_ro(kT2, fx.beta);
  REQUIRE(e);
  CHECK(e->state.txview(kT2) == 0);
  CHECK(e->client.tview(kT2) == fx.beta.tview(kT2));
}

TEST_CASE("writer commits demand read sets consistent with the last memory") {
  Fixture fx;
  // Reader-writer t2 reads f=0 at index 0, then t1 commits f := 1.
  auto b2 = fx.gamma.tx_begin(kT2, SyncFlag::RA, 0, {0});
  auto r2 = b2->state.tx_read_external(kT2, kF, 0);
  REQUIRE(r2);
  auto w2 = r2->first.tx_write(kT2, kF, 9);
  REQUIRE(w2);
  auto b1 = w2->tx_begin(kT1, SyncFlag::R, 0, {});
  auto w1 = b1->state.tx_write(kT1, kF, 1);
  auto e1 = w1->tx_end_wr(kT1, fx.beta);
  REQUIRE(e1);
  // t2's read of f=0 is stale against the new last memory: commit disabled.
  CHECK_FALSE(e1->state.tx_end_wr(kT2, e1->client).has_value());
  // Abort remains and poisons the registers.
  std::vector<RegVal> regs{Val{3}};
  auto a = e1->state.tx_abort(kT2, regs);
  REQUIRE(a);
  CHECK_FALSE(regs[0].has_value());
  CHECK(a->txn(0).status == TxnStatus::Aborted);
  CHECK(a->last_status(kT2) == TxnStatus::Aborted);
}

TEST_CASE("aborting with no registers changes nothing and frees the thread") {
  Fixture fx;
  auto b = fx.gamma.tx_begin(kT1, SyncFlag::R, 0, {});
  std::vector<RegVal> regs{Val{3}};
  auto a = b->state.tx_abort(kT1, regs);
  REQUIRE(a);
  CHECK(regs[0] == RegVal{3});
  CHECK(a->tx_begin(kT1, SyncFlag::R, 0, {}).has_value());
}

TEST_CASE("the memory sequence is append-only with immutable snapshots") {
  Fixture fx;
  auto [g1, b1] = fx.committed_writer();
  auto b2 = g1.tx_begin(kT2, SyncFlag::R, 1, {});
  auto w2 = b2->state.tx_write(kT2, kF, 2);
  auto e2 = w2->tx_end_wr(kT2, b1);
  REQUIRE(e2);
  CHECK(e2->state.mem_len() == 3);
  CHECK(e2->state.memory(0)[kF] == 0);
  CHECK(e2->state.memory(1)[kF] == 1);
  CHECK(e2->state.memory(2)[kF] == 2);
  CHECK(e2->state.check_lengths());
}
