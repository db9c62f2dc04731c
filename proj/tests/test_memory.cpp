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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ratm/memory.hpp"

using namespace ratm;

namespace {

constexpr LocId kD = 0;
constexpr LocId kF = 1;
constexpr ThreadId kT1 = 0;
constexpr ThreadId kT2 = 1;

// The message-passing scenario: t1 writes d := 5 then releases f := 1.
struct MpStates {
  ClientMemoryState s0{2, 2};
  ClientMemoryState s1, s2;
  WriteId d5 = -1, f1 = -1;

  MpStates() {
    s1 = s0.mem_write(kT1, kD, 5, 0, false, &d5);
    s2 = s1.mem_write(kT1, kF, 1, 0, true, &f1);
  }
};

}  // namespace

TEST_CASE("timestamp order on a location") {
  MpStates mp;
  WriteId d0 = mp.s1.mo(kD)[0];
  CHECK(mp.s1.tst_leq(d0, d0));
  CHECK(mp.s1.tst_leq(d0, mp.d5));
  CHECK_FALSE(mp.s1.tst_leq(mp.d5, d0));
  CHECK_THROWS_AS((void)mp.s2.tst_leq(mp.d5, mp.f1), ApiError);
}

TEST_CASE("observable writes track the thread view") {
  MpStates mp;
  CHECK(mp.s0.observable_writes(kT2, kD).size() == 1);
  CHECK(mp.s2.observable_writes(kT2, kD).size() == 2);
  CHECK(mp.s2.observable_values(kT2, kD) == std::vector<Val>{0, 5});
  CHECK(mp.s0.observable_values(kT2, kD) == std::vector<Val>{0});

  // After the acquiring read of the released flag the stale value is gone.
  Val v = 0;
  ClientMemoryState s3 = mp.s2.mem_read(kT2, mp.f1, true, &v);
  CHECK(v == 1);
  CHECK(s3.observable_values(kT2, kD) == std::vector<Val>{5});
}

TEST_CASE("view merge picks the later write per location") {
  MpStates mp;
  const View& tv2 = mp.s2.tview(kT2);
  CHECK(mp.s2.view_merge(tv2, tv2) == tv2);

  View merged = mp.s2.view_merge(tv2, mp.s2.mview(mp.f1));
  CHECK(merged[kD] == mp.d5);
  CHECK(merged[kF] == mp.f1);

  // Merging with the initial view is the identity.
  View init = mp.s0.tview(kT2);
  CHECK(mp.s2.view_merge(mp.s2.tview(kT1), init) == mp.s2.tview(kT1));
}

TEST_CASE("relaxed reads do not transfer views") {
  MpStates mp;
  Val v = 0;
  ClientMemoryState s3 = mp.s2.mem_read(kT2, mp.f1, false, &v);
  CHECK(v == 1);
  CHECK(s3.observable_values(kT2, kD) == std::vector<Val>{0, 5});

  // Reading the write the view already points at changes nothing.
  WriteId cur = mp.s2.tview(kT2)[kD];
  ClientMemoryState s4 = mp.s2.mem_read(kT2, cur, false, nullptr);
  CHECK(s4.tview(kT2) == mp.s2.tview(kT2));
}

TEST_CASE("writes record the writer's view as the modification view") {
  MpStates mp;
  CHECK(mp.s2.mview(mp.f1)[kD] == mp.d5);
  CHECK(mp.s2.write(mp.f1).released);
  CHECK_FALSE(mp.s1.write(mp.d5).released);
  CHECK(mp.s1.mo(kD).size() == 2);
  CHECK(mp.s1.mo(kD)[0] != mp.d5);
}

TEST_CASE("rmw covers its predecessor and stays adjacent") {
  ClientMemoryState s(1, 2);
  WriteId init = s.mo(0)[0];
  WriteId fresh = -1;
  ClientMemoryState s1 = s.mem_rmw(kT1, 0, 0, 1, init, true, true, &fresh);
  CHECK(s1.covered(init));
  CHECK(s1.covered_by(init) == fresh);
  CHECK(s1.mo(0).size() == 2);
  CHECK(s1.mo(0)[1] == fresh);
  CHECK(s1.write(fresh).released);
  CHECK(s1.check_covered_adjacency());

  // The covered write can no longer be read-modified or used as a store slot.
  CHECK_THROWS_AS((void)s1.mem_rmw(kT2, 0, 0, 2, init, true, true, nullptr), ApiError);
  CHECK(s1.legal_write_slots(kT2, 0) == std::vector<int>{1});

  // A second update must consume the new write instead.
  ClientMemoryState s2 = s1.mem_rmw(kT2, 0, 1, 2, fresh, true, true, nullptr);
  CHECK(s2.mo(0).size() == 3);
  CHECK(s2.check_covered_adjacency());
}

TEST_CASE("mem_rmw rejects a value mismatch") {
  ClientMemoryState s(1, 1);
  CHECK_THROWS_AS((void)s.mem_rmw(0, 0, 7, 1, s.mo(0)[0], false, false, nullptr), ApiError);
}

TEST_CASE("random legal histories preserve the memory invariants") {
  std::mt19937 rng(7);
  for (int round = 0; round < 40; ++round) {
    ClientMemoryState s(2, 3);
    for (int step = 0; step < 25; ++step) {
      ThreadId t = static_cast<ThreadId>(rng() % 3);
      LocId x = static_cast<LocId>(rng() % 2);
      ClientMemoryState next = s;
      switch (rng() % 3) {
        case 0: {
          auto ws = s.observable_writes(t, x);
          next = s.mem_read(t, ws[rng() % ws.size()], rng() % 2 == 0, nullptr);
          break;
        }
        case 1: {
          auto slots = s.legal_write_slots(t, x);
          if (slots.empty()) continue;
          next = s.mem_write(t, x, static_cast<Val>(rng() % 4), slots[rng() % slots.size()],
                             rng() % 2 == 0, nullptr);
          break;
        }
        case 2: {
          std::vector<WriteId> preds;
          for (WriteId w : s.observable_writes(t, x))
            if (!s.covered(w)) preds.push_back(w);
          if (preds.empty()) continue;
          WriteId pred = preds[rng() % preds.size()];
          next = s.mem_rmw(t, x, s.write(pred).val, static_cast<Val>(rng() % 4), pred,
                           rng() % 2 == 0, rng() % 2 == 0, nullptr);
          break;
        }
      }
      CHECK(ClientMemoryState::check_view_monotonic(s, next));
      CHECK(next.check_mview_self_consistency());
      CHECK(next.check_covered_adjacency());
      s = std::move(next);
    }
  }
}

TEST_CASE("debug dump names locations and threads") {
  MpStates mp;
  std::string dump = mp.s2.dump_json({"d", "f"}, {"t1", "t2"});
  CHECK(dump.find("\"mo\"") != std::string::npos);
  CHECK(dump.find("\"tview\"") != std::string::npos);
}
