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

#ifndef RATM_MEMORY_HPP_
#define RATM_MEMORY_HPP_

#include <string>
#include <vector>

#include "ratm/basics.hpp"

namespace ratm {

/**
 * A timestamped write event. Timestamps are represented by position in the
 * per-location modification order rather than by rationals: only the order
 * is ever consumed, and positions keep the nondeterminism finite.
 */
struct Write {
  WriteId id = -1;
  LocId loc = -1;
  Val val = 0;
  bool released = false;
};

/// Total map from location to a write of that location.
using View = std::vector<WriteId>;  // indexed by LocId

/**
 * The view-based relaxed-memory state: a set of timestamped writes with a
 * per-location modification order, per-thread views, per-write modification
 * views, and the covered set that protects read-modify-write atomicity.
 *
 * States are immutable values; every transition returns a fresh state.
 */
class ClientMemoryState {
 public:
  ClientMemoryState() = default;

  /// Initial state: one write per location with value 0, no release
  /// annotation, nothing covered, every view at the initial writes.
  ClientMemoryState(int num_locations, int num_threads);

  int num_locations() const { return static_cast<int>(mo_.size()); }
  int num_threads() const { return static_cast<int>(tview_.size()); }

  const Write& write(WriteId w) const { return writes_[w]; }
  const std::vector<Write>& writes() const { return writes_; }
  const std::vector<WriteId>& mo(LocId x) const { return mo_[x]; }
  const View& tview(ThreadId t) const { return tview_[t]; }
  const View& mview(WriteId w) const { return mview_[w]; }
  bool covered(WriteId w) const { return covered_[w]; }

  /// Id of the RMW-created write that covered w, or -1.
  WriteId covered_by(WriteId w) const { return covered_by_[w]; }

  /// Position of w in its location's modification order.
  int mo_pos(WriteId w) const;

  /// Last write of x in modification order.
  WriteId mo_last(LocId x) const { return mo_[x].back(); }
  Val last_val(LocId x) const { return writes_[mo_last(x)].val; }

  /// Timestamp order on same-location writes. Rejects cross-location pairs.
  bool tst_leq(WriteId w1, WriteId w2) const;

  /// Writes of x whose timestamp is no smaller than t's view of x.
  std::vector<WriteId> observable_writes(ThreadId t, LocId x) const;
  std::vector<Val> observable_values(ThreadId t, LocId x) const;

  /// Per location the later write in modification order; v1 wins ties.
  View view_merge(const View& v1, const View& v2) const;

  /// Read of w by t. Acquiring reads of released writes merge the write's
  /// modification view into the thread view; otherwise the view just moves
  /// to w. Pre: w observable for t at its location.
  ClientMemoryState mem_read(ThreadId t, WriteId w, bool acquiring, Val* out_val) const;

  /// Replace t's whole view. Pre: per location the new view is no earlier
  /// than the current one (views only ever advance).
  ClientMemoryState with_tview(ThreadId t, const View& v) const;

  /// Positions p such that inserting the new write after mo(x)[p] is legal
  /// for thread t: p at or past t's view and mo(x)[p] uncovered. Inserting
  /// right after a covered write would break RMW adjacency.
  std::vector<int> legal_write_slots(ThreadId t, LocId x) const;

  /// Write v to x after slot position slot_after (a value returned by
  /// legal_write_slots). Returns the new state; new write id in *out_w.
  ClientMemoryState mem_write(ThreadId t, LocId x, Val v, int slot_after, bool releasing,
                              WriteId* out_w) const;

  /// Successful RMW reading pred: the new write lands immediately after
  /// pred, pred becomes covered. Pre: pred observable, uncovered, and
  /// val(pred) == expected (callers model CAS failure as a plain read).
  ClientMemoryState mem_rmw(ThreadId t, LocId x, Val expected, Val newval, WriteId pred,
                            bool releasing, bool acquiring, WriteId* out_w) const;

  /// Debug/trace dump (JSON text): per-location modification orders,
  /// per-thread views and the covered set.
  std::string dump_json(const std::vector<std::string>& loc_names,
                        const std::vector<std::string>& thread_names) const;

  void canonical_key(KeySink& sink) const;

  /// Cross-state write identity: (loc, val, rank among equal (loc,val)
  /// writes up to this one in modification order).
  struct WriteTag {
    LocId loc;
    Val val;
    int rank;
    auto operator<=>(const WriteTag&) const = default;
  };
  WriteTag write_tag(WriteId w) const;

  // Invariant checks used by the exploration harness.
  bool check_mview_self_consistency() const;
  bool check_covered_adjacency() const;
  static bool check_view_monotonic(const ClientMemoryState& before, const ClientMemoryState& after);

 private:
  ClientMemoryState with_new_write(ThreadId t, LocId x, Val v, int insert_pos, bool releasing,
                                   WriteId* out_w) const;

  std::vector<Write> writes_;
  std::vector<std::vector<WriteId>> mo_;  // per location
  std::vector<View> tview_;               // per thread
  std::vector<View> mview_;               // per write
  std::vector<bool> covered_;
  std::vector<WriteId> covered_by_;
};

}  // namespace ratm

#endif  // RATM_MEMORY_HPP_
