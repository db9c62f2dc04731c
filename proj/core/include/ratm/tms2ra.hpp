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

#ifndef RATM_TMS2RA_HPP_
#define RATM_TMS2RA_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ratm/basics.hpp"
#include "ratm/memory.hpp"

namespace ratm {

/// Partial map location -> value kept as a small sorted vector.
struct LocValMap {
  std::vector<std::pair<LocId, Val>> entries;

  bool empty() const { return entries.empty(); }
  std::optional<Val> get(LocId x) const {
    for (const auto& [l, v] : entries)
      if (l == x) return v;
    return std::nullopt;
  }
  void put(LocId x, Val v) {
    for (auto& [l, old] : entries)
      if (l == x) {
        old = v;
        return;
      }
    entries.emplace_back(x, v);
    std::sort(entries.begin(), entries.end());
  }
};

/// Per-transaction local state of the specification automaton.
struct TxnLocal {
  TxnStatus status = TxnStatus::NotStarted;
  ThreadId thread = -1;
  LocValMap rd_set;
  LocValMap wr_set;
  int begin_idx = 0;
  std::vector<int> seen_idxs;  // sorted; only releasing memory indices
  SyncFlag synctype = SyncFlag::RX;
  std::vector<RegId> regs;
};

class TMSpecState;

struct TMBeginResult;
struct TMEndResult;

/**
 * The transactional-memory specification state: the memory-snapshot
 * sequence M with its per-snapshot synchronisation types S and modification
 * views V, per-transaction locals, and per-thread transaction bindings.
 *
 * Memories are total over the program's transactional locations (default 0);
 * views V range over the client memory state passed alongside.
 */
class TMSpecState {
 public:
  TMSpecState() = default;
  TMSpecState(int num_txlocations, int num_threads, const ClientMemoryState& client);

  int num_txlocations() const { return num_txlocs_; }
  int mem_len() const { return static_cast<int>(mem_.size()); }
  const std::vector<Val>& memory(int i) const { return mem_[i]; }
  SyncFlag sync_type(int i) const { return sync_[i]; }
  const View& mod_view(int i) const { return views_[i]; }
  int txview(ThreadId t) const { return txview_[t]; }

  const TxnLocal& txn(TxnId id) const { return txns_[id]; }
  int num_txns() const { return static_cast<int>(txns_.size()); }
  std::optional<TxnId> live_txn(ThreadId t) const { return txn_of_[t]; }

  /// Status of the most recent transaction begun by t (NotStarted if none).
  TxnStatus last_status(ThreadId t) const;

  /// Memory indices visible to thread t: txview_t .. |M|-1.
  std::vector<int> visible_memories(ThreadId t) const;

  /// Pointwise modification-order maximum of {V_i | i in idxs}. Rejects
  /// empty index sets; callers guard on seenIdxs being nonempty.
  View view_of_indices(const std::vector<int>& idxs, const ClientMemoryState& client) const;

  // Transitions. Each returns nullopt when disabled. States are values.

  std::optional<TMBeginResult> tx_begin(ThreadId t, SyncFlag flag, int mem_idx,
                                        std::vector<RegId> reg_set) const;

  std::optional<TMSpecState> tx_write(ThreadId t, LocId x, Val v) const;

  /// Internal read: x in the write set; the index argument is ignored.
  bool read_is_internal(ThreadId t, LocId x) const;
  std::optional<std::pair<TMSpecState, Val>> tx_read_internal(ThreadId t, LocId x) const;

  /// External read validated against memory index i.
  std::optional<std::pair<TMSpecState, Val>> tx_read_external(ThreadId t, LocId x, int i) const;

  /// Valid external-read indices for (t, x); empty when only Abort remains.
  std::vector<int> valid_read_indices(ThreadId t, LocId x) const;

  std::optional<TMEndResult> tx_end_ro(ThreadId t, const ClientMemoryState& client) const;
  std::optional<TMEndResult> tx_end_wr(ThreadId t, const ClientMemoryState& client) const;

  /// Abort: poisons the transaction's registers in the register file.
  std::optional<TMSpecState> tx_abort(ThreadId t, std::vector<RegVal>& regs) const;

  bool check_lengths() const {
    return mem_.size() == sync_.size() && mem_.size() == views_.size();
  }

  void canonical_key(KeySink& sink, const ClientMemoryState& client) const;

  std::string dump_json(const std::vector<std::string>& txloc_names) const;

 private:
  TxnLocal& live(TMSpecState& s, ThreadId t) const { return s.txns_[*s.txn_of_[t]]; }

  int num_txlocs_ = 0;
  std::vector<std::vector<Val>> mem_;          // M, each total over txlocations
  std::vector<SyncFlag> sync_;                 // S
  std::vector<View> views_;                    // V, over client locations
  std::vector<TxnLocal> txns_;                 // all transactions ever begun
  std::vector<std::optional<TxnId>> txn_of_;   // per thread
  std::vector<int> txview_;                    // per thread
  std::vector<TxnId> last_txn_;                // per thread, -1 if none
};

struct TMBeginResult {
  TMSpecState state;
  TxnId txn;
};

struct TMEndResult {
  TMSpecState state;
  ClientMemoryState client;
};

}  // namespace ratm

#endif  // RATM_TMS2RA_HPP_
