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

#include "ratm/tms2ra.hpp"

#include <algorithm>
#include <sstream>

namespace ratm {

TMSpecState::TMSpecState(int num_txlocations, int num_threads, const ClientMemoryState& client) {
  num_txlocs_ = num_txlocations;
  mem_.push_back(std::vector<Val>(num_txlocations, 0));
  sync_.push_back(SyncFlag::RX);
  View init(client.num_locations());
  for (LocId x = 0; x < client.num_locations(); ++x) init[x] = client.mo(x)[0];
  views_.push_back(init);
  txn_of_.assign(num_threads, std::nullopt);
  txview_.assign(num_threads, 0);
  last_txn_.assign(num_threads, -1);
}

TxnStatus TMSpecState::last_status(ThreadId t) const {
  if (last_txn_[t] < 0) return TxnStatus::NotStarted;
  return txns_[last_txn_[t]].status;
}

std::vector<int> TMSpecState::visible_memories(ThreadId t) const {
  std::vector<int> out;
  for (int n = txview_[t]; n < mem_len(); ++n) out.push_back(n);
  return out;
}

View TMSpecState::view_of_indices(const std::vector<int>& idxs,
                                  const ClientMemoryState& client) const {
  if (idxs.empty()) throw ApiError("view_of_indices over an empty index set");
  View out = views_[idxs[0]];
  for (size_t k = 1; k < idxs.size(); ++k) out = client.view_merge(views_[idxs[k]], out);
  return out;
}

std::optional<TMBeginResult> TMSpecState::tx_begin(ThreadId t, SyncFlag flag,
                                                              int mem_idx,
                                                              std::vector<RegId> reg_set) const {
  if (txn_of_[t].has_value()) return std::nullopt;
  if (mem_idx < txview_[t] || mem_idx >= mem_len()) return std::nullopt;
  TMSpecState next = *this;
  TxnLocal txn;
  txn.status = TxnStatus::Ready;
  txn.thread = t;
  txn.begin_idx = mem_idx;
  txn.synctype = flag;
  txn.regs = std::move(reg_set);
  std::sort(txn.regs.begin(), txn.regs.end());
  TxnId id = static_cast<TxnId>(next.txns_.size());
  next.txns_.push_back(std::move(txn));
  next.txn_of_[t] = id;
  next.last_txn_[t] = id;
  return TMBeginResult{std::move(next), id};
}

std::optional<TMSpecState> TMSpecState::tx_write(ThreadId t, LocId x, Val v) const {
  if (!txn_of_[t] || txns_[*txn_of_[t]].status != TxnStatus::Ready) return std::nullopt;
  TMSpecState next = *this;
  live(next, t).wr_set.put(x, v);
  return next;
}

bool TMSpecState::read_is_internal(ThreadId t, LocId x) const {
  return txn_of_[t] && txns_[*txn_of_[t]].wr_set.get(x).has_value();
}

std::optional<std::pair<TMSpecState, Val>> TMSpecState::tx_read_internal(ThreadId t,
                                                                         LocId x) const {
  if (!txn_of_[t] || txns_[*txn_of_[t]].status != TxnStatus::Ready) return std::nullopt;
  auto v = txns_[*txn_of_[t]].wr_set.get(x);
  if (!v) return std::nullopt;
  return std::make_pair(*this, *v);
}

std::optional<std::pair<TMSpecState, Val>> TMSpecState::tx_read_external(ThreadId t, LocId x,
                                                                         int i) const {
  if (!txn_of_[t]) return std::nullopt;
  const TxnLocal& txn = txns_[*txn_of_[t]];
  if (txn.status != TxnStatus::Ready) return std::nullopt;
  if (txn.wr_set.get(x).has_value()) return std::nullopt;
  if (i < txn.begin_idx || i >= mem_len()) return std::nullopt;
  for (const auto& [l, v] : txn.rd_set.entries)
    if (mem_[i][l] != v) return std::nullopt;
  Val v = mem_[i][x];
  TMSpecState next = *this;
  TxnLocal& nt = live(next, t);
  nt.rd_set.put(x, v);
  if (is_releasing(sync_[i]) &&
      std::find(nt.seen_idxs.begin(), nt.seen_idxs.end(), i) == nt.seen_idxs.end()) {
    nt.seen_idxs.push_back(i);
    std::sort(nt.seen_idxs.begin(), nt.seen_idxs.end());
  }
  return std::make_pair(std::move(next), v);
}

std::vector<int> TMSpecState::valid_read_indices(ThreadId t, LocId x) const {
  std::vector<int> out;
  if (!txn_of_[t]) return out;
  const TxnLocal& txn = txns_[*txn_of_[t]];
  if (txn.status != TxnStatus::Ready || txn.wr_set.get(x).has_value()) return out;
  for (int i = txn.begin_idx; i < mem_len(); ++i) {
    bool ok = true;
    for (const auto& [l, v] : txn.rd_set.entries)
      if (mem_[i][l] != v) {
        ok = false;
        break;
      }
    if (ok) out.push_back(i);
  }
  return out;
}

std::optional<TMEndResult> TMSpecState::tx_end_ro(
    ThreadId t, const ClientMemoryState& client) const {
  if (!txn_of_[t]) return std::nullopt;
  const TxnLocal& txn = txns_[*txn_of_[t]];
  if (txn.status != TxnStatus::Ready || !txn.wr_set.empty()) return std::nullopt;
  TMSpecState next = *this;
  ClientMemoryState cnext = client;
  TxnLocal& nt = live(next, t);
  nt.status = TxnStatus::Committed;
  if (is_acquiring(nt.synctype) && !nt.seen_idxs.empty() && !nt.rd_set.empty()) {
    View nv = view_of_indices(nt.seen_idxs, client);
    cnext = client.with_tview(t, client.view_merge(client.tview(t), nv));
  }
  if (!nt.seen_idxs.empty()) next.txview_[t] = nt.seen_idxs.back();
  next.txn_of_[t] = std::nullopt;
  return TMEndResult{std::move(next), std::move(cnext)};
}

std::optional<TMEndResult> TMSpecState::tx_end_wr(
    ThreadId t, const ClientMemoryState& client) const {
  if (!txn_of_[t]) return std::nullopt;
  const TxnLocal& txn = txns_[*txn_of_[t]];
  if (txn.status != TxnStatus::Ready || txn.wr_set.empty()) return std::nullopt;
  const std::vector<Val>& last = mem_.back();
  for (const auto& [l, v] : txn.rd_set.entries)
    if (last[l] != v) return std::nullopt;

  TMSpecState next = *this;
  ClientMemoryState cnext = client;
  TxnLocal& nt = live(next, t);

  std::vector<Val> fresh = last;
  for (const auto& [l, v] : nt.wr_set.entries) fresh[l] = v;
  next.mem_.push_back(std::move(fresh));
  nt.status = TxnStatus::Committed;

  View tv = client.tview(t);
  if (is_acquiring(nt.synctype) && !nt.seen_idxs.empty() && !nt.rd_set.empty()) {
    View nv = view_of_indices(nt.seen_idxs, client);
    tv = client.view_merge(tv, nv);
    cnext = client.with_tview(t, tv);
  }
  next.views_.push_back(tv);
  next.sync_.push_back(nt.synctype);
  if (!nt.seen_idxs.empty()) next.txview_[t] = nt.seen_idxs.back();
  next.txn_of_[t] = std::nullopt;
  return TMEndResult{std::move(next), std::move(cnext)};
}

std::optional<TMSpecState> TMSpecState::tx_abort(ThreadId t, std::vector<RegVal>& regs) const {
  if (!txn_of_[t] || txns_[*txn_of_[t]].status != TxnStatus::Ready) return std::nullopt;
  TMSpecState next = *this;
  TxnLocal& nt = live(next, t);
  nt.status = TxnStatus::Aborted;
  for (RegId r : nt.regs) regs[r] = std::nullopt;
  next.txn_of_[t] = std::nullopt;
  return next;
}

void TMSpecState::canonical_key(KeySink& sink, const ClientMemoryState& client) const {
  sink.put_i32(mem_len());
  for (int i = 0; i < mem_len(); ++i) {
    for (Val v : mem_[i]) sink.put_i64(v);
    sink.put_u8(static_cast<uint8_t>(sync_[i]));
    for (LocId x = 0; x < client.num_locations(); ++x) sink.put_i32(client.mo_pos(views_[i][x]));
  }
  for (size_t t = 0; t < txn_of_.size(); ++t) {
    sink.put_i32(txview_[t]);
    sink.put_u8(static_cast<uint8_t>(last_status(static_cast<ThreadId>(t))));
    sink.put_bool(txn_of_[t].has_value());
    if (txn_of_[t]) {
      const TxnLocal& txn = txns_[*txn_of_[t]];
      sink.put_u8(static_cast<uint8_t>(txn.synctype));
      sink.put_i32(txn.begin_idx);
      sink.put_i32(static_cast<int>(txn.rd_set.entries.size()));
      for (const auto& [l, v] : txn.rd_set.entries) {
        sink.put_i32(l);
        sink.put_i64(v);
      }
      sink.put_i32(static_cast<int>(txn.wr_set.entries.size()));
      for (const auto& [l, v] : txn.wr_set.entries) {
        sink.put_i32(l);
        sink.put_i64(v);
      }
      sink.put_i32(static_cast<int>(txn.seen_idxs.size()));
      for (int i : txn.seen_idxs) sink.put_i32(i);
      sink.put_i32(static_cast<int>(txn.regs.size()));
      for (RegId r : txn.regs) sink.put_i32(r);
    }
  }
}

std::string TMSpecState::dump_json(const std::vector<std::string>& txloc_names) const {
  std::ostringstream os;
  os << "{\"M\":[";
  for (int i = 0; i < mem_len(); ++i) {
    if (i) os << ",";
    os << "{";
    for (int l = 0; l < num_txlocs_; ++l) {
      if (l) os << ",";
      os << "\"" << txloc_names[l] << "\":" << mem_[i][l];
    }
    os << "}";
  }
  os << "],\"S\":[";
  for (int i = 0; i < mem_len(); ++i) {
    if (i) os << ",";
    os << "\"" << to_string(sync_[i]) << "\"";
  }
  os << "]}";
  return os.str();
}

}  // namespace ratm
