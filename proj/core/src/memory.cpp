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

#include "ratm/memory.hpp"

#include <algorithm>
#include <sstream>

namespace ratm {

ClientMemoryState::ClientMemoryState(int num_locations, int num_threads) {
  mo_.resize(num_locations);
  View init_view(num_locations);
  for (LocId x = 0; x < num_locations; ++x) {
    Write w;
    w.id = static_cast<WriteId>(writes_.size());
    w.loc = x;
    w.val = 0;
    w.released = false;
    writes_.push_back(w);
    mo_[x].push_back(w.id);
    covered_.push_back(false);
    covered_by_.push_back(-1);
    init_view[x] = w.id;
  }
  tview_.assign(num_threads, init_view);
  mview_.assign(writes_.size(), init_view);
}

int ClientMemoryState::mo_pos(WriteId w) const {
  const auto& seq = mo_[writes_[w].loc];
  for (int i = 0; i < static_cast<int>(seq.size()); ++i)
    if (seq[i] == w) return i;
  throw ApiError("write missing from its modification order");
}

bool ClientMemoryState::tst_leq(WriteId w1, WriteId w2) const {
  if (writes_[w1].loc != writes_[w2].loc)
    throw ApiError("tst_leq compares writes of different locations");
  return mo_pos(w1) <= mo_pos(w2);
}

std::vector<WriteId> ClientMemoryState::observable_writes(ThreadId t, LocId x) const {
  std::vector<WriteId> out;
  const auto& seq = mo_[x];
  int from = mo_pos(tview_[t][x]);
  for (int i = from; i < static_cast<int>(seq.size()); ++i) out.push_back(seq[i]);
  return out;
}

std::vector<Val> ClientMemoryState::observable_values(ThreadId t, LocId x) const {
  std::vector<Val> out;
  for (WriteId w : observable_writes(t, x)) {
    Val v = writes_[w].val;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

View ClientMemoryState::view_merge(const View& v1, const View& v2) const {
  View out(v1.size());
  for (LocId x = 0; x < static_cast<int>(v1.size()); ++x)
    out[x] = tst_leq(v2[x], v1[x]) ? v1[x] : v2[x];
  return out;
}

ClientMemoryState ClientMemoryState::mem_read(ThreadId t, WriteId w, bool acquiring,
                                              Val* out_val) const {
  LocId x = writes_[w].loc;
  if (!tst_leq(tview_[t][x], w)) throw ApiError("mem_read of an unobservable write");
  ClientMemoryState next = *this;
  if (acquiring && writes_[w].released) {
    next.tview_[t] = view_merge(tview_[t], mview_[w]);
  } else {
    next.tview_[t][x] = w;
  }
  if (out_val) *out_val = writes_[w].val;
  return next;
}

ClientMemoryState ClientMemoryState::with_tview(ThreadId t, const View& v) const {
  for (LocId x = 0; x < num_locations(); ++x)
    if (!tst_leq(tview_[t][x], v[x])) throw ApiError("with_tview would move a view backwards");
  ClientMemoryState next = *this;
  next.tview_[t] = v;
  return next;
}

std::vector<int> ClientMemoryState::legal_write_slots(ThreadId t, LocId x) const {
  std::vector<int> out;
  const auto& seq = mo_[x];
  int from = mo_pos(tview_[t][x]);
  for (int p = from; p < static_cast<int>(seq.size()); ++p)
    if (!covered_[seq[p]]) out.push_back(p);
  return out;
}

ClientMemoryState ClientMemoryState::with_new_write(ThreadId t, LocId x, Val v, int insert_pos,
                                                    bool releasing, WriteId* out_w) const {
  ClientMemoryState next = *this;
  Write w;
  w.id = static_cast<WriteId>(next.writes_.size());
  w.loc = x;
  w.val = v;
  w.released = releasing;
  next.writes_.push_back(w);
  next.covered_.push_back(false);
  next.covered_by_.push_back(-1);
  auto& seq = next.mo_[x];
  seq.insert(seq.begin() + insert_pos, w.id);
  next.tview_[t][x] = w.id;
  next.mview_.push_back(next.tview_[t]);
  if (out_w) *out_w = w.id;
  return next;
}

ClientMemoryState ClientMemoryState::mem_write(ThreadId t, LocId x, Val v, int slot_after,
                                               bool releasing, WriteId* out_w) const {
  const auto& seq = mo_[x];
  if (slot_after < mo_pos(tview_[t][x]) || slot_after >= static_cast<int>(seq.size()))
    throw ApiError("mem_write slot before the thread view");
  if (covered_[seq[slot_after]]) throw ApiError("mem_write immediately after a covered write");
  return with_new_write(t, x, v, slot_after + 1, releasing, out_w);
}

ClientMemoryState ClientMemoryState::mem_rmw(ThreadId t, LocId x, Val expected, Val newval,
                                             WriteId pred, bool releasing, bool acquiring,
                                             WriteId* out_w) const {
  if (writes_[pred].loc != x) throw ApiError("mem_rmw pred on a different location");
  if (covered_[pred]) throw ApiError("mem_rmw on a covered write");
  if (!tst_leq(tview_[t][x], pred)) throw ApiError("mem_rmw of an unobservable write");
  if (writes_[pred].val != expected) throw ApiError("mem_rmw with mismatched expected value");

  WriteId fresh = -1;
  ClientMemoryState next = with_new_write(t, x, newval, mo_pos(pred) + 1, releasing, &fresh);
  next.covered_[pred] = true;
  next.covered_by_[pred] = fresh;
  if (acquiring && writes_[pred].released) {
    next.tview_[t] = next.view_merge(next.tview_[t], next.mview_[pred]);
    next.mview_[fresh] = next.tview_[t];
  }
  if (out_w) *out_w = fresh;
  return next;
}

std::string ClientMemoryState::dump_json(const std::vector<std::string>& loc_names,
                                         const std::vector<std::string>& thread_names) const {
  std::ostringstream os;
  os << "{\"mo\":{";
  for (LocId x = 0; x < num_locations(); ++x) {
    if (x) os << ",";
    os << "\"" << loc_names[x] << "\":[";
    for (size_t i = 0; i < mo_[x].size(); ++i) {
      const Write& w = writes_[mo_[x][i]];
      if (i) os << ",";
      os << "{\"val\":" << w.val << ",\"rel\":" << (w.released ? "true" : "false")
         << ",\"covered\":" << (covered_[w.id] ? "true" : "false") << "}";
    }
    os << "]";
  }
  os << "},\"tview\":{";
  for (ThreadId t = 0; t < num_threads(); ++t) {
    if (t) os << ",";
    os << "\"" << thread_names[t] << "\":{";
    for (LocId x = 0; x < num_locations(); ++x) {
      if (x) os << ",";
      os << "\"" << loc_names[x] << "\":" << mo_pos(tview_[t][x]);
    }
    os << "}";
  }
  os << "}}";
  return os.str();
}

void ClientMemoryState::canonical_key(KeySink& sink) const {
  sink.put_i32(num_locations());
  for (LocId x = 0; x < num_locations(); ++x) {
    sink.put_i32(static_cast<int>(mo_[x].size()));
    for (WriteId w : mo_[x]) {
      sink.put_i64(writes_[w].val);
      sink.put_bool(writes_[w].released);
      sink.put_bool(covered_[w]);
      // The write's modification view, as per-location positions.
      for (LocId y = 0; y < num_locations(); ++y) sink.put_i32(mo_pos(mview_[w][y]));
    }
  }
  for (ThreadId t = 0; t < num_threads(); ++t)
    for (LocId x = 0; x < num_locations(); ++x) sink.put_i32(mo_pos(tview_[t][x]));
}

ClientMemoryState::WriteTag ClientMemoryState::write_tag(WriteId w) const {
  const Write& wr = writes_[w];
  int rank = 0;
  for (WriteId o : mo_[wr.loc]) {
    if (o == w) break;
    if (writes_[o].val == wr.val) ++rank;
  }
  return WriteTag{wr.loc, wr.val, rank};
}

bool ClientMemoryState::check_mview_self_consistency() const {
  for (const Write& w : writes_)
    if (mview_[w.id][w.loc] != w.id && mo_pos(w.id) != 0) return false;
  return true;
}

bool ClientMemoryState::check_covered_adjacency() const {
  for (LocId x = 0; x < num_locations(); ++x) {
    const auto& seq = mo_[x];
    for (int i = 0; i < static_cast<int>(seq.size()); ++i) {
      if (!covered_[seq[i]]) continue;
      if (i + 1 >= static_cast<int>(seq.size())) return false;
      if (covered_by_[seq[i]] != seq[i + 1]) return false;
    }
  }
  return true;
}

bool ClientMemoryState::check_view_monotonic(const ClientMemoryState& before,
                                             const ClientMemoryState& after) {
  // Write ids are stable across a transition, so positions are comparable.
  if (after.num_threads() != before.num_threads()) return false;
  for (ThreadId t = 0; t < before.num_threads(); ++t) {
    for (LocId x = 0; x < before.num_locations(); ++x) {
      if (after.mo_pos(after.tview_[t][x]) < after.mo_pos(before.tview_[t][x])) return false;
    }
  }
  return true;
}

}  // namespace ratm
