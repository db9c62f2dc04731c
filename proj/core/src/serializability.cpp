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

#include "ratm/serializability.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ratm/parser.hpp"

namespace ratm {

namespace {

std::optional<TmEvent> event_of(const Action& a) {
  TmEvent e;
  e.thread = a.thread;
  switch (a.kind) {
    case Action::Kind::TxBegin:
      e.kind = TmEvent::Kind::Begin;
      e.idx = a.aux;
      break;
    case Action::Kind::TxReadInt:
      e.kind = TmEvent::Kind::ReadInt;
      e.tx_loc = a.loc;
      e.val = a.val;
      break;
    case Action::Kind::TxReadExt:
      e.kind = TmEvent::Kind::ReadExt;
      e.tx_loc = a.loc;
      e.val = a.val;
      e.idx = a.aux;
      break;
    case Action::Kind::TxWrite:
      e.kind = TmEvent::Kind::Write;
      e.tx_loc = a.loc;
      e.val = a.val;
      break;
    case Action::Kind::TxCommitRO: e.kind = TmEvent::Kind::CommitRO; break;
    case Action::Kind::TxCommitWR: e.kind = TmEvent::Kind::CommitWR; break;
    case Action::Kind::TxAbort: e.kind = TmEvent::Kind::Abort; break;
    default: return std::nullopt;
  }
  return e;
}

std::string history_key(const TmHistory& h) {
  KeySink sink;
  for (const TmEvent& e : h) {
    sink.put_u8(static_cast<uint8_t>(e.kind));
    sink.put_i32(e.thread);
    sink.put_i32(e.tx_loc);
    sink.put_i64(e.val);
  }
  return sink.take();
}

struct Txn {
  ThreadId thread;
  size_t begin_pos;
  size_t end_pos;  // commit/abort position; SIZE_MAX while live
  bool committed = false;
  std::vector<TmEvent> ops;  // reads and writes in order
};

std::vector<Txn> split_transactions(const TmHistory& h) {
  std::vector<Txn> txns;
  std::map<ThreadId, int> live;  // thread -> txn index
  for (size_t pos = 0; pos < h.size(); ++pos) {
    const TmEvent& e = h[pos];
    switch (e.kind) {
      case TmEvent::Kind::Begin: {
        Txn t;
        t.thread = e.thread;
        t.begin_pos = pos;
        t.end_pos = SIZE_MAX;
        live[e.thread] = static_cast<int>(txns.size());
        txns.push_back(std::move(t));
        break;
      }
      case TmEvent::Kind::CommitRO:
      case TmEvent::Kind::CommitWR: {
        Txn& t = txns[live.at(e.thread)];
        t.end_pos = pos;
        t.committed = true;
        break;
      }
      case TmEvent::Kind::Abort: {
        Txn& t = txns[live.at(e.thread)];
        t.end_pos = pos;
        break;
      }
      default:
        txns[live.at(e.thread)].ops.push_back(e);
        break;
    }
  }
  return txns;
}

bool order_explains(const std::vector<Txn>& txns, const std::vector<int>& order,
                    int num_txlocations) {
  for (size_t k = 0; k < order.size(); ++k) {
    const Txn& t = txns[order[k]];
    std::vector<Val> mem(num_txlocations, 0);
    for (size_t j = 0; j < k; ++j) {
      const Txn& prior = txns[order[j]];
      if (!prior.committed) continue;
      for (const TmEvent& op : prior.ops)
        if (op.kind == TmEvent::Kind::Write) mem[op.tx_loc] = op.val;
    }
    std::map<int, Val> own_writes;
    for (const TmEvent& op : t.ops) {
      switch (op.kind) {
        case TmEvent::Kind::Write: own_writes[op.tx_loc] = op.val; break;
        case TmEvent::Kind::ReadInt: {
          auto it = own_writes.find(op.tx_loc);
          if (it == own_writes.end() || it->second != op.val) return false;
          break;
        }
        case TmEvent::Kind::ReadExt:
          if (mem[op.tx_loc] != op.val) return false;
          break;
        default: break;
      }
    }
  }
  return true;
}

}  // namespace

namespace {

uint64_t fnv1a(const std::string& s, uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t prefix_hash(const TmHistory& h, uint64_t seed) {
  uint64_t out = seed;
  for (const TmEvent& e : h) {
    out ^= (static_cast<uint64_t>(e.kind) << 48) ^ (static_cast<uint64_t>(e.thread) << 40) ^
           (static_cast<uint64_t>(e.tx_loc + 1) << 32) ^ static_cast<uint64_t>(e.val + 7);
    out *= 1099511628211ULL;
  }
  return out;
}

}  // namespace

std::vector<TmHistory> enumerate_histories(const LitmusProgram& p, const ExploreOptions& opt,
                                           long long max_paths) {
  std::set<std::string> seen;
  std::vector<TmHistory> out;
  long long visits = 0;

  struct Frame {
    Configuration config;
    std::vector<Successor> succs;
    size_t next = 0;
    size_t events;
  };

  // Two configurations with equal canonical keys and equal event prefixes
  // have identical continuations, so each such pair is explored once.
  std::set<std::pair<uint64_t, uint64_t>> visited;

  TmHistory current;
  std::vector<Frame> stack;
  Configuration root = initial_configuration(p, Backend::Tms2Ra);
  stack.push_back({root, enabled_steps(p, Backend::Tms2Ra, root, opt.step), 0, 0});

  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next == 0) {
      if (++visits > max_paths) throw ExhaustionError("history enumeration ceiling hit");
      if (f.config.all_terminal(p)) {
        if (seen.insert(history_key(current)).second) out.push_back(current);
      }
    }
    if (f.next >= f.succs.size()) {
      current.resize(f.events);
      stack.pop_back();
      continue;
    }
    Successor& s = f.succs[f.next++];
    if (s.budget_exhausted) continue;
    size_t mark = current.size();
    if (auto e = event_of(s.action)) current.push_back(*e);
    std::string ckey = s.config.canonical_key(p, Backend::Tms2Ra);
    auto hkey = std::make_pair(fnv1a(ckey, 14695981039346656037ULL),
                               prefix_hash(current, 0x9e3779b97f4a7c15ULL));
    if (!visited.insert(hkey).second) {
      current.resize(mark);
      continue;
    }
    Configuration next = s.config;
    auto succs = enabled_steps(p, Backend::Tms2Ra, next, opt.step);
    stack.push_back({std::move(next), std::move(succs), 0, mark});
  }
  return out;
}

bool strictly_serializable(const TmHistory& history, int num_txlocations,
                           SerializabilityMode mode) {
  std::vector<Txn> all = split_transactions(history);
  std::vector<Txn> txns;
  for (Txn& t : all)
    if (t.committed) txns.push_back(std::move(t));
  if (txns.empty()) return true;

  auto writes = [](const Txn& t) {
    for (const TmEvent& op : t.ops)
      if (op.kind == TmEvent::Kind::Write) return true;
    return false;
  };

  std::vector<int> order(txns.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end());
  do {
    bool precedence_ok = true;
    for (size_t a = 0; a < order.size() && precedence_ok; ++a) {
      for (size_t b = a + 1; b < order.size() && precedence_ok; ++b) {
        const Txn& first = txns[order[a]];
        const Txn& second = txns[order[b]];
        switch (mode) {
          case SerializabilityMode::WallClock:
            if (second.end_pos < first.begin_pos) precedence_ok = false;
            break;
          case SerializabilityMode::CommitOrder:
            // Writers install memory snapshots in commit order; that order
            // is the one the automaton enforces.
            if (writes(first) && writes(second) && second.end_pos < first.end_pos)
              precedence_ok = false;
            break;
        }
      }
    }
    if (!precedence_ok) continue;
    if (order_explains(txns, order, num_txlocations)) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

SerializabilityReport check_program_serializability(const LitmusProgram& p,
                                                    const ExploreOptions& opt,
                                                    SerializabilityMode mode) {
  SerializabilityReport rep;
  auto histories = enumerate_histories(p, opt);
  int ntx = static_cast<int>(p.sym.tx_locs.size());
  for (const TmHistory& h : histories) {
    rep.histories += 1;
    if (!strictly_serializable(h, ntx, mode)) {
      rep.failures += 1;
      if (rep.first_failure.empty()) {
        std::ostringstream os;
        os << "non-serializable history of " << h.size() << " events in " << p.id;
        rep.first_failure = os.str();
      }
    }
  }
  return rep;
}

LitmusProgram random_tx_program(unsigned seed) {
  std::mt19937 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  int nthreads = 2 + pick(2);
  const char* flags[] = {"RX", "R", "A", "RA"};
  const char* locs[] = {"x", "y"};

  std::ostringstream os;
  os << "program \"random-" << seed << "\"\n";
  os << "locations c0\ntxlocations x y\n";
  for (int t = 0; t < nthreads; ++t) {
    os << "thread t" << t + 1 << " {\n";
    int nops = 1 + pick(nthreads == 2 ? 3 : 2);
    os << "  TxBegin^" << flags[pick(4)] << " {";
    for (int r = 0; r < nops; ++r) os << (r ? ", " : "") << "r" << t + 1 << "_" << r;
    os << "};\n";
    for (int k = 0; k < nops; ++k) {
      if (pick(2) == 0) {
        os << "  TxRead(" << locs[pick(2)] << ", r" << t + 1 << "_" << k << ");\n";
      } else {
        os << "  TxWrite(" << locs[pick(2)] << ", " << 1 + pick(3) << ");\n";
      }
    }
    os << "  TxEnd;\n}\n";
  }
  os << "forall true\n";
  return parse_litmus(os.str());
}

}  // namespace ratm
