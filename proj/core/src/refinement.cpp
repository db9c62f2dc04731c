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

#include "ratm/refinement.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ratm {

namespace {

bool is_client_action(Action::Kind k) {
  switch (k) {
    case Action::Kind::RegAssign:
    case Action::Kind::ClientWrite:
    case Action::Kind::ClientRead:
    case Action::Kind::CasSuccess:
    case Action::Kind::CasFail:
    case Action::Kind::IfBranch:
      return true;
    default:
      return false;
  }
}

/// Signature that identifies "the same step" across the two systems.
std::string action_signature(const ClientMemoryState& mem, const Action& a) {
  KeySink sink;
  sink.put_u8(static_cast<uint8_t>(a.kind));
  sink.put_i32(a.thread);
  switch (a.kind) {
    case Action::Kind::RegAssign:
      sink.put_i64(a.val);
      break;
    case Action::Kind::ClientWrite:
      sink.put_i32(a.loc);
      sink.put_i64(a.val);
      sink.put_i32(a.aux);  // insertion slot
      break;
    case Action::Kind::ClientRead:
    case Action::Kind::CasSuccess:
    case Action::Kind::CasFail: {
      sink.put_i32(a.loc);
      auto tag = mem.write_tag(a.aux);
      sink.put_i32(tag.loc);
      sink.put_i64(tag.val);
      sink.put_i32(tag.rank);
      break;
    }
    case Action::Kind::IfBranch:
      sink.put_i32(a.aux);  // target label
      break;
    default:
      break;
  }
  return sink.take();
}

}  // namespace

// ---------------------------------------------------------------------------
// Client observations and state refinement
// ---------------------------------------------------------------------------

ClientObs client_obs(const LitmusProgram& p, Backend b, const Configuration& c) {
  ClientObs obs;
  obs.mem = c.mem;
  obs.client_locs = static_cast<int>(p.sym.client_locs.size());
  obs.threads = p.num_threads();
  obs.regs.resize(c.regs.size());
  for (RegId r = 0; r < static_cast<int>(c.regs.size()); ++r) {
    if (c.reg_leased(b, r, p)) obs.regs[r] = std::nullopt;
    else obs.regs[r] = c.regs[r];
  }
  return obs;
}

std::string ClientObs::key() const {
  // Registers and client write histories only. Thread views advance silently
  // (an acquiring library read can shift them without any client write), so
  // they separate the systems' step counts and are compared through
  // observable-write inclusion instead of through stutter detection.
  KeySink sink;
  for (const auto& r : regs) {
    sink.put_bool(r.has_value());
    if (r) sink.put_reg(*r);
  }
  for (LocId x = 0; x < client_locs; ++x) {
    const auto& mo = mem.mo(x);
    sink.put_i32(static_cast<int>(mo.size()));
    for (WriteId w : mo) {
      sink.put_i64(mem.write(w).val);
      sink.put_bool(mem.write(w).released);
      sink.put_bool(mem.covered(w));
    }
  }
  return sink.take();
}

bool state_refines(const ClientObs& concrete, const ClientObs& abstract) {
  if (concrete.regs.size() != abstract.regs.size()) return false;
  for (size_t r = 0; r < concrete.regs.size(); ++r)
    if (concrete.regs[r] != abstract.regs[r]) return false;
  if (concrete.client_locs != abstract.client_locs ||
      concrete.threads != abstract.threads)
    return false;
  // Observable-write inclusion per thread and client location, with writes
  // matched across the two states by (location, value, rank).
  for (ThreadId t = 0; t < concrete.threads; ++t) {
    for (LocId x = 0; x < concrete.client_locs; ++x) {
      std::set<ClientMemoryState::WriteTag> abs_tags;
      for (WriteId w : abstract.mem.observable_writes(t, x))
        abs_tags.insert(abstract.mem.write_tag(w));
      for (WriteId w : concrete.mem.observable_writes(t, x))
        if (!abs_tags.count(concrete.mem.write_tag(w))) return false;
    }
  }
  return true;
}

bool trace_refines(const ClientTrace& ct, const ClientTrace& at) {
  if (ct.size() != at.size()) return false;
  for (size_t i = 0; i < ct.size(); ++i)
    if (!state_refines(ct[i], at[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// The simulation relation
// ---------------------------------------------------------------------------

std::vector<std::string> simulation_conjunct_names() {
  return {"client-observation", "epoch",      "lastval-domain", "window",   "even-wrset",
          "haswritten-wrset",   "hasread-rdset", "wrset-lastval", "glb-vmems", "seenidxs-bound"};
}

bool SimCheck::holds() const {
  for (bool b : conjuncts)
    if (!b) return false;
  return true;
}

std::string SimCheck::failing() const {
  auto names = simulation_conjunct_names();
  std::string out;
  for (size_t i = 0; i < conjuncts.size(); ++i)
    if (!conjuncts[i]) out += (out.empty() ? "" : ", ") + names[i];
  return out;
}

SimCheck simulation_holds(const LitmusProgram& p, const Configuration& abstract,
                          const Configuration& concrete) {
  SimCheck check;
  check.conjuncts.assign(10, true);
  const TMSpecState& spec = *abstract.spec;
  const ClientMemoryState& cmem = concrete.mem;
  const LocId glb = p.tml_glb_loc();
  const int ntx = static_cast<int>(p.sym.tx_locs.size());
  const int max_idx = spec.mem_len() - 1;

  // Client observation (R_V).
  check.conjuncts[0] = state_refines(client_obs(p, Backend::TmlRa, concrete),
                                     client_obs(p, Backend::Tms2Ra, abstract));

  // (1) The last lock value names the newest memory epoch.
  check.conjuncts[1] = wc(cmem.last_val(glb)) == max_idx;

  // (3) Transactional locations hold the last-epoch value or a pending one.
  for (int l = 0; l < ntx && check.conjuncts[2]; ++l) {
    Val last = cmem.last_val(p.tml_beta_loc(l));
    bool ok = spec.memory(max_idx)[l] == last;
    for (ThreadId t = 0; t < p.num_threads() && !ok; ++t) {
      auto id = spec.live_txn(t);
      if (!id) continue;
      auto w = spec.txn(*id).wr_set.get(l);
      if (w && *w == last) ok = true;
    }
    check.conjuncts[2] = ok;
  }

  for (ThreadId t = 0; t < p.num_threads(); ++t) {
    auto id = spec.live_txn(t);
    const TxnLocal* txn =
        id && spec.txn(*id).status == TxnStatus::Ready ? &spec.txn(*id) : nullptr;
    const TmlThread& mt = concrete.tml[t];

    if (txn && mt.in_txn) {
      // (2) The snapshot's epoch window covers the transaction.
      Val epoch = wc(mt.loc_snap);
      bool ok = txn->begin_idx <= epoch && epoch <= max_idx;
      if (ok)
        for (const auto& [l, v] : txn->rd_set.entries)
          if (spec.memory(static_cast<int>(epoch))[l] != v) ok = false;
      if (!ok) check.conjuncts[3] = false;
      // (4) An even snapshot means nothing written abstractly yet.
      if (mt.loc_snap % 2 == 0 && !txn->wr_set.empty()) check.conjuncts[4] = false;
      // (5) A concrete eager write implies a nonempty abstract write set.
      if (mt.has_written && txn->wr_set.empty()) check.conjuncts[5] = false;
      // (6) No concrete read implies an empty abstract read set.
      if (!mt.has_read && !txn->rd_set.empty()) check.conjuncts[6] = false;
      // (7) Pending writes agree with the eagerly written memory.
      for (const auto& [l, v] : txn->wr_set.entries)
        if (cmem.last_val(p.tml_beta_loc(l)) != v) check.conjuncts[7] = false;
      // (9) Seen epochs are bounded by the thread's lock view.
      Val seen_bound = wc(cmem.write(cmem.tview(t)[glb]).val);
      for (int i : txn->seen_idxs)
        if (i > seen_bound) check.conjuncts[9] = false;
    }

    // (8) Every observable lock value names a visible epoch.
    for (WriteId w : cmem.observable_writes(t, glb)) {
      Val epoch = wc(cmem.write(w).val);
      if (epoch < spec.txview(t) || epoch > max_idx) check.conjuncts[8] = false;
    }
  }
  return check;
}

// ---------------------------------------------------------------------------
// Forward-simulation game
// ---------------------------------------------------------------------------

namespace {

struct ConfigPool {
  std::vector<Configuration> configs;
  std::unordered_map<std::string, int> index;

  int intern(const LitmusProgram& p, Backend b, const Configuration& c) {
    std::string key = c.canonical_key(p, b);
    auto [it, inserted] = index.emplace(std::move(key), static_cast<int>(configs.size()));
    if (inserted) configs.push_back(c);
    return it->second;
  }
};

std::string ids_key(int concrete, const std::vector<int>& abstracts) {
  KeySink sink;
  sink.put_i32(concrete);
  for (int a : abstracts) sink.put_i32(a);
  return sink.take();
}

}  // namespace

SimReport check_forward_simulation(const LitmusProgram& p, const RefinementOptions& opt) {
  SimReport rep;
  ConfigPool cpool, apool;
  const LocId glb = p.tml_glb_loc();

  Configuration c0 = initial_configuration(p, Backend::TmlRa);
  Configuration a0 = initial_configuration(p, Backend::Tms2Ra);
  if (!simulation_holds(p, a0, c0).holds()) {
    rep.ok = false;
    rep.detail = "initialisation: " + simulation_holds(p, a0, c0).failing();
    return rep;
  }

  struct Node {
    int concrete;
    std::vector<int> abstracts;
    int parent;
    std::string act;
  };
  std::vector<Node> nodes;
  std::unordered_set<std::string> seen;
  std::vector<int> stack;

  auto push_node = [&](int concrete, std::vector<int> abstracts, int parent, std::string act) {
    std::sort(abstracts.begin(), abstracts.end());
    abstracts.erase(std::unique(abstracts.begin(), abstracts.end()), abstracts.end());
    std::string key = ids_key(concrete, abstracts);
    if (!seen.insert(std::move(key)).second) return;
    nodes.push_back({concrete, std::move(abstracts), parent, std::move(act)});
    stack.push_back(static_cast<int>(nodes.size() - 1));
  };

  auto trace_of = [&](int node, const std::string& last) {
    std::vector<std::string> out{last};
    for (int n = node; n >= 0 && !nodes[n].act.empty(); n = nodes[n].parent)
      out.push_back(nodes[n].act);
    std::reverse(out.begin(), out.end());
    return out;
  };

  // Thread-view stability of the lock-state conjuncts: advance the concrete
  // view of each library location to each later write and re-check.
  auto view_stability = [&](const Configuration& a, const Configuration& c) {
    std::vector<LocId> lib_locs;
    for (size_t l = 0; l < p.sym.tx_locs.size(); ++l) lib_locs.push_back(p.tml_beta_loc(l));
    lib_locs.push_back(glb);
    for (ThreadId t = 0; t < p.num_threads(); ++t) {
      for (LocId x : lib_locs) {
        const auto& mo = c.mem.mo(x);
        int from = c.mem.mo_pos(c.mem.tview(t)[x]);
        for (int pos = from + 1; pos < static_cast<int>(mo.size()); ++pos) {
          View v = c.mem.tview(t);
          v[x] = mo[pos];
          Configuration shifted = c;
          shifted.mem = c.mem.with_tview(t, v);
          SimCheck sc = simulation_holds(p, a, shifted);
          // Only the library-state conjuncts are required to survive.
          for (size_t k = 1; k < sc.conjuncts.size(); ++k)
            if (!sc.conjuncts[k]) return false;
        }
      }
    }
    return true;
  };

  push_node(cpool.intern(p, Backend::TmlRa, c0), {apool.intern(p, Backend::Tms2Ra, a0)}, -1, "");

  while (!stack.empty()) {
    int ni = stack.back();
    stack.pop_back();
    Node node = nodes[ni];
    if (static_cast<long long>(nodes.size()) > opt.node_ceiling)
      throw ExhaustionError("simulation product ceiling exceeded");
    rep.product_nodes = static_cast<long long>(nodes.size());

    const Configuration concrete = cpool.configs[node.concrete];
    auto succs = enabled_steps(p, Backend::TmlRa, concrete, opt.concrete_step);

    for (Successor& s : succs) {
      if (s.budget_exhausted) continue;
      std::vector<int> next_cands;
      std::string why;

      if (is_client_action(s.action.kind)) {
        // The abstract system takes the identical client step.
        std::string sig = action_signature(concrete.mem, s.action);
        for (int ai : node.abstracts) {
          const Configuration& a = apool.configs[ai];
          for (Successor& as : enabled_steps(p, Backend::Tms2Ra, a, opt.abstract_step)) {
            if (as.thread != s.thread || !is_client_action(as.action.kind)) continue;
            if (action_signature(a.mem, as.action) != sig) continue;
            SimCheck sc = simulation_holds(p, as.config, s.config);
            if (sc.holds()) next_cands.push_back(apool.intern(p, Backend::Tms2Ra, as.config));
            else if (why.empty()) why = sc.failing();
          }
        }
      } else {
        // Library step: stutter or one same-thread abstract transition.
        for (int ai : node.abstracts) {
          const Configuration& a = apool.configs[ai];
          SimCheck st = simulation_holds(p, a, s.config);
          if (st.holds()) next_cands.push_back(ai);
          else if (why.empty()) why = st.failing();
          for (Successor& as : enabled_steps(p, Backend::Tms2Ra, a, opt.abstract_step)) {
            if (as.thread != s.thread) continue;
            SimCheck sc = simulation_holds(p, as.config, s.config);
            if (sc.holds()) next_cands.push_back(apool.intern(p, Backend::Tms2Ra, as.config));
          }
        }
      }

      if (next_cands.empty()) {
        rep.ok = false;
        rep.detail = "preservation fails after " + s.action.text +
                     (why.empty() ? "" : " (violated: " + why + ")");
        rep.trace = trace_of(ni, "t" + std::to_string(s.thread) + ": " + s.action.text);
        return rep;
      }
      int ci = cpool.intern(p, Backend::TmlRa, s.config);
      if (rep.view_stability_ok) {
        for (int ai : next_cands) {
          if (!view_stability(apool.configs[ai], s.config)) {
            rep.view_stability_ok = false;
            rep.ok = false;
            rep.detail = "thread-view stability fails after " + s.action.text;
            rep.trace = trace_of(ni, "t" + std::to_string(s.thread) + ": " + s.action.text);
            return rep;
          }
        }
      }
      push_node(ci, std::move(next_cands), ni,
                "t" + std::to_string(s.thread) + ": " + s.action.text);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Trace inclusion
// ---------------------------------------------------------------------------

namespace {

struct AbstractTraceSide {
  const LitmusProgram& p;
  const StepOptions& step;
  ConfigPool pool;
  std::unordered_map<int, std::vector<int>> silent_reach_;  // memo
  std::unordered_map<int, int> maximal_silent_;             // memo: -1 unknown

  std::string obs_key(int id) { return client_obs(p, Backend::Tms2Ra, pool.configs[id]).key(); }

  /// All configurations reachable through observation-preserving steps.
  const std::vector<int>& silent_reach(int id) {
    auto it = silent_reach_.find(id);
    if (it != silent_reach_.end()) return it->second;
    std::vector<int> out{id};
    std::set<int> seen{id};
    std::string base = obs_key(id);
    std::vector<int> work{id};
    while (!work.empty()) {
      int n = work.back();
      work.pop_back();
      for (Successor& s : enabled_steps(p, Backend::Tms2Ra, pool.configs[n], step)) {
        if (s.budget_exhausted) continue;
        int m = pool.intern(p, Backend::Tms2Ra, s.config);
        if (seen.count(m)) continue;
        if (client_obs(p, Backend::Tms2Ra, pool.configs[m]).key() != base) continue;
        seen.insert(m);
        out.push_back(m);
        work.push_back(m);
      }
    }
    return silent_reach_.emplace(id, std::move(out)).first->second;
  }

  /// Can a maximal configuration be reached without changing the observation?
  bool maximal_silently(int id) {
    auto it = maximal_silent_.find(id);
    if (it != maximal_silent_.end()) return it->second != 0;
    bool ok = false;
    for (int n : silent_reach(id)) {
      bool has_succ = false;
      for (Successor& s : enabled_steps(p, Backend::Tms2Ra, pool.configs[n], step))
        if (!s.budget_exhausted) has_succ = true;
      if (!has_succ) {
        ok = true;
        break;
      }
    }
    maximal_silent_.emplace(id, ok ? 1 : 0);
    return ok;
  }

  /// One observation-changing step out of the silent closure.
  std::vector<int> obs_successors(int id) {
    std::vector<int> out;
    std::set<int> dedup;
    std::string base = obs_key(id);
    for (int n : silent_reach(id)) {
      for (Successor& s : enabled_steps(p, Backend::Tms2Ra, pool.configs[n], step)) {
        if (s.budget_exhausted) continue;
        int m = pool.intern(p, Backend::Tms2Ra, s.config);
        if (client_obs(p, Backend::Tms2Ra, pool.configs[m]).key() == base) continue;
        if (dedup.insert(m).second) out.push_back(m);
      }
    }
    return out;
  }
};

}  // namespace

SimReport check_program_refinement(const LitmusProgram& p, const RefinementOptions& opt) {
  SimReport rep;
  ConfigPool cpool;
  AbstractTraceSide abs{p, opt.abstract_step};

  Configuration c0 = initial_configuration(p, Backend::TmlRa);
  Configuration a0 = initial_configuration(p, Backend::Tms2Ra);
  int c0i = cpool.intern(p, Backend::TmlRa, c0);
  int a0i = abs.pool.intern(p, Backend::Tms2Ra, a0);
  if (!state_refines(client_obs(p, Backend::TmlRa, c0), client_obs(p, Backend::Tms2Ra, a0))) {
    rep.ok = false;
    rep.detail = "initial client states do not match";
    return rep;
  }

  struct Node {
    int concrete;
    std::vector<int> abstracts;
    int parent;
    std::string act;
  };
  std::vector<Node> nodes;
  std::unordered_set<std::string> seen;
  std::vector<int> stack;

  auto push_node = [&](int concrete, std::vector<int> abstracts, int parent, std::string act) {
    std::sort(abstracts.begin(), abstracts.end());
    abstracts.erase(std::unique(abstracts.begin(), abstracts.end()), abstracts.end());
    std::string key = ids_key(concrete, abstracts);
    if (!seen.insert(std::move(key)).second) return;
    nodes.push_back({concrete, std::move(abstracts), parent, std::move(act)});
    stack.push_back(static_cast<int>(nodes.size() - 1));
  };

  auto trace_of = [&](int node) {
    std::vector<std::string> out;
    for (int n = node; n >= 0 && !nodes[n].act.empty(); n = nodes[n].parent)
      out.push_back(nodes[n].act);
    std::reverse(out.begin(), out.end());
    return out;
  };

  push_node(c0i, {a0i}, -1, "");

  while (!stack.empty()) {
    int ni = stack.back();
    stack.pop_back();
    if (static_cast<long long>(nodes.size()) > opt.node_ceiling)
      throw ExhaustionError("refinement product ceiling exceeded");
    rep.product_nodes = static_cast<long long>(nodes.size());
    Node node = nodes[ni];

    const Configuration concrete = cpool.configs[node.concrete];
    std::string cobs = client_obs(p, Backend::TmlRa, concrete).key();
    auto succs = enabled_steps(p, Backend::TmlRa, concrete, opt.concrete_step);

    bool maximal = true;
    for (Successor& s : succs)
      if (!s.budget_exhausted) maximal = false;

    if (maximal) {
      // The abstract side must be able to end its trace here too.
      bool ok = false;
      for (int ai : node.abstracts)
        if (abs.maximal_silently(ai)) ok = true;
      if (!ok) {
        rep.ok = false;
        rep.detail = "no abstract trace ends where the concrete trace ends";
        rep.trace = trace_of(ni);
        return rep;
      }
      continue;
    }

    for (Successor& s : succs) {
      if (s.budget_exhausted) continue;
      int ci = cpool.intern(p, Backend::TmlRa, s.config);
      ClientObs sobs = client_obs(p, Backend::TmlRa, s.config);
      if (sobs.key() == cobs) {
        push_node(ci, node.abstracts, ni, "t" + std::to_string(s.thread) + ": " + s.action.text);
        continue;
      }
      std::vector<int> next;
      for (int ai : node.abstracts) {
        for (int m : abs.obs_successors(ai)) {
          if (state_refines(sobs, client_obs(p, Backend::Tms2Ra, abs.pool.configs[m])))
            next.push_back(m);
        }
      }
      if (next.empty()) {
        rep.ok = false;
        rep.detail = "no abstract trace matches the concrete observation after " + s.action.text;
        rep.trace = trace_of(ni);
        rep.trace.push_back("t" + std::to_string(s.thread) + ": " + s.action.text);
        return rep;
      }
      push_node(ci, std::move(next), ni, "t" + std::to_string(s.thread) + ": " + s.action.text);
    }
  }
  return rep;
}

std::optional<std::pair<ClientTrace, ClientTrace>> witness_trace_pair(
    const LitmusProgram& p, const RefinementOptions& opt) {
  // Walk one maximal concrete execution depth-first, then greedily rebuild
  // an abstract trace matching its observation sequence.
  Configuration c = initial_configuration(p, Backend::TmlRa);
  ClientTrace ct{client_obs(p, Backend::TmlRa, c)};
  std::unordered_set<std::string> on_path{c.canonical_key(p, Backend::TmlRa)};
  while (true) {
    auto succs = enabled_steps(p, Backend::TmlRa, c, opt.concrete_step);
    bool advanced = false;
    for (Successor& s : succs) {
      if (s.budget_exhausted) continue;
      std::string key = s.config.canonical_key(p, Backend::TmlRa);
      if (!on_path.insert(std::move(key)).second) continue;
      ClientObs obs = client_obs(p, Backend::TmlRa, s.config);
      if (obs.key() != ct.back().key()) ct.push_back(std::move(obs));
      c = std::move(s.config);
      advanced = true;
      break;
    }
    if (!advanced) break;
  }

  AbstractTraceSide abs{p, opt.abstract_step};
  int cur = abs.pool.intern(p, Backend::Tms2Ra, initial_configuration(p, Backend::Tms2Ra));
  ClientTrace at{client_obs(p, Backend::Tms2Ra, abs.pool.configs[cur])};
  if (!state_refines(ct[0], at[0])) return std::nullopt;

  // Depth-first search over abstract observation successors.
  std::function<bool(int, size_t)> match = [&](int node, size_t idx) -> bool {
    if (idx + 1 >= ct.size()) return abs.maximal_silently(node);
    for (int m : abs.obs_successors(node)) {
      if (!state_refines(ct[idx + 1], client_obs(p, Backend::Tms2Ra, abs.pool.configs[m])))
        continue;
      at.push_back(client_obs(p, Backend::Tms2Ra, abs.pool.configs[m]));
      if (match(m, idx + 1)) return true;
      at.pop_back();
    }
    return false;
  };
  if (!match(cur, 0)) return std::nullopt;
  return std::make_pair(std::move(ct), std::move(at));
}

}  // namespace ratm
