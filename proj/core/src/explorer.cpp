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

#include "ratm/explorer.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ratm {

namespace {

bool lock_held_by(const TmlThread& mt) {
  if (!mt.in_txn && mt.pc == TmlPc::Idle) return false;
  if (mt.loc_snap % 2 != 0) return true;
  return mt.cas_ok && (mt.pc == TmlPc::W3 || mt.pc == TmlPc::W5);
}

void check_transition_invariants(const LitmusProgram& p, Backend b, const Configuration& pred,
                                 const Successor& s, std::vector<std::string>* out) {
  const Configuration& succ = s.config;
  if (!ClientMemoryState::check_view_monotonic(pred.mem, succ.mem))
    out->push_back("view monotonicity violated by " + s.action.text);
  if (!succ.mem.check_mview_self_consistency())
    out->push_back("mview self-consistency violated by " + s.action.text);
  if (!succ.mem.check_covered_adjacency())
    out->push_back("covered-write adjacency violated by " + s.action.text);
  if (b == Backend::Tms2Ra && succ.spec && !succ.spec->check_lengths())
    out->push_back("|M|=|S|=|V| violated by " + s.action.text);
  if (b == Backend::TmlRa) {
    LocId glb = p.tml_glb_loc();
    // Lock protocol: quiescent states keep the lock word even; its
    // modification order increases by one except for value-preserving RMWs.
    bool held = false;
    int holders = 0;
    for (const TmlThread& mt : succ.tml) {
      if (lock_held_by(mt)) held = true;
      if (mt.in_txn && mt.loc_snap % 2 != 0 && mt.loc_snap == succ.mem.last_val(glb)) ++holders;
    }
    if (!held && succ.mem.last_val(glb) % 2 != 0)
      out->push_back("lock parity violated by " + s.action.text);
    if (holders > 1) out->push_back("write exclusivity violated by " + s.action.text);
    const auto& mo = succ.mem.mo(glb);
    for (size_t i = 1; i < mo.size(); ++i) {
      Val a = succ.mem.write(mo[i - 1]).val, bb = succ.mem.write(mo[i]).val;
      if (bb != a + 1 && bb != a) out->push_back("lock counter sequence violated");
    }
  }
  if (s.action.kind == Action::Kind::TmlAbort) {
    for (RegId r : pred.tml[s.thread].regs)
      if (succ.regs[r].has_value()) out->push_back("abort left a register defined");
  }
  if (s.action.kind == Action::Kind::TxAbort && pred.spec) {
    auto id = pred.spec->live_txn(s.thread);
    if (id)
      for (RegId r : pred.spec->txn(*id).regs)
        if (succ.regs[r].has_value()) out->push_back("abort left a register defined");
  }
}

void validate_backend(const LitmusProgram& p, Backend b) {
  if (b == Backend::Plain && p.has_tx_commands)
    throw ApiError("program uses transactional commands; the plain backend cannot run it");
}

struct Shared {
  const LitmusProgram& p;
  Backend backend;
  const ExploreOptions& opt;
  std::mutex mu;
  std::unordered_map<std::string, long long> seen;
  std::set<std::vector<RegVal>> finals;
  ExploreStats stats;
  std::vector<std::string> violations;
  std::atomic<bool> exhausted{false};
};

void worker_loop(Shared& sh, std::vector<Configuration> stack) {
  while (!stack.empty()) {
    if (sh.exhausted.load(std::memory_order_relaxed)) return;
    Configuration c = std::move(stack.back());
    stack.pop_back();

    auto succs = enabled_steps(sh.p, sh.backend, c, sh.opt.step);
    bool terminal = c.all_terminal(sh.p);
    {
      std::lock_guard<std::mutex> lk(sh.mu);
      sh.stats.transitions += static_cast<long long>(succs.size());
      if (terminal) sh.finals.insert(c.regs);
      if (!terminal && succs.empty()) sh.stats.stuck += 1;
    }
    for (Successor& s : succs) {
      if (sh.opt.check_invariants) {
        std::vector<std::string> v;
        check_transition_invariants(sh.p, sh.backend, c, s, &v);
        if (!v.empty()) {
          std::lock_guard<std::mutex> lk(sh.mu);
          for (auto& m : v)
            if (sh.violations.size() < 32) sh.violations.push_back(std::move(m));
        }
      }
      if (s.budget_exhausted) {
        std::lock_guard<std::mutex> lk(sh.mu);
        sh.stats.budget_exhausted += 1;
        continue;
      }
      std::string key = s.config.canonical_key(sh.p, sh.backend);
      bool fresh = true;
      {
        std::lock_guard<std::mutex> lk(sh.mu);
        if (sh.opt.memoize) {
          auto [it, inserted] = sh.seen.emplace(std::move(key), 0);
          fresh = inserted;
        }
        if (fresh) {
          sh.stats.states += 1;
          if (sh.stats.states > sh.opt.state_ceiling) {
            sh.exhausted.store(true, std::memory_order_relaxed);
            return;
          }
        }
      }
      if (fresh) stack.push_back(std::move(s.config));
    }
  }
}

}  // namespace

std::string format_regs(const LitmusProgram& p, const std::vector<RegVal>& regs) {
  std::ostringstream os;
  for (size_t r = 0; r < regs.size(); ++r) {
    if (r) os << " ";
    os << p.sym.regs[r] << "=";
    if (regs[r]) os << *regs[r];
    else os << "bot";
  }
  return os.str();
}

ExplorationResult explore(const LitmusProgram& p, Backend b, const ExploreOptions& opt) {
  validate_backend(p, b);
  ExplorationResult res;

  Shared sh{p, b, opt};
  Configuration root = initial_configuration(p, b);
  sh.seen.emplace(root.canonical_key(p, b), 0);
  sh.stats.states = 1;

  int workers = std::max(1, opt.workers);
  if (workers == 1 || opt.record_traces) {
    worker_loop(sh, {root});
  } else {
    // Fan the root's successor subtrees out to a small pool; the memo map
    // is shared and inserts are idempotent.
    auto first = enabled_steps(p, b, root, opt.step);
    sh.stats.transitions += static_cast<long long>(first.size());
    std::vector<std::vector<Configuration>> buckets(workers);
    int i = 0;
    for (Successor& s : first) {
      if (s.budget_exhausted) {
        sh.stats.budget_exhausted += 1;
        continue;
      }
      std::string key = s.config.canonical_key(p, b);
      auto [it, inserted] = sh.seen.emplace(std::move(key), 0);
      if (!inserted) continue;
      sh.stats.states += 1;
      buckets[i++ % workers].push_back(std::move(s.config));
    }
    std::vector<std::thread> pool;
    for (auto& bucket : buckets)
      pool.emplace_back([&sh, bucket = std::move(bucket)]() mutable {
        worker_loop(sh, std::move(bucket));
      });
    for (auto& th : pool) th.join();
  }
  if (sh.exhausted.load())
    throw ExhaustionError("state ceiling of " + std::to_string(opt.state_ceiling) + " exceeded");

  res.stats = sh.stats;
  res.invariant_violations = std::move(sh.violations);
  res.finals.assign(sh.finals.begin(), sh.finals.end());

  // Postconditions quantify over completed executions only.
  for (const PostCondition& pc : p.posts) {
    bool ok;
    if (pc.universal) {
      ok = true;
      for (const auto& regs : res.finals) {
        Configuration probe = initial_configuration(p, b);
        probe.regs = regs;
        if (!eval_post(probe, pc.pred)) {
          ok = false;
          break;
        }
      }
    } else {
      ok = false;
      for (const auto& regs : res.finals) {
        Configuration probe = initial_configuration(p, b);
        probe.regs = regs;
        if (eval_post(probe, pc.pred)) {
          ok = true;
          break;
        }
      }
    }
    if (!ok) {
      res.verdict = false;
      res.failed_posts.push_back((pc.universal ? "forall " : "exists ") + pc.text);
    }
  }

  if (!res.verdict) {
    // Deterministic single-worker witness recovery for the first failure.
    ExploreOptions wopt = opt;
    wopt.workers = 1;
    wopt.record_traces = true;
    ReachGraph g = explore_graph(p, b, wopt);
    for (size_t n = 0; n < g.configs.size(); ++n) {
      const Configuration& c = g.configs[n];
      if (!c.all_terminal(p)) continue;
      bool violates = false;
      for (const PostCondition& pc : p.posts)
        if (pc.universal && !eval_post(c, pc.pred)) violates = true;
      if (violates) {
        res.counterexample_trace = g.trace_to(static_cast<int>(n));
        break;
      }
    }
  }
  return res;
}

ReachGraph explore_graph(const LitmusProgram& p, Backend b, const ExploreOptions& opt) {
  validate_backend(p, b);
  ReachGraph g;
  std::unordered_map<std::string, int> index;

  Configuration root = initial_configuration(p, b);
  index.emplace(root.canonical_key(p, b), 0);
  g.configs.push_back(root);
  g.succs.emplace_back();
  g.parent.push_back(-1);
  g.parent_act.emplace_back();
  g.stats.states = 1;

  std::vector<int> stack{0};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    Configuration c = g.configs[n];  // copy: configs vector may reallocate
    auto succs = enabled_steps(p, b, c, opt.step);
    g.stats.transitions += static_cast<long long>(succs.size());
    if (!c.all_terminal(p) && succs.empty()) g.stats.stuck += 1;
    for (Successor& s : succs) {
      if (opt.check_invariants) {
        std::vector<std::string> v;
        check_transition_invariants(p, b, c, s, &v);
        for (auto& m : v)
          if (g.invariant_violations.size() < 32) g.invariant_violations.push_back(std::move(m));
      }
      if (s.budget_exhausted) {
        g.stats.budget_exhausted += 1;
        continue;
      }
      std::string key = s.config.canonical_key(p, b);
      auto [it, inserted] = index.emplace(std::move(key), static_cast<int>(g.configs.size()));
      if (inserted) {
        g.configs.push_back(s.config);
        g.succs.emplace_back();
        g.parent.push_back(n);
        g.parent_act.push_back(s.action);
        g.stats.states += 1;
        if (g.stats.states > opt.state_ceiling)
          throw ExhaustionError("state ceiling of " + std::to_string(opt.state_ceiling) +
                                " exceeded");
        stack.push_back(it->second);
      }
      g.succs[n].emplace_back(it->second, s.action);
    }
  }
  return g;
}

std::vector<std::string> ReachGraph::trace_to(int node) const {
  std::vector<std::string> out;
  for (int n = node; parent[n] >= 0; n = parent[n]) {
    std::ostringstream os;
    os << "t" << parent_act[n].thread << ": " << parent_act[n].text;
    out.push_back(os.str());
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Val> reachable_values(const LitmusProgram& p, Backend b, ThreadId thread, int label,
                                  const std::string& loc_name, const ExploreOptions& opt) {
  int loc = p.sym.find_client_loc(loc_name);
  if (loc < 0) throw ApiError("unknown location " + loc_name);
  if (label < 0 || label > p.threads[thread].terminal()) throw ApiError("unknown label");
  ReachGraph g = explore_graph(p, b, opt);
  std::set<Val> vals;
  for (const Configuration& c : g.configs) {
    if (c.pc[thread] != label) continue;
    if (b == Backend::TmlRa && c.tml[thread].pc != TmlPc::Idle) continue;
    for (Val v : c.mem.observable_values(thread, loc)) vals.insert(v);
  }
  return {vals.begin(), vals.end()};
}

std::string ExplorationResult::json(const LitmusProgram& p, Backend b) const {
  nlohmann::json j;
  j["program"] = p.id;
  j["backend"] = to_string(b);
  j["finals"] = nlohmann::json::array();
  for (const auto& regs : finals) {
    nlohmann::json f;
    for (size_t r = 0; r < regs.size(); ++r)
      f[p.sym.regs[r]] = regs[r] ? nlohmann::json(*regs[r]) : nlohmann::json(nullptr);
    j["finals"].push_back({{"regs", f}});
  }
  j["verdict"] = verdict;
  if (!failed_posts.empty()) j["failed"] = failed_posts;
  if (counterexample_trace) j["counterexample_trace"] = *counterexample_trace;
  j["stats"] = {{"states", stats.states},
                {"transitions", stats.transitions},
                {"budget_exhausted", stats.budget_exhausted},
                {"stuck", stats.stuck}};
  if (!invariant_violations.empty()) j["invariant_violations"] = invariant_violations;
  return j.dump(2);
}

}  // namespace ratm
