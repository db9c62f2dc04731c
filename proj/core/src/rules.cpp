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

#include "ratm/rules.hpp"

#include <functional>
#include <memory>
#include <sstream>
#include <unordered_set>

#include "ratm/assertions.hpp"
#include "ratm/explorer.hpp"
#include "ratm/parser.hpp"

namespace ratm {

namespace {

// ---------------------------------------------------------------------------
// Scaffold programs: a family of tiny transactions whose reachable states
// serve as the semantic universe for rule checking.
// ---------------------------------------------------------------------------

const char* kScaffolds[] = {
    // Releasing writer vs acquiring reader.
    R"(locations y z
       txlocations xh yh
       thread s1 { y := 1; TxBegin^R {a}; TxWrite(xh, 1); TxEnd; }
       thread s2 { TxBegin^A {b}; TxRead(xh, b); TxEnd; c <- y; })",
    // Relaxed writer (refutes transfer rules without a release flag).
    R"(locations y z
       txlocations xh yh
       thread s1 { y := 1; TxBegin^RX {a}; TxWrite(xh, 1); TxEnd; }
       thread s2 { TxBegin^A {b}; TxRead(xh, b); TxEnd; c <- y; })",
    // Releasing writer vs relaxed reader (refutes end rules without acquire).
    R"(locations y z
       txlocations xh yh
       thread s1 { y := 1; TxBegin^R {a}; TxWrite(xh, 1); TxEnd; }
       thread s2 { TxBegin^RX {b}; TxRead(xh, b); TxEnd; c <- y; })",
    // Writer touching both transactional locations; reader reads both.
    R"(locations y z
       txlocations xh yh
       thread s1 { y := 2; TxBegin^R {a}; TxWrite(xh, 1); TxWrite(yh, 2); TxEnd; }
       thread s2 { TxBegin^A {b}; TxRead(xh, b); TxRead(yh, b); TxEnd; c <- y; })",
    // Read-only transaction against a writer, plus a client store.
    R"(locations y z
       txlocations xh yh
       thread s1 { TxBegin^RA {a}; TxRead(xh, a); TxEnd; }
       thread s2 { z := 2; TxBegin^RA {b}; TxWrite(xh, 1); TxEnd; c <- y; })",
    // Chained release-acquire transactions over three threads.
    R"(locations y z
       txlocations xh yh
       thread s1 { y := 1; TxBegin^R {a}; TxWrite(xh, 1); TxEnd; }
       thread s2 { TxBegin^RA {b}; TxRead(xh, b); TxWrite(yh, 2); TxEnd; }
       thread s3 { TxBegin^A {e}; TxRead(yh, e); TxEnd; c <- y; })",
};

struct PoolEntry {
  std::shared_ptr<LitmusProgram> program;
  std::vector<Configuration> configs;
};

const std::vector<PoolEntry>& scaffold_pool() {
  static const std::vector<PoolEntry> pool = [] {
    std::vector<PoolEntry> out;
    for (const char* src : kScaffolds) {
      PoolEntry e;
      e.program = std::make_shared<LitmusProgram>(parse_litmus(src));
      ExploreOptions opt;
      opt.check_invariants = false;
      opt.state_ceiling = 500'000;
      ReachGraph g = explore_graph(*e.program, Backend::Tms2Ra, opt);
      // Rules never look at program counters, so configurations that agree
      // on memory, specification state and registers are interchangeable.
      std::unordered_set<std::string> seen;
      for (Configuration& c : g.configs) {
        KeySink sink;
        c.mem.canonical_key(sink);
        c.spec->canonical_key(sink, c.mem);
        for (const RegVal& r : c.regs) sink.put_reg(r);
        if (seen.insert(sink.take()).second) e.configs.push_back(std::move(c));
      }
      out.push_back(std::move(e));
    }
    return out;
  }();
  return pool;
}

// ---------------------------------------------------------------------------
// Assertion builders
// ---------------------------------------------------------------------------

using A = Assertion;
using K = Assertion::Kind;

A mk(K k) {
  A a;
  a.kind = k;
  return a;
}

A a_true() { return A{}; }

A a_not(A x) {
  A a = mk(K::Not);
  a.kids.push_back(std::make_shared<A>(std::move(x)));
  return a;
}

A a_bin(K k, A l, A r) {
  A a = mk(k);
  a.kids.push_back(std::make_shared<A>(std::move(l)));
  a.kids.push_back(std::make_shared<A>(std::move(r)));
  return a;
}

A a_and(A l, A r) { return a_bin(K::And, std::move(l), std::move(r)); }
A a_imp(A l, A r) { return a_bin(K::Imp, std::move(l), std::move(r)); }

A a_all(std::vector<A> xs) {
  A out = a_true();
  bool first = true;
  for (A& x : xs) {
    if (first) {
      out = std::move(x);
      first = false;
    } else {
      out = a_and(std::move(out), std::move(x));
    }
  }
  return out;
}

A tx_def(int xh, Val v, ThreadId t) {
  A a = mk(K::TxDefinite);
  a.tx_loc = xh;
  a.val = v;
  a.thread = t;
  return a;
}

A tx_poss(int xh, Val v, ThreadId t) {
  A a = mk(K::TxPossible);
  a.tx_loc = xh;
  a.val = v;
  a.thread = t;
  return a;
}

A tx_cond(int yh, Val u, LocId z, Val v, ThreadId t) {
  A a = mk(K::TxConditional);
  a.cond_loc = yh;
  a.cond_val = u;
  a.loc = z;
  a.val = v;
  a.thread = t;
  return a;
}

A cli_def(LocId z, Val v, ThreadId t) {
  A a = mk(K::ClientDefinite);
  a.loc = z;
  a.val = v;
  a.thread = t;
  return a;
}

A commit_def(LocId z, Val v, ThreadId t) {
  A a = mk(K::CommitDefinite);
  a.loc = z;
  a.val = v;
  a.thread = t;
  return a;
}

A in_ws(int xh, Val v, ThreadId t) {
  A a = mk(K::InWS);
  a.tx_loc = xh;
  a.val_expr = Expr::literal(v);
  a.thread = t;
  return a;
}

A in_rs(int xh, Val v, ThreadId t) {
  A a = mk(K::InRS);
  a.tx_loc = xh;
  a.val_expr = Expr::literal(v);
  a.thread = t;
  return a;
}

A in_rs_reg(int xh, RegId r, ThreadId t) {
  A a = mk(K::InRS);
  a.tx_loc = xh;
  a.val_expr = Expr::regref(r);
  a.thread = t;
  return a;
}

A ws_empty(ThreadId t) {
  A a = mk(K::WSEmpty);
  a.thread = t;
  return a;
}

A rel_flag(ThreadId t) {
  A a = mk(K::RelFlag);
  a.thread = t;
  return a;
}

A acq_flag(ThreadId t) {
  A a = mk(K::AcqFlag);
  a.thread = t;
  return a;
}

A mem_val(int xh, Val v, int i) {
  A a = mk(K::MemVal);
  a.tx_loc = xh;
  a.val = v;
  a.idx_a.kind = IdxTerm::Kind::Lit;
  a.idx_a.lit = i;
  return a;
}

A never_written(int xh, Val v) {
  A a = mk(K::NeverWritten);
  a.tx_loc = xh;
  a.val = v;
  return a;
}

A status_is(ThreadId t, TxnStatus s) {
  A a = mk(K::StatusIs);
  a.thread = t;
  a.status = s;
  return a;
}

A begin_idx_is(ThreadId t, int i) {
  A a = mk(K::BeginIdxIs);
  a.thread = t;
  a.val = i;
  return a;
}

A mem_len_is(int n) {
  A a = mk(K::MemLenCmp);
  a.val = n;
  return a;
}

A reg_eq(RegId r, Val v) {
  A a = mk(K::RegPred);
  a.reg_pred.kind = BoolExpr::Kind::Eq;
  a.reg_pred.a = Expr::regref(r);
  a.reg_pred.b = Expr::literal(v);
  return a;
}

// ---------------------------------------------------------------------------
// Command application
// ---------------------------------------------------------------------------

enum class RuleCmd : uint8_t {
  TxBeginC, TxReadC, TxWriteC, TxEndC, ClientLoad, ClientStore,
};

/// An instantiation of a rule's metavariables.
struct Inst {
  ThreadId tau = 0, tau2 = 1;
  int xh = 0, yh = 1;    // transactional locations
  LocId y = 0, z = 1;    // client locations
  Val u = 0, v = 0, w = 0, l = 0, n2 = 0;
  int i = 0;             // memory index
  int n = 1;             // memory length
  RegId reg = -1;        // the thread's scaffold register
};

/// Every resolution of a command from c, including the Abort resolution for
/// transactional commands when `with_abort` is set.
std::vector<Configuration> apply_cmd(const LitmusProgram& p, const Configuration& c, RuleCmd cmd,
                                     const Inst& in, SyncFlag flag, bool with_abort) {
  std::vector<Configuration> out;
  const TMSpecState& spec = *c.spec;
  auto abort_res = [&]() {
    Configuration n = c;
    auto next = spec.tx_abort(in.tau, n.regs);
    if (next) {
      n.spec = std::move(*next);
      out.push_back(std::move(n));
    }
  };
  switch (cmd) {
    case RuleCmd::TxBeginC: {
      std::vector<RegId> regset;
      if (in.reg >= 0) regset.push_back(in.reg);
      for (int m : spec.visible_memories(in.tau)) {
        auto res = spec.tx_begin(in.tau, flag, m, regset);
        if (!res) continue;
        Configuration n = c;
        n.spec = std::move(res->state);
        out.push_back(std::move(n));
      }
      return out;
    }
    case RuleCmd::TxReadC: {
      if (spec.read_is_internal(in.tau, in.xh)) {
        if (auto res = spec.tx_read_internal(in.tau, in.xh)) {
          Configuration n = c;
          n.spec = std::move(res->first);
          if (in.reg >= 0) n.regs[in.reg] = res->second;
          out.push_back(std::move(n));
        }
      } else {
        for (int i : spec.valid_read_indices(in.tau, in.xh)) {
          auto res = spec.tx_read_external(in.tau, in.xh, i);
          if (!res) continue;
          Configuration n = c;
          n.spec = std::move(res->first);
          if (in.reg >= 0) n.regs[in.reg] = res->second;
          out.push_back(std::move(n));
        }
      }
      if (with_abort) abort_res();
      return out;
    }
    case RuleCmd::TxWriteC: {
      if (auto next = spec.tx_write(in.tau, in.xh, in.v)) {
        Configuration n = c;
        n.spec = std::move(*next);
        out.push_back(std::move(n));
      }
      if (with_abort) abort_res();
      return out;
    }
    case RuleCmd::TxEndC: {
      if (auto res = spec.tx_end_ro(in.tau, c.mem)) {
        Configuration n = c;
        n.spec = std::move(res->state);
        n.mem = std::move(res->client);
        out.push_back(std::move(n));
      }
      if (auto res = spec.tx_end_wr(in.tau, c.mem)) {
        Configuration n = c;
        n.spec = std::move(res->state);
        n.mem = std::move(res->client);
        out.push_back(std::move(n));
      }
      if (with_abort) abort_res();
      return out;
    }
    case RuleCmd::ClientLoad: {
      if (in.reg < 0 || c.reg_leased(Backend::Tms2Ra, in.reg, p)) return out;
      for (WriteId w : c.mem.observable_writes(in.tau, in.z)) {
        Configuration n = c;
        Val v = 0;
        n.mem = c.mem.mem_read(in.tau, w, false, &v);
        n.regs[in.reg] = v;
        out.push_back(std::move(n));
      }
      return out;
    }
    case RuleCmd::ClientStore: {
      for (int slot : c.mem.legal_write_slots(in.tau, in.z)) {
        Configuration n = c;
        n.mem = c.mem.mem_write(in.tau, in.z, in.w, slot, false, nullptr);
        out.push_back(std::move(n));
      }
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The rule table
// ---------------------------------------------------------------------------

struct Rule {
  std::string name;
  std::string description;
  bool falsified = false;
  RuleCmd cmd;
  SyncFlag begin_flag = SyncFlag::RX;  // TxBeginC only
  bool with_abort = false;             // include the Abort resolution
  // Enumerated metavariable axes; unused axes stay at defaults.
  bool vary_tau2 = false, vary_xh = false, vary_yh = false, vary_vals = false,
       vary_idx = false, need_three = false;
  std::function<A(const Inst&)> pre;
  std::function<A(const Inst&)> post;
  std::function<bool(const Inst&)> filter;  // side conditions on metavariables
};

std::vector<Rule> build_rules() {
  std::vector<Rule> rules;
  auto add = [&](Rule r) { rules.push_back(std::move(r)); };

  // --- Core write/transfer/read/commit rules ------------------------------

  add({.name = "core-write-enters-ws",
       .description = "{true} TxWrite(x,v) {(x,v) in WS}",
       .cmd = RuleCmd::TxWriteC,
       .vary_xh = true,
       .vary_vals = true,
       .pre = [](const Inst&) { return a_true(); },
       .post = [](const Inst& in) { return in_ws(in.xh, in.v, in.tau); }});

  add({.name = "core-release-transfer",
       .description =
           "a releasing commit of (x,u) transfers a conditional observation to other threads",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_tau2 = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_all({in_ws(in.xh, in.u, in.tau), rel_flag(in.tau),
                           a_not(tx_poss(in.xh, in.u, in.tau2)), cli_def(in.z, in.v, in.tau)});
           },
       .post = [](const Inst& in) { return tx_cond(in.xh, in.u, in.z, in.v, in.tau2); },
       .filter = [](const Inst& in) { return in.tau != in.tau2; }});

  add({.name = "core-acquire-read-conditional",
       .description = "an acquiring read under a conditional observation yields a commit-definite",
       .cmd = RuleCmd::TxReadC,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_all({a_not(in_ws(in.xh, in.u, in.tau)), acq_flag(in.tau),
                           ws_empty(in.tau), tx_cond(in.xh, in.u, in.z, in.v, in.tau)});
           },
       .post =
           [](const Inst& in) {
             return a_and(in_rs_reg(in.xh, in.reg, in.tau),
                          a_imp(reg_eq(in.reg, in.u), commit_def(in.z, in.v, in.tau)));
           }});

  add({.name = "core-commit-establishes-definite",
       .description = "committing under a commit-definite yields the definite value",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_and(in_rs_reg(in.xh, in.reg, in.tau),
                          a_imp(reg_eq(in.reg, in.u), commit_def(in.z, in.v, in.tau)));
           },
       .post =
           [](const Inst& in) {
             return a_imp(reg_eq(in.reg, in.u), cli_def(in.z, in.v, in.tau));
           }});

  // --- TxBegin ------------------------------------------------------------

  add({.name = "txbegin-keeps-notpossible",
       .description = "{![x ~ u]} TxBegin {![x ~ u]}",
       .cmd = RuleCmd::TxBeginC,
       .begin_flag = SyncFlag::RA,
       .vary_xh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return a_not(tx_poss(in.xh, in.u, in.tau)); },
       .post = [](const Inst& in) { return a_not(tx_poss(in.xh, in.u, in.tau)); }});

  add({.name = "txbegin-keeps-conditional",
       .description = "{<x=u>[z=v]} TxBegin {<x=u>[z=v]}",
       .cmd = RuleCmd::TxBeginC,
       .begin_flag = SyncFlag::RA,
       .vary_xh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return tx_cond(in.xh, in.u, in.z, in.v, in.tau); },
       .post = [](const Inst& in) { return tx_cond(in.xh, in.u, in.z, in.v, in.tau); }});

  add({.name = "txbegin-keeps-client-definite",
       .description = "{[z = u]} TxBegin {[z = u]}",
       .cmd = RuleCmd::TxBeginC,
       .begin_flag = SyncFlag::RA,
       .vary_vals = true,
       .pre = [](const Inst& in) { return cli_def(in.z, in.u, in.tau); },
       .post = [](const Inst& in) { return cli_def(in.z, in.u, in.tau); }});

  add({.name = "txbegin-sets-rel",
       .description = "{true} TxBegin(R) {Rel}",
       .cmd = RuleCmd::TxBeginC,
       .begin_flag = SyncFlag::R,
       .pre = [](const Inst&) { return a_true(); },
       .post = [](const Inst& in) { return rel_flag(in.tau); }});

  add({.name = "txbegin-sets-acq",
       .description = "{true} TxBegin(A) {Acq}",
       .cmd = RuleCmd::TxBeginC,
       .begin_flag = SyncFlag::A,
       .pre = [](const Inst&) { return a_true(); },
       .post = [](const Inst& in) { return acq_flag(in.tau); }});

  add({.name = "txbegin-keeps-other-ws",
       .description = "{(y,v) in WS@t'} TxBegin@t {(y,v) in WS@t'}",
       .cmd = RuleCmd::TxBeginC,
       .begin_flag = SyncFlag::RA,
       .vary_tau2 = true,
       .vary_yh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return in_ws(in.yh, in.v, in.tau2); },
       .post = [](const Inst& in) { return in_ws(in.yh, in.v, in.tau2); },
       .filter = [](const Inst& in) { return in.tau != in.tau2; }});

  // --- TxRead -------------------------------------------------------------

  add({.name = "txread-keeps-notpossible",
       .description = "{![x ~ u]} TxRead {![x ~ u]}",
       .cmd = RuleCmd::TxReadC,
       .vary_xh = true,
       .vary_yh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return a_not(tx_poss(in.yh, in.u, in.tau)); },
       .post = [](const Inst& in) { return a_not(tx_poss(in.yh, in.u, in.tau)); }});

  add({.name = "txread-keeps-other-definite",
       .description = "{[x = u]@t'} TxRead@t {status@t == ready => [x = u]@t'}",
       .cmd = RuleCmd::TxReadC,
       .with_abort = true,
       .vary_tau2 = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return tx_def(in.xh, in.u, in.tau2); },
       .post =
           [](const Inst& in) {
             return a_imp(status_is(in.tau, TxnStatus::Ready), tx_def(in.xh, in.u, in.tau2));
           }});

  add({.name = "txread-enters-rs",
       .description = "{WS = {}} TxRead(x,r) {(x,r) in RS}",
       .cmd = RuleCmd::TxReadC,
       .vary_xh = true,
       .pre = [](const Inst& in) { return ws_empty(in.tau); },
       .post = [](const Inst& in) { return in_rs_reg(in.xh, in.reg, in.tau); }});

  add({.name = "txread-result-possible",
       .description = "{x not in dom(WS)} TxRead(x,r) {[x ~ r]}",
       .cmd = RuleCmd::TxReadC,
       .vary_xh = true,
       .pre =
           [](const Inst& in) {
             // x outside the write set: encoded via no (x, w) entry for any w.
             A none = a_true();
             for (Val w = 0; w <= 3; ++w) none = a_and(std::move(none), a_not(in_ws(in.xh, w, in.tau)));
             return none;
           },
       .post =
           [](const Inst& in) {
             A a = mk(K::TxPossible);
             a.tx_loc = in.xh;
             a.thread = in.tau;
             a.val = -1;  // patched by the checker: compare against r
             return a;
           }});

  add({.name = "txread-definite-forces-value",
       .description = "{[x = u] /\\ x not in dom(WS)} TxRead(x,r) {r = u}",
       .cmd = RuleCmd::TxReadC,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             A none = a_true();
             for (Val w = 0; w <= 3; ++w) none = a_and(std::move(none), a_not(in_ws(in.xh, w, in.tau)));
             return a_and(tx_def(in.xh, in.u, in.tau), std::move(none));
           },
       .post = [](const Inst& in) { return reg_eq(in.reg, in.u); }});

  add({.name = "txread-keeps-own-ws",
       .description = "{(y,v) in WS} TxRead {(y,v) in WS}",
       .cmd = RuleCmd::TxReadC,
       .vary_xh = true,
       .vary_yh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return in_ws(in.yh, in.v, in.tau); },
       .post = [](const Inst& in) { return in_ws(in.yh, in.v, in.tau); }});

  add({.name = "txread-keeps-other-rs",
       .description = "{(y,v) in RS@t'} TxRead@t {(y,v) in RS@t'}",
       .cmd = RuleCmd::TxReadC,
       .vary_tau2 = true,
       .vary_xh = true,
       .vary_yh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return in_rs(in.yh, in.v, in.tau2); },
       .post = [](const Inst& in) { return in_rs(in.yh, in.v, in.tau2); },
       .filter = [](const Inst& in) { return in.tau != in.tau2; }});

  // --- TxWrite ------------------------------------------------------------

  add({.name = "txwrite-keeps-notpossible",
       .description = "{![x ~ u]} TxWrite {![x ~ u]}",
       .cmd = RuleCmd::TxWriteC,
       .vary_xh = true,
       .vary_yh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return a_not(tx_poss(in.yh, in.u, in.tau)); },
       .post = [](const Inst& in) { return a_not(tx_poss(in.yh, in.u, in.tau)); }});

  add({.name = "txwrite-keeps-client-definite",
       .description = "{[z = u]} TxWrite {[z = u]}",
       .cmd = RuleCmd::TxWriteC,
       .vary_vals = true,
       .pre = [](const Inst& in) { return cli_def(in.z, in.u, in.tau); },
       .post = [](const Inst& in) { return cli_def(in.z, in.u, in.tau); }});

  add({.name = "txwrite-keeps-conditional",
       .description = "{<x=u>[z=v] /\\ w != u} TxWrite(y,w) {<x=u>[z=v]}",
       .cmd = RuleCmd::TxWriteC,
       .vary_xh = true,
       .vary_yh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return tx_cond(in.yh, in.u, in.z, in.v, in.tau); },
       .post = [](const Inst& in) { return tx_cond(in.yh, in.u, in.z, in.v, in.tau); },
       .filter = [](const Inst& in) { return in.v != in.u; }});

  add({.name = "txwrite-keeps-other-loc-ws",
       .description = "{x != y /\\ (y,v) in WS} TxWrite(x,_) {(y,v) in WS}",
       .cmd = RuleCmd::TxWriteC,
       .vary_xh = true,
       .vary_yh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return in_ws(in.yh, in.u, in.tau); },
       .post = [](const Inst& in) { return in_ws(in.yh, in.u, in.tau); },
       .filter = [](const Inst& in) { return in.xh != in.yh; }});

  // --- TxEnd ---------------------------------------------------------------

  add({.name = "txend-ro-keeps-conditional",
       .description = "{<x=u>[z=v]@t' /\\ WS@t = {}} TxEnd@t {<x=u>[z=v]@t'}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_tau2 = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_and(tx_cond(in.xh, in.u, in.z, in.v, in.tau2), ws_empty(in.tau));
           },
       .post = [](const Inst& in) { return tx_cond(in.xh, in.u, in.z, in.v, in.tau2); }});

  add({.name = "txend-transfer-guarded",
       .description = "the guarded form of the releasing-transfer rule",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_tau2 = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_all({in_ws(in.xh, in.u, in.tau), a_not(tx_poss(in.xh, in.u, in.tau2)),
                           cli_def(in.z, in.v, in.tau), rel_flag(in.tau)});
           },
       .post =
           [](const Inst& in) {
             return a_imp(status_is(in.tau, TxnStatus::Committed),
                          tx_cond(in.xh, in.u, in.z, in.v, in.tau2));
           },
       .filter = [](const Inst& in) { return in.tau != in.tau2; }});

  add({.name = "txend-keeps-own-conditional",
       .description =
           "{<x=u>[z=v] /\\ (x,u) not in WS /\\ [z=v] /\\ Rel} TxEnd {<x=u>[z=v]}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_all({tx_cond(in.xh, in.u, in.z, in.v, in.tau),
                           a_not(in_ws(in.xh, in.u, in.tau)), rel_flag(in.tau),
                           cli_def(in.z, in.v, in.tau)});
           },
       .post = [](const Inst& in) { return tx_cond(in.xh, in.u, in.z, in.v, in.tau); }});

  add({.name = "txend-abort-keeps-conditional",
       .description = "{<x=u>[z=v]@t'} TxEnd@t {status@t == aborted => <x=u>[z=v]@t'}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_tau2 = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return tx_cond(in.xh, in.u, in.z, in.v, in.tau2); },
       .post =
           [](const Inst& in) {
             return a_imp(status_is(in.tau, TxnStatus::Aborted),
                          tx_cond(in.xh, in.u, in.z, in.v, in.tau2));
           }});

  add({.name = "txend-acquire-definite",
       .description =
           "{<x=u>[z=v] /\\ (x,u) in RS /\\ Acq /\\ WS = {}} TxEnd {committed => [z=v]}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_all({tx_cond(in.xh, in.u, in.z, in.v, in.tau), in_rs(in.xh, in.u, in.tau),
                           acq_flag(in.tau), ws_empty(in.tau)});
           },
       .post =
           [](const Inst& in) {
             return a_imp(status_is(in.tau, TxnStatus::Committed), cli_def(in.z, in.v, in.tau));
           }});

  add({.name = "txend-keeps-notpossible",
       .description = "{![x ~ u]@t' /\\ (x,u) not in WS@t} TxEnd@t {![x ~ u]@t'}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_tau2 = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_and(a_not(tx_poss(in.xh, in.u, in.tau2)),
                          a_not(in_ws(in.xh, in.u, in.tau)));
           },
       .post = [](const Inst& in) { return a_not(tx_poss(in.xh, in.u, in.tau2)); }});

  add({.name = "txend-keeps-own-client-definite",
       .description = "{[y = v]} TxEnd {[y = v]}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return cli_def(in.z, in.v, in.tau); },
       .post = [](const Inst& in) { return cli_def(in.z, in.v, in.tau); }});

  add({.name = "txend-nonacq-keeps-possible",
       .description = "{[x ~ u]@t' /\\ !Acq@t} TxEnd@t {[x ~ u]@t'}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_tau2 = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             A poss = mk(K::ClientPossible);
             poss.loc = in.z;
             poss.val = in.u;
             poss.thread = in.tau2;
             return a_and(std::move(poss), a_not(acq_flag(in.tau)));
           },
       .post =
           [](const Inst& in) {
             A poss = mk(K::ClientPossible);
             poss.loc = in.z;
             poss.val = in.u;
             poss.thread = in.tau2;
             return poss;
           }});

  add({.name = "txend-keeps-other-ws",
       .description = "{(y,v) in WS@t'} TxEnd@t {(y,v) in WS@t'}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_tau2 = true,
       .vary_yh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return in_ws(in.yh, in.v, in.tau2); },
       .post = [](const Inst& in) { return in_ws(in.yh, in.v, in.tau2); },
       .filter = [](const Inst& in) { return in.tau != in.tau2; }});

  // --- Client actions -----------------------------------------------------

  add({.name = "client-load-keeps-conditional",
       .description = "{<x=u>[z=v]@t'} r <-@t z' {<x=u>[z=v]@t'}",
       .cmd = RuleCmd::ClientLoad,
       .vary_tau2 = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return tx_cond(in.xh, in.u, in.z, in.v, in.tau2); },
       .post = [](const Inst& in) { return tx_cond(in.xh, in.u, in.z, in.v, in.tau2); }});

  add({.name = "client-store-keeps-conditional",
       .description = "{<x=u>[z=v] /\\ z != z'} z' :=@t w {<x=u>[z=v]}",
       .cmd = RuleCmd::ClientStore,
       .vary_xh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return tx_cond(in.xh, in.u, in.y, in.v, in.tau); },
       .post = [](const Inst& in) { return tx_cond(in.xh, in.u, in.y, in.v, in.tau); },
       .filter = [](const Inst& in) { return in.y != in.z; }});

  // --- Memory-value and never-written rules --------------------------------

  add({.name = "memval-stable-txbegin",
       .description = "{M[x=u]_i} TxBegin {M[x=u]_i}",
       .cmd = RuleCmd::TxBeginC,
       .begin_flag = SyncFlag::RA,
       .vary_xh = true,
       .vary_vals = true,
       .vary_idx = true,
       .pre = [](const Inst& in) { return mem_val(in.xh, in.u, in.i); },
       .post = [](const Inst& in) { return mem_val(in.xh, in.u, in.i); }});

  add({.name = "memval-stable-txread",
       .description = "{M[x=u]_i} TxRead {M[x=u]_i}",
       .cmd = RuleCmd::TxReadC,
       .vary_xh = true,
       .vary_vals = true,
       .vary_idx = true,
       .pre = [](const Inst& in) { return mem_val(in.xh, in.u, in.i); },
       .post = [](const Inst& in) { return mem_val(in.xh, in.u, in.i); }});

  add({.name = "memval-stable-txwrite",
       .description = "{M[x=u]_i} TxWrite {M[x=u]_i}",
       .cmd = RuleCmd::TxWriteC,
       .vary_xh = true,
       .vary_vals = true,
       .vary_idx = true,
       .pre = [](const Inst& in) { return mem_val(in.xh, in.u, in.i); },
       .post = [](const Inst& in) { return mem_val(in.xh, in.u, in.i); }});

  add({.name = "memval-commit-installs",
       .description = "{(x,u) in WS /\\ memlen == n} TxEnd {committed => M[x=u]_n}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_xh = true,
       .vary_vals = true,
       .vary_idx = true,
       .pre =
           [](const Inst& in) {
             return a_and(in_ws(in.xh, in.u, in.tau), mem_len_is(in.n));
           },
       .post =
           [](const Inst& in) {
             return a_imp(status_is(in.tau, TxnStatus::Committed), mem_val(in.xh, in.u, in.n));
           }});

  add({.name = "memval-stable-txend",
       .description = "{M[x=v]_i /\\ i < memlen - 1} TxEnd {M[x=v]_i}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_xh = true,
       .vary_vals = true,
       .vary_idx = true,
       .pre = [](const Inst& in) { return mem_val(in.xh, in.v, in.i); },
       .post = [](const Inst& in) { return mem_val(in.xh, in.v, in.i); }});

  add({.name = "memval-forced-read",
       .description =
           "two locations changed by the last commit force reads of the second to be fresh",
       .cmd = RuleCmd::TxReadC,
       .with_abort = true,
       .vary_vals = true,
       .vary_idx = true,
       .pre =
           [](const Inst& in) {
             // The command reads xh; yh is the location read previously.
             return a_all({mem_val(in.yh, in.u, in.i - 1), mem_val(in.yh, in.v, in.i),
                           mem_val(in.xh, in.l, in.i - 1), mem_val(in.xh, in.n2, in.i),
                           mem_len_is(in.i + 1), begin_idx_is(in.tau, in.i - 1),
                           in_rs(in.yh, in.v, in.tau), ws_empty(in.tau)});
           },
       .post =
           [](const Inst& in) {
             return a_imp(status_is(in.tau, TxnStatus::Ready), reg_eq(in.reg, in.n2));
           },
       .filter =
           [](const Inst& in) {
             return in.u != in.v && in.l != in.n2 && in.i >= 1;
           }});

  add({.name = "nw-implies-notpossible",
       .description = "{NW[x,v]} TxBegin {![x ~ v]@t'}",
       .cmd = RuleCmd::TxBeginC,
       .begin_flag = SyncFlag::RA,
       .vary_tau2 = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return never_written(in.xh, in.v); },
       .post = [](const Inst& in) { return a_not(tx_poss(in.xh, in.v, in.tau2)); }});

  add({.name = "nw-stable-txbegin",
       .description = "{NW[x,v]} TxBegin {NW[x,v]}",
       .cmd = RuleCmd::TxBeginC,
       .begin_flag = SyncFlag::RA,
       .vary_xh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return never_written(in.xh, in.v); },
       .post = [](const Inst& in) { return never_written(in.xh, in.v); }});

  add({.name = "nw-stable-txread",
       .description = "{NW[x,v]} TxRead {NW[x,v]}",
       .cmd = RuleCmd::TxReadC,
       .vary_xh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return never_written(in.xh, in.v); },
       .post = [](const Inst& in) { return never_written(in.xh, in.v); }});

  add({.name = "nw-stable-txwrite",
       .description = "{NW[x,v]} TxWrite {NW[x,v]}",
       .cmd = RuleCmd::TxWriteC,
       .vary_xh = true,
       .vary_yh = true,
       .vary_vals = true,
       .pre = [](const Inst& in) { return never_written(in.yh, in.v); },
       .post = [](const Inst& in) { return never_written(in.yh, in.v); }});

  add({.name = "nw-stable-txend",
       .description = "{NW[x,v] /\\ (x,v) not in WS} TxEnd {NW[x,v]}",
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_and(never_written(in.xh, in.v), a_not(in_ws(in.xh, in.v, in.tau)));
           },
       .post = [](const Inst& in) { return never_written(in.xh, in.v); }});

  // --- Deliberately falsified schemas --------------------------------------

  add({.name = "falsified-transfer-no-rel",
       .description = "the transfer rule with the Rel hypothesis dropped (must be refuted)",
       .falsified = true,
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_tau2 = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_all({in_ws(in.xh, in.u, in.tau), a_not(tx_poss(in.xh, in.u, in.tau2)),
                           cli_def(in.z, in.v, in.tau)});
           },
       .post =
           [](const Inst& in) {
             return a_imp(status_is(in.tau, TxnStatus::Committed),
                          tx_cond(in.xh, in.u, in.z, in.v, in.tau2));
           },
       .filter = [](const Inst& in) { return in.tau != in.tau2; }});

  add({.name = "falsified-definite-no-acq",
       .description = "the acquiring-commit rule with the Acq hypothesis dropped (must be refuted)",
       .falsified = true,
       .cmd = RuleCmd::TxEndC,
       .with_abort = true,
       .vary_xh = true,
       .vary_vals = true,
       .pre =
           [](const Inst& in) {
             return a_all({tx_cond(in.xh, in.u, in.z, in.v, in.tau), in_rs(in.xh, in.u, in.tau),
                           ws_empty(in.tau)});
           },
       .post =
           [](const Inst& in) {
             return a_imp(status_is(in.tau, TxnStatus::Committed), cli_def(in.z, in.v, in.tau));
           }});

  return rules;
}

const std::vector<Rule>& rules() {
  static const std::vector<Rule> r = build_rules();
  return r;
}

RegId scaffold_reg(const LitmusProgram& p, ThreadId t) {
  static const char* names[] = {"a", "b", "e"};
  if (t >= 0 && t < 3) {
    int r = p.sym.find_reg(names[t]);
    if (r >= 0 && p.sym.reg_owner[r] == t) return r;
  }
  return -1;
}

RuleOutcome run_rule(const Rule& rule, const RuleBounds& bounds) {
  RuleOutcome out;
  out.name = rule.name;
  out.falsified = rule.falsified;
  AssertOptions aopt;

  for (const PoolEntry& entry : scaffold_pool()) {
    const LitmusProgram& p = *entry.program;
    int nthreads = p.num_threads();
    std::vector<Inst> insts;
    for (ThreadId tau = 0; tau < nthreads; ++tau) {
      for (ThreadId tau2 = 0; tau2 < (rule.vary_tau2 ? nthreads : 1); ++tau2) {
        for (int xh = 0; xh < (rule.vary_xh ? 2 : 1); ++xh) {
          for (int yh = 0; yh < (rule.vary_yh ? 2 : 1); ++yh) {
            for (Val u = 0; u <= (rule.vary_vals ? bounds.max_val : 0); ++u) {
              for (Val v = 0; v <= (rule.vary_vals ? bounds.max_val : 0); ++v) {
                for (int i = 0; i <= (rule.vary_idx ? bounds.max_mem_idx : 0); ++i) {
                  for (int zl = 0; zl < (rule.vary_vals ? 2 : 1); ++zl) {
                    Inst in;
                    in.tau = tau;
                    in.tau2 = rule.vary_tau2 ? tau2 : (tau + 1) % nthreads;
                    in.xh = xh;
                    in.yh = rule.vary_yh ? yh : 1 - xh;
                    in.z = zl;
                    in.y = 1 - zl;
                    in.u = u;
                    in.v = v;
                    in.w = (u + 1) % (bounds.max_val + 1);
                    in.l = (u + 2) % (bounds.max_val + 1);
                    in.n2 = (v + 2) % (bounds.max_val + 1);
                    in.i = i;
                    in.n = i + 1;
                    in.reg = scaffold_reg(p, tau);
                    if (rule.filter && !rule.filter(in)) continue;
                    insts.push_back(in);
                  }
                }
              }
            }
          }
        }
      }
    }

    for (const Configuration& c : entry.configs) {
      for (const Inst& in : insts) {
        A pre = rule.pre(in);
        if (!eval_assertion(pre, p, Backend::Tms2Ra, c, aopt)) continue;
        auto posts = apply_cmd(p, c, rule.cmd, in, rule.begin_flag, rule.with_abort);
        for (const Configuration& post_c : posts) {
          A post = rule.post(in);
          // The read-result rule compares the memory against the register
          // value produced by this resolution.
          if (rule.name == "txread-result-possible") {
            if (in.reg < 0 || !post_c.regs[in.reg]) continue;
            post.val = *post_c.regs[in.reg];
          }
          if (!eval_assertion(post, p, Backend::Tms2Ra, post_c, aopt)) {
            out.held = false;
            std::ostringstream os;
            os << "rule " << rule.name << " violated (tau=" << p.sym.threads[in.tau]
               << ", x=" << p.sym.tx_locs[in.xh] << ", u=" << in.u << ", v=" << in.v << ")";
            out.counterexample = os.str();
            return out;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

const std::vector<RuleInfo>& rule_catalogue() {
  static const std::vector<RuleInfo> info = [] {
    std::vector<RuleInfo> out;
    for (const Rule& r : rules()) out.push_back({r.name, r.description, r.falsified});
    return out;
  }();
  return info;
}

RuleOutcome check_rule(const std::string& name, const RuleBounds& bounds) {
  for (const Rule& r : rules())
    if (r.name == name) return run_rule(r, bounds);
  throw ApiError("unknown rule '" + name + "'");
}

std::vector<RuleOutcome> check_all_rules(const RuleBounds& bounds) {
  std::vector<RuleOutcome> out;
  for (const Rule& r : rules()) out.push_back(run_rule(r, bounds));
  return out;
}

}  // namespace ratm
