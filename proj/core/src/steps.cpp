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

#include <sstream>

#include "ratm/program.hpp"

namespace ratm {

namespace {

std::optional<Val> eval_expr(const Configuration& c, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Lit:
      return e.lit;
    case Expr::Kind::Reg:
      return c.regs[e.reg];
    case Expr::Kind::Add: {
      auto a = eval_expr(c, *e.lhs), b = eval_expr(c, *e.rhs);
      if (!a || !b) return std::nullopt;
      return *a + *b;
    }
    case Expr::Kind::Sub: {
      auto a = eval_expr(c, *e.lhs), b = eval_expr(c, *e.rhs);
      if (!a || !b) return std::nullopt;
      return *a - *b;
    }
  }
  return std::nullopt;
}

// Three-valued atom evaluation shared by guards and postconditions:
// nullopt when a poisoned register is involved.
std::optional<bool> eval_atom(const Configuration& c, const BoolExpr& e) {
  auto a = eval_expr(c, e.a);
  if (!a) return std::nullopt;
  switch (e.kind) {
    case BoolExpr::Kind::InSet: {
      for (Val v : e.set)
        if (*a == v) return true;
      return false;
    }
    default: break;
  }
  auto b = eval_expr(c, e.b);
  if (!b) return std::nullopt;
  switch (e.kind) {
    case BoolExpr::Kind::Eq: return *a == *b;
    case BoolExpr::Kind::Ne: return *a != *b;
    case BoolExpr::Kind::Lt: return *a < *b;
    case BoolExpr::Kind::Le: return *a <= *b;
    default: throw ApiError("eval_atom on a non-atom");
  }
}

}  // namespace

std::optional<bool> eval_guard(const Configuration& c, const BoolExpr& e) {
  switch (e.kind) {
    case BoolExpr::Kind::True: return true;
    case BoolExpr::Kind::And: {
      auto a = eval_guard(c, *e.l), b = eval_guard(c, *e.r);
      if (!a || !b) return std::nullopt;
      return *a && *b;
    }
    case BoolExpr::Kind::Or: {
      auto a = eval_guard(c, *e.l), b = eval_guard(c, *e.r);
      if (!a || !b) return std::nullopt;
      return *a || *b;
    }
    case BoolExpr::Kind::Not: {
      auto a = eval_guard(c, *e.l);
      if (!a) return std::nullopt;
      return !*a;
    }
    case BoolExpr::Kind::Imp: {
      auto a = eval_guard(c, *e.l), b = eval_guard(c, *e.r);
      if (!a || !b) return std::nullopt;
      return !*a || *b;
    }
    default: return eval_atom(c, e);
  }
}

bool eval_post(const Configuration& c, const BoolExpr& e) {
  switch (e.kind) {
    case BoolExpr::Kind::True: return true;
    case BoolExpr::Kind::And: return eval_post(c, *e.l) && eval_post(c, *e.r);
    case BoolExpr::Kind::Or: return eval_post(c, *e.l) || eval_post(c, *e.r);
    case BoolExpr::Kind::Not: return !eval_post(c, *e.l);
    case BoolExpr::Kind::Imp: return !eval_post(c, *e.l) || eval_post(c, *e.r);
    default: return eval_atom(c, e).value_or(false);
  }
}

namespace {

Action make_action(Action::Kind k, ThreadId t, int loc, Val v, int aux, std::string text) {
  Action a;
  a.kind = k;
  a.thread = t;
  a.loc = loc;
  a.val = v;
  a.aux = aux;
  a.text = std::move(text);
  return a;
}

void fire_ghosts(Configuration& c, const LabelledCommand& lc) {
  for (const GhostAssign& g : lc.on_tx_exit) c.ghosts[g.ghost] = g.value;
}

// ---------------------------------------------------------------------------
// Plain C11 commands (shared by every backend for non-transactional steps).
// ---------------------------------------------------------------------------

void client_step_successors(const LitmusProgram& p, const Configuration& c, ThreadId t,
                            const LabelledCommand& lc, std::vector<Successor>* out) {
  const AtomicCommand& cmd = lc.cmd;
  switch (cmd.kind) {
    case AtomicCommand::Kind::RegAssign: {
      auto v = eval_expr(c, cmd.expr);
      if (!v) return;  // poisoned operand: the thread sticks
      Configuration n = c;
      n.regs[cmd.reg] = *v;
      n.pc[t] = lc.next;
      out->push_back({t, make_action(Action::Kind::RegAssign, t, -1, *v, -1,
                                     p.sym.regs[cmd.reg] + ":=" + std::to_string(*v)),
                      std::move(n)});
      return;
    }
    case AtomicCommand::Kind::Store: {
      auto v = eval_expr(c, cmd.expr);
      if (!v) return;
      for (int slot : c.mem.legal_write_slots(t, cmd.loc)) {
        Configuration n = c;
        WriteId w = -1;
        n.mem = c.mem.mem_write(t, cmd.loc, *v, slot, is_releasing(cmd.flag), &w);
        n.pc[t] = lc.next;
        out->push_back({t, make_action(Action::Kind::ClientWrite, t, cmd.loc, *v, slot,
                                       p.sym.client_locs[cmd.loc] + ":=" + std::to_string(*v)),
                        std::move(n)});
      }
      return;
    }
    case AtomicCommand::Kind::Load: {
      for (WriteId w : c.mem.observable_writes(t, cmd.loc)) {
        Configuration n = c;
        Val v = 0;
        n.mem = c.mem.mem_read(t, w, is_acquiring(cmd.flag), &v);
        n.regs[cmd.reg] = v;
        n.pc[t] = lc.next;
        out->push_back({t, make_action(Action::Kind::ClientRead, t, cmd.loc, v, w,
                                       p.sym.regs[cmd.reg] + "<-" + p.sym.client_locs[cmd.loc] +
                                           "=" + std::to_string(v)),
                        std::move(n)});
      }
      return;
    }
    case AtomicCommand::Kind::Cas: {
      auto u = eval_expr(c, cmd.cas_expected);
      auto v = eval_expr(c, cmd.cas_new);
      if (!u || !v) return;
      for (WriteId w : c.mem.observable_writes(t, cmd.loc)) {
        if (c.mem.write(w).val == *u && !c.mem.covered(w)) {
          Configuration n = c;
          WriteId fresh = -1;
          n.mem = c.mem.mem_rmw(t, cmd.loc, *u, *v, w, is_releasing(cmd.flag),
                                is_acquiring(cmd.flag), &fresh);
          n.regs[cmd.reg] = 1;
          n.pc[t] = lc.next;
          out->push_back({t, make_action(Action::Kind::CasSuccess, t, cmd.loc, *v, w, "cas-ok"),
                          std::move(n)});
        } else if (c.mem.write(w).val != *u) {
          Configuration n = c;
          n.mem = c.mem.mem_read(t, w, is_acquiring(cmd.flag), nullptr);
          n.regs[cmd.reg] = 0;
          n.pc[t] = lc.next;
          out->push_back(
              {t, make_action(Action::Kind::CasFail, t, cmd.loc, c.mem.write(w).val, w, "cas-fail"),
               std::move(n)});
        }
      }
      return;
    }
    default:
      throw ApiError("transactional command reached the plain-step dispatcher");
  }
}

// ---------------------------------------------------------------------------
// TMS2-RA backend.
// ---------------------------------------------------------------------------

void tms_abort_successor(const Configuration& c, ThreadId t, const LabelledCommand& lc,
                         std::vector<Successor>* out) {
  Configuration n = c;
  auto next = c.spec->tx_abort(t, n.regs);
  if (!next) return;
  n.spec = std::move(*next);
  n.pc[t] = lc.abort_next;
  fire_ghosts(n, lc);
  out->push_back({t, make_action(Action::Kind::TxAbort, t, -1, 0, -1, "txabort"), std::move(n)});
}

void tms_step_successors(const LitmusProgram& p, const Configuration& c, ThreadId t,
                         const LabelledCommand& lc, const StepOptions& opt,
                         std::vector<Successor>* out) {
  const AtomicCommand& cmd = lc.cmd;
  const TMSpecState& spec = *c.spec;
  size_t before = out->size();
  switch (cmd.kind) {
    case AtomicCommand::Kind::TxBegin: {
      for (int m : spec.visible_memories(t)) {
        auto res = spec.tx_begin(t, cmd.flag, m, cmd.reg_set);
        if (!res) continue;
        Configuration n = c;
        n.spec = std::move(res->state);
        n.pc[t] = lc.next;
        out->push_back({t, make_action(Action::Kind::TxBegin, t, -1, 0, m, "txbegin"), std::move(n)});
      }
      return;  // no live txn yet, no abort branch
    }
    case AtomicCommand::Kind::TxRead: {
      if (spec.read_is_internal(t, cmd.tx_loc)) {
        if (auto res = spec.tx_read_internal(t, cmd.tx_loc)) {
          Configuration n = c;
          n.spec = std::move(res->first);
          n.regs[cmd.reg] = res->second;
          n.pc[t] = lc.next;
          out->push_back({t, make_action(Action::Kind::TxReadInt, t, cmd.tx_loc, res->second, -1,
                                         "txread-int"),
                          std::move(n)});
        }
      } else {
        for (int i : spec.valid_read_indices(t, cmd.tx_loc)) {
          auto res = spec.tx_read_external(t, cmd.tx_loc, i);
          if (!res) continue;
          Configuration n = c;
          n.spec = std::move(res->first);
          n.regs[cmd.reg] = res->second;
          n.pc[t] = lc.next;
          out->push_back({t, make_action(Action::Kind::TxReadExt, t, cmd.tx_loc, res->second, i,
                                         "txread-ext"),
                          std::move(n)});
        }
      }
      break;
    }
    case AtomicCommand::Kind::TxWrite: {
      auto v = eval_expr(c, cmd.expr);
      if (!v) return;
      if (auto next = spec.tx_write(t, cmd.tx_loc, *v)) {
        Configuration n = c;
        n.spec = std::move(*next);
        n.pc[t] = lc.next;
        out->push_back(
            {t, make_action(Action::Kind::TxWrite, t, cmd.tx_loc, *v, -1, "txwrite"), std::move(n)});
      }
      break;
    }
    case AtomicCommand::Kind::TxEnd: {
      if (auto res = spec.tx_end_ro(t, c.mem)) {
        Configuration n = c;
        n.spec = std::move(res->state);
        n.mem = std::move(res->client);
        n.pc[t] = lc.next;
        fire_ghosts(n, lc);
        out->push_back(
            {t, make_action(Action::Kind::TxCommitRO, t, -1, 0, -1, "txcommit-ro"), std::move(n)});
      }
      if (auto res = spec.tx_end_wr(t, c.mem)) {
        Configuration n = c;
        n.spec = std::move(res->state);
        n.mem = std::move(res->client);
        n.pc[t] = lc.next;
        fire_ghosts(n, lc);
        out->push_back(
            {t, make_action(Action::Kind::TxCommitWR, t, -1, 0, -1, "txcommit-wr"), std::move(n)});
      }
      break;
    }
    default:
      client_step_successors(p, c, t, lc, out);
      return;
  }
  // Spontaneous abort is always available to a live transaction; it is also
  // the forced exit when every other resolution is disabled.
  if (opt.explore_aborts || out->size() == before) tms_abort_successor(c, t, lc, out);
}

// ---------------------------------------------------------------------------
// TML-RA backend: the lock algorithm as atomic labelled steps.
// ---------------------------------------------------------------------------

struct TmlCtx {
  const LitmusProgram& p;
  const StepOptions& opt;
  ThreadId t;
};

void tml_finish_read_write(const TmlCtx& ctx, Configuration n, Action::Kind kind, Val val,
                           std::vector<Successor>* out) {
  const LabelledCommand& lc = ctx.p.threads[ctx.t].code[n.pc[ctx.t]];
  TmlThread& mt = n.tml[ctx.t];
  TmlThread fresh;
  fresh.in_txn = true;
  fresh.loc_snap = mt.loc_snap;
  fresh.has_read = mt.has_read;
  fresh.has_written = mt.has_written;
  fresh.regs = mt.regs;
  n.tml[ctx.t] = std::move(fresh);
  n.pc[ctx.t] = lc.next;
  out->push_back({ctx.t, make_action(kind, ctx.t, -1, val, -1, "tml-op-done"), std::move(n)});
}

void tml_commit(const TmlCtx& ctx, Configuration n, std::vector<Successor>* out) {
  const LabelledCommand& lc = ctx.p.threads[ctx.t].code[n.pc[ctx.t]];
  n.tml[ctx.t] = TmlThread{};
  n.tml_status[ctx.t] = TxnStatus::Committed;
  n.pc[ctx.t] = lc.next;
  fire_ghosts(n, lc);
  out->push_back({ctx.t, make_action(Action::Kind::TmlCommit, ctx.t, -1, 0, -1, "tml-commit"),
                  std::move(n)});
}

void tml_abort(const TmlCtx& ctx, Configuration n, std::vector<Successor>* out) {
  const LabelledCommand& lc = ctx.p.threads[ctx.t].code[n.pc[ctx.t]];
  for (RegId r : n.tml[ctx.t].regs) n.regs[r] = std::nullopt;
  n.tml[ctx.t] = TmlThread{};
  n.tml_status[ctx.t] = TxnStatus::Aborted;
  n.pc[ctx.t] = lc.abort_next;
  fire_ghosts(n, lc);
  out->push_back(
      {ctx.t, make_action(Action::Kind::TmlAbort, ctx.t, -1, 0, -1, "tml-abort"), std::move(n)});
}

void tml_micro_successors(const TmlCtx& ctx, const Configuration& c, std::vector<Successor>* out) {
  const ThreadId t = ctx.t;
  const TmlThread& mt = c.tml[t];
  const LocId glb = ctx.p.tml_glb_loc();
  const TmlMutations& mut = ctx.opt.mutations;

  auto local = [&](TmlPc next, auto&& update) {
    Configuration n = c;
    update(n.tml[t]);
    n.tml[t].pc = next;
    out->push_back({t, make_action(Action::Kind::TmlStep, t, -1, 0, -1, to_string(mt.pc)),
                    std::move(n)});
  };

  switch (mt.pc) {
    case TmlPc::Idle:
      throw ApiError("tml micro step on an idle thread");

    case TmlPc::B1:
      local(TmlPc::B2, [](TmlThread&) {});
      return;
    case TmlPc::B2:
      local(TmlPc::B3, [](TmlThread& m) { m.has_read = false; m.has_written = false; });
      return;
    case TmlPc::B3: {
      for (WriteId w : c.mem.observable_writes(t, glb)) {
        Configuration n = c;
        Val v = 0;
        n.mem = c.mem.mem_read(t, w, !mut.drop_b3_acquire, &v);
        n.tml[t].loc_snap = v;
        n.tml[t].pc = TmlPc::B4;
        out->push_back({t, make_action(Action::Kind::TmlStep, t, glb, v, w, "B3"), std::move(n)});
      }
      return;
    }
    case TmlPc::B4: {
      if (mt.loc_snap % 2 == 0) {
        Configuration n = c;
        const LabelledCommand& lc = ctx.p.threads[t].code[n.pc[t]];
        TmlThread fresh;
        fresh.in_txn = true;
        fresh.loc_snap = mt.loc_snap;
        fresh.regs = mt.regs;
        n.tml[t] = std::move(fresh);
        n.tml_status[t] = TxnStatus::Ready;
        n.pc[t] = lc.next;
        out->push_back({t, make_action(Action::Kind::TmlBeginDone, t, -1, mt.loc_snap, -1,
                                       "tml-begin-done"),
                        std::move(n)});
      } else {
        local(TmlPc::B3, [](TmlThread&) {});
      }
      return;
    }

    case TmlPc::W1:
      local(mt.loc_snap % 2 == 0 ? TmlPc::W2 : TmlPc::W6, [](TmlThread&) {});
      return;
    case TmlPc::W2: {
      for (WriteId w : c.mem.observable_writes(t, glb)) {
        if (c.mem.write(w).val == mt.loc_snap && !c.mem.covered(w)) {
          Configuration n = c;
          n.mem = c.mem.mem_rmw(t, glb, mt.loc_snap, mt.loc_snap + 1, w, true, true, nullptr);
          n.tml[t].cas_ok = true;
          n.tml[t].pc = TmlPc::W3;
          out->push_back({t, make_action(Action::Kind::TmlStep, t, glb, mt.loc_snap + 1, w, "W2"),
                          std::move(n)});
        } else if (c.mem.write(w).val != mt.loc_snap) {
          Configuration n = c;
          n.mem = c.mem.mem_read(t, w, true, nullptr);
          n.tml[t].cas_ok = false;
          n.tml[t].pc = TmlPc::W3;
          out->push_back({t, make_action(Action::Kind::TmlStep, t, glb, c.mem.write(w).val, w,
                                         "W2-fail"),
                          std::move(n)});
        }
      }
      return;
    }
    case TmlPc::W3:
      local(mt.cas_ok ? TmlPc::W5 : TmlPc::W4, [](TmlThread&) {});
      return;
    case TmlPc::W4:
      tml_abort(ctx, c, out);
      return;
    case TmlPc::W5:
      local(TmlPc::W6, [](TmlThread& m) { m.loc_snap += 1; });
      return;
    case TmlPc::W6: {
      for (int slot : c.mem.legal_write_slots(t, mt.arg_loc)) {
        Configuration n = c;
        n.mem = c.mem.mem_write(t, mt.arg_loc, mt.arg_val, slot, true, nullptr);
        n.tml[t].has_written = true;
        tml_finish_read_write(ctx, std::move(n), Action::Kind::TmlWriteDone, mt.arg_val, out);
      }
      return;
    }

    case TmlPc::E1:
      if (mt.loc_snap % 2 != 0) {
        local(TmlPc::E2, [](TmlThread&) {});
      } else {
        tml_commit(ctx, c, out);
      }
      return;
    case TmlPc::E2: {
      for (int slot : c.mem.legal_write_slots(t, glb)) {
        Configuration n = c;
        n.mem = c.mem.mem_write(t, glb, mt.loc_snap + 1, slot, !mut.drop_e2_release, nullptr);
        tml_commit(ctx, std::move(n), out);
      }
      return;
    }

    case TmlPc::R1:
      local(TmlPc::R2, [](TmlThread&) {});
      return;
    case TmlPc::R2: {
      for (WriteId w : c.mem.observable_writes(t, mt.arg_loc)) {
        Configuration n = c;
        Val v = 0;
        n.mem = c.mem.mem_read(t, w, true, &v);
        n.regs[mt.arg_reg] = v;
        n.tml[t].pc = TmlPc::R3;
        out->push_back(
            {t, make_action(Action::Kind::TmlStep, t, mt.arg_loc, v, w, "R2"), std::move(n)});
      }
      return;
    }
    case TmlPc::R3:
      local(!mt.has_read && mt.loc_snap % 2 == 0 ? TmlPc::R4 : TmlPc::R9, [](TmlThread&) {});
      return;
    case TmlPc::R4: {
      if (mut.r4_plain_read) {
        for (WriteId w : c.mem.observable_writes(t, glb)) {
          Configuration n = c;
          Val v = 0;
          n.mem = c.mem.mem_read(t, w, true, &v);
          n.tml[t].cas_ok = (v == mt.loc_snap);
          n.tml[t].pc = TmlPc::R5;
          out->push_back(
              {t, make_action(Action::Kind::TmlStep, t, glb, v, w, "R4-read"), std::move(n)});
        }
        return;
      }
      for (WriteId w : c.mem.observable_writes(t, glb)) {
        if (c.mem.write(w).val == mt.loc_snap && !c.mem.covered(w)) {
          Configuration n = c;
          n.mem = c.mem.mem_rmw(t, glb, mt.loc_snap, mt.loc_snap, w, true, true, nullptr);
          n.tml[t].cas_ok = true;
          n.tml[t].pc = TmlPc::R5;
          out->push_back(
              {t, make_action(Action::Kind::TmlStep, t, glb, mt.loc_snap, w, "R4"), std::move(n)});
        } else if (c.mem.write(w).val != mt.loc_snap) {
          Configuration n = c;
          n.mem = c.mem.mem_read(t, w, true, nullptr);
          n.tml[t].cas_ok = false;
          n.tml[t].pc = TmlPc::R5;
          out->push_back({t, make_action(Action::Kind::TmlStep, t, glb, c.mem.write(w).val, w,
                                         "R4-fail"),
                          std::move(n)});
        }
      }
      return;
    }
    case TmlPc::R5:
      local(mt.cas_ok ? TmlPc::R6 : TmlPc::R12, [](TmlThread&) {});
      return;
    case TmlPc::R6:
      local(TmlPc::R7, [](TmlThread& m) { m.has_read = true; });
      return;
    case TmlPc::R7:
      tml_finish_read_write(ctx, c, Action::Kind::TmlReadDone, 0, out);
      return;
    case TmlPc::R9: {
      for (WriteId w : c.mem.observable_writes(t, glb)) {
        Configuration n = c;
        Val v = 0;
        n.mem = c.mem.mem_read(t, w, false, &v);
        n.tml[t].glb_snap = v;
        n.tml[t].pc = TmlPc::R10;
        out->push_back({t, make_action(Action::Kind::TmlStep, t, glb, v, w, "R9"), std::move(n)});
      }
      return;
    }
    case TmlPc::R10: {
      bool ok = mt.glb_snap == mt.loc_snap;
      if (mut.weaken_r10 && mt.glb_snap == mt.loc_snap + 2) ok = true;
      local(ok ? TmlPc::R11 : TmlPc::R12, [](TmlThread&) {});
      return;
    }
    case TmlPc::R11:
      tml_finish_read_write(ctx, c, Action::Kind::TmlReadDone, 0, out);
      return;
    case TmlPc::R12:
      tml_abort(ctx, c, out);
      return;
  }
}

void tml_dispatch(const TmlCtx& ctx, const Configuration& c, const LabelledCommand& lc,
                  std::vector<Successor>* out) {
  const AtomicCommand& cmd = lc.cmd;
  Configuration staged = c;
  TmlThread& mt = staged.tml[ctx.t];
  switch (cmd.kind) {
    case AtomicCommand::Kind::TxBegin:
      mt.op = TmlThread::Op::Begin;
      mt.regs = cmd.reg_set;
      mt.pc = TmlPc::B1;
      break;
    case AtomicCommand::Kind::TxRead:
      if (!mt.in_txn) throw ApiError("TxRead outside a transaction");
      mt.op = TmlThread::Op::Read;
      mt.arg_loc = ctx.p.tml_beta_loc(cmd.tx_loc);
      mt.arg_reg = cmd.reg;
      mt.pc = TmlPc::R1;
      break;
    case AtomicCommand::Kind::TxWrite: {
      if (!mt.in_txn) throw ApiError("TxWrite outside a transaction");
      auto v = eval_expr(c, cmd.expr);
      if (!v) return;
      mt.op = TmlThread::Op::Write;
      mt.arg_loc = ctx.p.tml_beta_loc(cmd.tx_loc);
      mt.arg_val = *v;
      mt.pc = TmlPc::W1;
      break;
    }
    case AtomicCommand::Kind::TxEnd:
      if (!mt.in_txn) throw ApiError("TxEnd outside a transaction");
      mt.op = TmlThread::Op::End;
      mt.pc = TmlPc::E1;
      break;
    default:
      client_step_successors(ctx.p, c, ctx.t, lc, out);
      return;
  }
  // The first labelled line of the operation is the first atomic step.
  tml_micro_successors(ctx, staged, out);
}

void if_successor(const Configuration& c, ThreadId t, const LabelledCommand& lc,
                  const StepOptions& opt, std::vector<Successor>* out) {
  auto g = eval_guard(c, lc.cond);
  if (!g) return;  // poison in the guard: the thread sticks
  Configuration n = c;
  bool back = *g ? lc.back_edge_on_then : lc.back_edge_on_else;
  n.pc[t] = *g ? lc.then_label : lc.else_label;
  bool exhausted = false;
  if (back) {
    n.loop_count[t] += 1;
    exhausted = n.loop_count[t] > opt.retry_budget;
  }
  out->push_back({t, make_action(Action::Kind::IfBranch, t, -1, *g ? 1 : 0, n.pc[t], "if"),
                  std::move(n), exhausted});
}

}  // namespace

std::vector<Successor> enabled_steps(const LitmusProgram& p, Backend b, const Configuration& c,
                                     const StepOptions& opt) {
  std::vector<Successor> out;
  for (ThreadId t = 0; t < p.num_threads(); ++t) {
    if (b == Backend::TmlRa && c.tml[t].pc != TmlPc::Idle) {
      tml_micro_successors({p, opt, t}, c, &out);
      continue;
    }
    if (c.pc[t] >= p.threads[t].terminal()) continue;
    const LabelledCommand& lc = p.threads[t].code[c.pc[t]];
    if (lc.kind == LabelledCommand::Kind::If) {
      if_successor(c, t, lc, opt, &out);
      continue;
    }
    switch (b) {
      case Backend::Plain:
        client_step_successors(p, c, t, lc, &out);
        break;
      case Backend::Tms2Ra:
        tms_step_successors(p, c, t, lc, opt, &out);
        break;
      case Backend::TmlRa:
        tml_dispatch({p, opt, t}, c, lc, &out);
        break;
    }
  }
  return out;
}

}  // namespace ratm
