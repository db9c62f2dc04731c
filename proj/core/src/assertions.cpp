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

#include "ratm/assertions.hpp"

#include <algorithm>

namespace ratm {

namespace {

struct EvalCtx {
  const LitmusProgram& p;
  Backend backend;
  const Configuration& c;
  const AssertOptions& opt;
  std::vector<int> idx_env;
};

const TMSpecState& spec_of(const EvalCtx& ctx) {
  if (ctx.backend != Backend::Tms2Ra || !ctx.c.spec)
    throw ApiError("transactional assertion on a non-TMS2-RA configuration");
  return *ctx.c.spec;
}

bool client_definite(const EvalCtx& ctx, ThreadId t, LocId x, Val v) {
  for (Val ov : ctx.c.mem.observable_values(t, x))
    if (ov != v) return false;
  return true;
}

bool client_possible(const EvalCtx& ctx, ThreadId t, LocId x, Val v) {
  auto vals = ctx.c.mem.observable_values(t, x);
  return std::find(vals.begin(), vals.end(), v) != vals.end();
}

bool sync_flag_counts(const EvalCtx& ctx, SyncFlag f) {
  return ctx.opt.si_nonrelaxed ? f != SyncFlag::RX : is_releasing(f);
}

const TxnLocal* live_txn(const EvalCtx& ctx, ThreadId t) {
  const TMSpecState& spec = spec_of(ctx);
  auto id = spec.live_txn(t);
  if (!id) return nullptr;
  const TxnLocal& txn = spec.txn(*id);
  return txn.status == TxnStatus::Ready ? &txn : nullptr;
}

std::optional<Val> expr_val(const EvalCtx& ctx, const Expr& e) {
  if (e.kind == Expr::Kind::Lit) return e.lit;
  if (e.kind == Expr::Kind::Reg) return ctx.c.regs[e.reg];
  throw ApiError("assertion value expressions are registers or literals");
}

int idx_val(const EvalCtx& ctx, const IdxTerm& t) {
  switch (t.kind) {
    case IdxTerm::Kind::Lit: return t.lit;
    case IdxTerm::Kind::Var: return ctx.idx_env[t.var];
    case IdxTerm::Kind::MemLen: return spec_of(ctx).mem_len() + t.lit;
  }
  return 0;
}

bool eval(EvalCtx& ctx, const Assertion& a);

bool eval_kids_and(EvalCtx& ctx, const Assertion& a) {
  for (const auto& k : a.kids)
    if (!eval(ctx, *k)) return false;
  return true;
}

bool eval(EvalCtx& ctx, const Assertion& a) {
  switch (a.kind) {
    case Assertion::Kind::True:
      return true;
    case Assertion::Kind::ClientDefinite:
      return client_definite(ctx, a.thread, a.loc, a.val);
    case Assertion::Kind::ClientPossible:
      return client_possible(ctx, a.thread, a.loc, a.val);
    case Assertion::Kind::ClientConditional: {
      // Every observable write of the trigger location carrying the trigger
      // value must be releasing and must transfer a view under which the
      // target definite value holds.
      for (WriteId w : ctx.c.mem.observable_writes(a.thread, a.cond_loc)) {
        if (ctx.c.mem.write(w).val != a.cond_val) continue;
        if (!ctx.c.mem.write(w).released) return false;
        View merged = ctx.c.mem.view_merge(ctx.c.mem.tview(a.thread), ctx.c.mem.mview(w));
        Configuration shifted = ctx.c;
        shifted.mem = ctx.c.mem.with_tview(a.thread, merged);
        EvalCtx sub{ctx.p, ctx.backend, shifted, ctx.opt, ctx.idx_env};
        if (!client_definite(sub, a.thread, a.loc, a.val)) return false;
      }
      return true;
    }
    case Assertion::Kind::TxDefinite: {
      const TMSpecState& spec = spec_of(ctx);
      for (int i : spec.visible_memories(a.thread))
        if (spec.memory(i)[a.tx_loc] != a.val) return false;
      return true;
    }
    case Assertion::Kind::TxPossible: {
      const TMSpecState& spec = spec_of(ctx);
      for (int i : spec.visible_memories(a.thread))
        if (spec.memory(i)[a.tx_loc] == a.val) return true;
      return false;
    }
    case Assertion::Kind::TxConditional: {
      const TMSpecState& spec = spec_of(ctx);
      for (int i : spec.visible_memories(a.thread)) {
        if (spec.memory(i)[a.cond_loc] != a.cond_val) continue;
        if (!sync_flag_counts(ctx, spec.sync_type(i))) return false;
        WriteId last = ctx.c.mem.mo_last(a.loc);
        if (spec.mod_view(i)[a.loc] != last) return false;
        if (ctx.c.mem.write(last).val != a.val) return false;
      }
      return true;
    }
    case Assertion::Kind::CommitDefinite: {
      const TMSpecState& spec = spec_of(ctx);
      if (!live_txn(ctx, a.thread)) return true;
      auto check_post = [&](const std::optional<TMEndResult>& res) {
        if (!res) return true;  // that commit is not enabled
        Configuration post = ctx.c;
        post.spec = res->state;
        post.mem = res->client;
        EvalCtx sub{ctx.p, ctx.backend, post, ctx.opt, ctx.idx_env};
        return client_definite(sub, a.thread, a.loc, a.val);
      };
      return check_post(spec.tx_end_ro(a.thread, ctx.c.mem)) &&
             check_post(spec.tx_end_wr(a.thread, ctx.c.mem));
    }
    case Assertion::Kind::InWS: {
      const TxnLocal* txn = live_txn(ctx, a.thread);
      if (!txn) return false;
      auto v = expr_val(ctx, a.val_expr);
      if (!v) return false;
      auto cur = txn->wr_set.get(a.tx_loc);
      return cur && *cur == *v;
    }
    case Assertion::Kind::InRS: {
      const TxnLocal* txn = live_txn(ctx, a.thread);
      if (!txn) return false;
      auto v = expr_val(ctx, a.val_expr);
      if (!v) return false;
      auto cur = txn->rd_set.get(a.tx_loc);
      return cur && *cur == *v;
    }
    case Assertion::Kind::WSEmpty: {
      const TxnLocal* txn = live_txn(ctx, a.thread);
      return !txn || txn->wr_set.empty();
    }
    case Assertion::Kind::RelFlag: {
      const TxnLocal* txn = live_txn(ctx, a.thread);
      return txn && is_releasing(txn->synctype);
    }
    case Assertion::Kind::AcqFlag: {
      const TxnLocal* txn = live_txn(ctx, a.thread);
      return txn && is_acquiring(txn->synctype);
    }
    case Assertion::Kind::MemVal: {
      const TMSpecState& spec = spec_of(ctx);
      int i = idx_val(ctx, a.idx_a);
      return i >= 0 && i < spec.mem_len() && spec.memory(i)[a.tx_loc] == a.val;
    }
    case Assertion::Kind::NeverWritten: {
      const TMSpecState& spec = spec_of(ctx);
      for (int i = 0; i < spec.mem_len(); ++i)
        if (spec.memory(i)[a.tx_loc] == a.val) return false;
      return true;
    }
    case Assertion::Kind::StatusIs:
      return ctx.c.status_of(ctx.backend, a.thread) == a.status;
    case Assertion::Kind::BeginIdxIs: {
      const TxnLocal* txn = live_txn(ctx, a.thread);
      return txn && txn->begin_idx == a.val;
    }
    case Assertion::Kind::MemLenCmp:
      return spec_of(ctx).mem_len() == a.val;
    case Assertion::Kind::RegPred:
      return eval_post(ctx.c, a.reg_pred);
    case Assertion::Kind::ObsSubset: {
      for (Val v : ctx.c.mem.observable_values(a.thread, a.loc))
        if (std::find(a.val_set.begin(), a.val_set.end(), v) == a.val_set.end()) return false;
      return true;
    }
    case Assertion::Kind::Ghost:
      return ctx.c.ghosts[a.ghost] != 0;
    case Assertion::Kind::ForallMemIdx: {
      const TMSpecState& spec = spec_of(ctx);
      for (int i = 0; i < spec.mem_len(); ++i) {
        ctx.idx_env.push_back(i);
        bool ok = eval_kids_and(ctx, a);
        ctx.idx_env.pop_back();
        if (!ok) return false;
      }
      return true;
    }
    case Assertion::Kind::IdxCmp: {
      int x = idx_val(ctx, a.idx_a), y = idx_val(ctx, a.idx_b);
      switch (a.cmp_op) {
        case 0: return x == y;
        case 1: return x != y;
        case 2: return x < y;
        case 3: return x <= y;
      }
      return false;
    }
    case Assertion::Kind::And:
      return eval(ctx, *a.kids[0]) && eval(ctx, *a.kids[1]);
    case Assertion::Kind::Or:
      return eval(ctx, *a.kids[0]) || eval(ctx, *a.kids[1]);
    case Assertion::Kind::Not:
      return !eval(ctx, *a.kids[0]);
    case Assertion::Kind::Imp:
      return !eval(ctx, *a.kids[0]) || eval(ctx, *a.kids[1]);
  }
  return false;
}

}  // namespace

bool eval_assertion(const Assertion& a, const LitmusProgram& p, Backend b,
                    const Configuration& c, const AssertOptions& opt) {
  EvalCtx ctx{p, b, c, opt, {}};
  return eval(ctx, a);
}

Assertion assert_true() { return Assertion{}; }

Assertion assert_and(Assertion l, Assertion r) {
  Assertion a;
  a.kind = Assertion::Kind::And;
  a.kids.push_back(std::make_shared<Assertion>(std::move(l)));
  a.kids.push_back(std::make_shared<Assertion>(std::move(r)));
  return a;
}

}  // namespace ratm
