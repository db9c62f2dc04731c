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

#ifndef RATM_PROGRAM_HPP_
#define RATM_PROGRAM_HPP_

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ratm/basics.hpp"
#include "ratm/memory.hpp"
#include "ratm/tms2ra.hpp"
#include "ratm/tmlra.hpp"

namespace ratm {

enum class Backend { Plain, Tms2Ra, TmlRa };

inline const char* to_string(Backend b) {
  switch (b) {
    case Backend::Plain: return "plain";
    case Backend::Tms2Ra: return "tms2ra";
    case Backend::TmlRa: return "tmlra";
  }
  return "?";
}

std::optional<Backend> backend_from_string(const std::string& s);

/// Interned names. Client locations, transactional locations, threads and
/// registers live in separate id spaces; registers are owned by one thread.
struct SymbolTable {
  std::vector<std::string> client_locs;
  std::vector<std::string> tx_locs;
  std::vector<std::string> threads;
  std::vector<std::string> regs;
  std::vector<ThreadId> reg_owner;

  int find_client_loc(const std::string& n) const;
  int find_tx_loc(const std::string& n) const;
  int find_thread(const std::string& n) const;
  int find_reg(const std::string& n) const;
};

// Expressions over registers (Fig-8 style: values, registers, sums).
struct Expr {
  enum class Kind : uint8_t { Lit, Reg, Add, Sub };
  Kind kind = Kind::Lit;
  Val lit = 0;
  RegId reg = -1;
  std::shared_ptr<Expr> lhs, rhs;

  static Expr literal(Val v);
  static Expr regref(RegId r);
};

struct BoolExpr {
  enum class Kind : uint8_t { True, Eq, Ne, Lt, Le, InSet, And, Or, Not, Imp };
  Kind kind = Kind::True;
  Expr a, b;                  // comparison operands
  std::vector<Val> set;       // InSet values
  std::shared_ptr<BoolExpr> l, r;
};

/// Atomic commands of the client language.
struct AtomicCommand {
  enum class Kind : uint8_t {
    RegAssign,  // r := e
    Store,      // x :=^[R] e
    Load,       // r <-^[A] x
    Cas,        // r <- CAS^[RX|R|A|RA](x, u, v)
    TxBegin,    // TxBegin^flag {regs}
    TxRead,     // TxRead(xh, r)
    TxWrite,    // TxWrite(xh, e)
    TxEnd,
  };
  Kind kind;
  RegId reg = -1;                // RegAssign/Load/Cas/TxRead target
  LocId loc = -1;                // client location (Store/Load/Cas)
  int tx_loc = -1;               // transactional location (TxRead/TxWrite)
  Expr expr;                     // RegAssign/Store/TxWrite value
  Expr cas_expected, cas_new;    // Cas operands
  SyncFlag flag = SyncFlag::RX;  // Store: R set; Load: A set; Cas/TxBegin: any
  std::vector<RegId> reg_set;    // TxBegin
};

/// Ghost assignment attached to a transaction region; fires when the region
/// completes (its TxEnd executes or the transaction aborts).
struct GhostAssign {
  int ghost = -1;
  Val value = 1;
};

struct LabelledCommand {
  enum class Kind : uint8_t { Step, If };
  Kind kind = Kind::Step;
  // Step
  AtomicCommand cmd;
  int next = -1;
  int abort_next = -1;  // label after the enclosing transaction's TxEnd
  std::vector<GhostAssign> on_tx_exit;  // populated on TM commands
  // If
  BoolExpr cond;
  int then_label = -1;
  int else_label = -1;
  bool back_edge_on_then = false;
  bool back_edge_on_else = false;
};

struct ThreadCode {
  std::string name;
  std::vector<LabelledCommand> code;  // label = index; terminal = size()
  int terminal() const { return static_cast<int>(code.size()); }
};

struct GhostVar {
  std::string name;
  Val init = 0;
};

struct PostCondition {
  bool universal = true;  // forall vs exists
  BoolExpr pred;
  std::string text;
};

/// A parsed litmus program: declarations, per-thread code, postconditions.
struct LitmusProgram {
  std::string id;
  SymbolTable sym;
  std::vector<ThreadCode> threads;
  std::vector<PostCondition> posts;
  std::vector<GhostVar> ghosts;
  bool has_tx_commands = false;

  int num_threads() const { return static_cast<int>(threads.size()); }
  /// β location count for a backend: client-only for Plain/TMS2-RA, client
  /// plus transactional plus the lock word for TML-RA.
  int beta_locations(Backend b) const;
  LocId tml_beta_loc(int tx_loc) const;  // β id of a transactional location
  LocId tml_glb_loc() const;             // β id of the lock word
  std::string label_name(ThreadId t, int label) const;
  std::string json() const;
};

/// A machine configuration: program counters, registers, the client memory
/// state and the backend-specific transactional state.
struct Configuration {
  std::vector<int> pc;
  std::vector<RegVal> regs;
  ClientMemoryState mem;
  std::optional<TMSpecState> spec;     // TMS2-RA backend
  std::vector<TmlThread> tml;          // TML-RA backend
  std::vector<TxnStatus> tml_status;   // per-thread last transaction status
  std::vector<int> loop_count;         // back-edge traversals per thread
  std::vector<Val> ghosts;

  bool thread_terminal(const LitmusProgram& p, ThreadId t) const;
  bool all_terminal(const LitmusProgram& p) const;
  /// A register is leased while its owner's live transaction holds it.
  bool reg_leased(Backend b, RegId r, const LitmusProgram& p) const;
  TxnStatus status_of(Backend b, ThreadId t) const;
  std::string canonical_key(const LitmusProgram& p, Backend b) const;
};

Configuration initial_configuration(const LitmusProgram& p, Backend b);

/// One labelled transition, for traces and history extraction.
struct Action {
  enum class Kind : uint8_t {
    RegAssign, ClientWrite, ClientRead, CasSuccess, CasFail, IfBranch,
    TxBegin, TxReadInt, TxReadExt, TxWrite, TxCommitRO, TxCommitWR, TxAbort,
    TmlStep, TmlBeginDone, TmlReadDone, TmlWriteDone, TmlCommit, TmlAbort,
  };
  Kind kind;
  ThreadId thread = -1;
  int loc = -1;   // location id in the relevant space
  Val val = 0;
  int aux = -1;   // memory index / slot / label, kind-dependent
  std::string text;
};

struct StepOptions {
  int retry_budget = 4;
  bool explore_aborts = true;  // spontaneous TMS2-RA aborts
  TmlMutations mutations;
};

struct Successor {
  ThreadId thread;
  Action action;
  Configuration config;
  bool budget_exhausted = false;
};

/// All enabled successor configurations of config under a backend.
std::vector<Successor> enabled_steps(const LitmusProgram& p, Backend b, const Configuration& c,
                                     const StepOptions& opt);

/// Guard evaluation: nullopt when a register read poison (the thread sticks).
std::optional<bool> eval_guard(const Configuration& c, const BoolExpr& e);
/// Postcondition evaluation: atoms over poison registers are false.
bool eval_post(const Configuration& c, const BoolExpr& e);

}  // namespace ratm

#endif  // RATM_PROGRAM_HPP_
