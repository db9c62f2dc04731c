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

#ifndef RATM_ASSERTIONS_HPP_
#define RATM_ASSERTIONS_HPP_

#include <memory>
#include <string>
#include <vector>

#include "ratm/program.hpp"

namespace ratm {

/// Index terms inside memory-index quantifiers.
struct IdxTerm {
  enum class Kind : uint8_t { Lit, Var, MemLen };
  Kind kind = Kind::Lit;
  int lit = 0;
  int var = -1;  // de-Bruijn level into the quantifier environment
};

/**
 * View-based and transactional assertions, evaluable against a
 * configuration. Client-value forms speak about the thread's observable
 * writes in β; transactional forms speak about the specification state γ
 * and require the TMS2-RA backend.
 */
struct Assertion {
  enum class Kind : uint8_t {
    True,
    ClientDefinite,     // [x = v]@t        every observable value of x is v
    ClientPossible,     // [x ~ v]@t        v is an observable value of x
    ClientConditional,  // <y = u>[x = v]@t
    TxDefinite,         // [x^ = v]@t
    TxPossible,         // [x^ ~ v]@t
    TxConditional,      // <y^ = u>[x = v]@t
    CommitDefinite,     // [x S= v]@t       definite after any enabled commit
    InWS,               // (x^, e) in WS@t
    InRS,               // (x^, e) in RS@t
    WSEmpty,            // WS@t = {}
    RelFlag,            // Rel@t
    AcqFlag,            // Acq@t
    MemVal,             // M[x^ = v]@i
    NeverWritten,       // NW[x^, v]
    StatusIs,           // status@t == committed
    BeginIdxIs,         // live transaction of t began at memory index n
    MemLenCmp,          // memlen == n
    RegPred,            // register predicate, e.g. r1 == 1
    ObsSubset,          // obs(x)@t subset {v, ...}
    Ghost,              // ghost variable as a boolean atom
    ForallMemIdx,       // forall i in M ( ... )
    IdxCmp,             // i == 0, i != memlen - 1, ...
    And, Or, Not, Imp,
  };

  Kind kind = Kind::True;
  ThreadId thread = -1;
  LocId loc = -1;      // client location
  int tx_loc = -1;     // transactional location
  Val val = 0;         // value operand
  Val cond_val = 0;    // value of the <...> trigger
  int cond_loc = -1;   // client or transactional trigger location
  Expr val_expr;       // InWS/InRS value (register or literal)
  std::vector<Val> val_set;
  TxnStatus status = TxnStatus::NotStarted;
  BoolExpr reg_pred;
  int ghost = -1;
  IdxTerm idx_a, idx_b;
  int cmp_op = 0;  // 0: ==, 1: !=, 2: <, 3: <=
  std::vector<std::shared_ptr<Assertion>> kids;
  std::string text;
};

/// Reading of the trigger's synchronisation conjunct in <y^=u>[x=v]@t.
struct AssertOptions {
  bool si_nonrelaxed = false;  // false: S_i in {R, RA}; true: S_i != RX
};

/// Evaluate an assertion against a configuration. Transactional forms
/// require backend Tms2Ra and throw ApiError otherwise.
bool eval_assertion(const Assertion& a, const LitmusProgram& p, Backend b,
                    const Configuration& c, const AssertOptions& opt = {});

Assertion assert_true();
Assertion assert_and(Assertion l, Assertion r);

}  // namespace ratm

#endif  // RATM_ASSERTIONS_HPP_
