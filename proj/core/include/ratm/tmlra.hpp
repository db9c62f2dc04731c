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

#ifndef RATM_TMLRA_HPP_
#define RATM_TMLRA_HPP_

#include <string>
#include <vector>

#include "ratm/basics.hpp"

namespace ratm {

/**
 * Labels of the transactional-mutex-lock algorithm. Each label is one
 * atomic step; branch tests are evaluated inside their step. Idle means no
 * operation is in flight for the thread.
 */
enum class TmlPc : uint8_t {
  Idle,
  B1, B2, B3, B4,          // TxBegin: snapshot glb until even
  W1, W2, W3, W4, W5, W6,  // TxWrite: lock acquisition and eager write
  E1, E2,                  // TxEnd: lock release for writers
  R1, R2, R3, R4, R5, R6, R7, R9, R10, R11, R12,  // TMRead
};

const char* to_string(TmlPc pc);

/// Named algorithm mutations used by the sensitivity harness.
struct TmlMutations {
  bool drop_e2_release = false;   // E2's lock release written relaxed
  bool drop_b3_acquire = false;   // B3's snapshot read relaxed
  bool weaken_r10 = false;        // R10 also accepts loc + 2
  bool r4_plain_read = false;     // R4's CAS demoted to an acquiring read

  bool any() const { return drop_e2_release || drop_b3_acquire || weaken_r10 || r4_plain_read; }
};

struct TmlMutationInfo {
  std::string name;
  std::string description;
};

const std::vector<TmlMutationInfo>& tml_mutation_catalogue();
bool apply_mutation(const std::string& name, TmlMutations* out);

/// Per-thread interpreter state for the lock algorithm.
struct TmlThread {
  TmlPc pc = TmlPc::Idle;
  Val loc_snap = 0;      // loc: snapshot of glb
  bool has_read = false;
  bool has_written = false;  // ghost: set at W6's first execution
  bool cas_ok = false;       // CAS outcome register
  Val glb_snap = 0;          // validation read at R9
  bool in_txn = false;       // between TxBegin completion and end/abort
  std::vector<RegId> regs;   // registers leased to the live transaction

  // In-flight operation arguments.
  enum class Op : uint8_t { None, Begin, Read, Write, End };
  Op op = Op::None;
  LocId arg_loc = -1;  // β location for Read/Write
  Val arg_val = 0;
  RegId arg_reg = -1;

  void canonical_key(KeySink& sink) const;
};

}  // namespace ratm

#endif  // RATM_TMLRA_HPP_
