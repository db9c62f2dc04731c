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

#include "ratm/tmlra.hpp"

namespace ratm {

const char* to_string(TmlPc pc) {
  switch (pc) {
    case TmlPc::Idle: return "idle";
    case TmlPc::B1: return "B1";
    case TmlPc::B2: return "B2";
    case TmlPc::B3: return "B3";
    case TmlPc::B4: return "B4";
    case TmlPc::W1: return "W1";
    case TmlPc::W2: return "W2";
    case TmlPc::W3: return "W3";
    case TmlPc::W4: return "W4";
    case TmlPc::W5: return "W5";
    case TmlPc::W6: return "W6";
    case TmlPc::E1: return "E1";
    case TmlPc::E2: return "E2";
    case TmlPc::R1: return "R1";
    case TmlPc::R2: return "R2";
    case TmlPc::R3: return "R3";
    case TmlPc::R4: return "R4";
    case TmlPc::R5: return "R5";
    case TmlPc::R6: return "R6";
    case TmlPc::R7: return "R7";
    case TmlPc::R9: return "R9";
    case TmlPc::R10: return "R10";
    case TmlPc::R11: return "R11";
    case TmlPc::R12: return "R12";
  }
  return "?";
}

const std::vector<TmlMutationInfo>& tml_mutation_catalogue() {
  static const std::vector<TmlMutationInfo> catalogue = {
      {"drop-e2-release", "write the lock release at E2 relaxed instead of releasing"},
      {"drop-b3-acquire", "read the lock snapshot at B3 relaxed instead of acquiring"},
      {"weaken-r10-test", "let the validation at R10 also accept loc + 2"},
      {"r4-plain-read", "replace the value-preserving CAS at R4 by an acquiring read"},
  };
  return catalogue;
}

bool apply_mutation(const std::string& name, TmlMutations* out) {
  if (name == "drop-e2-release") out->drop_e2_release = true;
  else if (name == "drop-b3-acquire") out->drop_b3_acquire = true;
  else if (name == "weaken-r10-test") out->weaken_r10 = true;
  else if (name == "r4-plain-read") out->r4_plain_read = true;
  else return false;
  return true;
}

void TmlThread::canonical_key(KeySink& sink) const {
  sink.put_u8(static_cast<uint8_t>(pc));
  sink.put_i64(loc_snap);
  sink.put_bool(has_read);
  sink.put_bool(has_written);
  sink.put_bool(cas_ok);
  sink.put_i64(glb_snap);
  sink.put_bool(in_txn);
  sink.put_i32(static_cast<int>(regs.size()));
  for (RegId r : regs) sink.put_i32(r);
  sink.put_u8(static_cast<uint8_t>(op));
  sink.put_i32(arg_loc);
  sink.put_i64(arg_val);
  sink.put_i32(arg_reg);
}

}  // namespace ratm
