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

#ifndef RATM_BASICS_HPP_
#define RATM_BASICS_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ratm {

using Val = long long;
using LocId = int;     // interned location name
using ThreadId = int;  // 0-based thread index
using RegId = int;     // interned register name
using WriteId = int;   // index into ClientMemoryState::writes
using TxnId = int;     // index into TMSpecState::txns

/// Register contents; nullopt is the poison value installed on abort.
using RegVal = std::optional<Val>;

/// Synchronisation annotation on accesses and transactions.
enum class SyncFlag : uint8_t { RX, R, A, RA };

inline bool is_releasing(SyncFlag f) { return f == SyncFlag::R || f == SyncFlag::RA; }
inline bool is_acquiring(SyncFlag f) { return f == SyncFlag::A || f == SyncFlag::RA; }

inline const char* to_string(SyncFlag f) {
  switch (f) {
    case SyncFlag::RX: return "RX";
    case SyncFlag::R: return "R";
    case SyncFlag::A: return "A";
    case SyncFlag::RA: return "RA";
  }
  return "?";
}

enum class TxnStatus : uint8_t { NotStarted, Ready, Committed, Aborted };

inline const char* to_string(TxnStatus s) {
  switch (s) {
    case TxnStatus::NotStarted: return "notstarted";
    case TxnStatus::Ready: return "ready";
    case TxnStatus::Committed: return "committed";
    case TxnStatus::Aborted: return "aborted";
  }
  return "?";
}

/// Thrown on misuse of a core operation (violated precondition that a
/// correct caller never triggers; the explorer only offers legal choices).
struct ApiError : std::logic_error {
  explicit ApiError(const std::string& what) : std::logic_error(what) {}
};

/// Byte-oriented serializer used to build canonical state keys.
class KeySink {
 public:
  void put_i32(int32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void put_i64(int64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void put_u8(uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void put_bool(bool v) { put_u8(v ? 1 : 0); }
  void put_reg(const RegVal& v) {
    put_bool(v.has_value());
    if (v) put_i64(*v);
  }
  std::string take() { return std::move(buf_); }
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

}  // namespace ratm

#endif  // RATM_BASICS_HPP_
