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

#ifndef RATM_SERIALIZABILITY_HPP_
#define RATM_SERIALIZABILITY_HPP_

#include <string>
#include <vector>

#include "ratm/explorer.hpp"
#include "ratm/program.hpp"

namespace ratm {

/// One transactional event of a history.
struct TmEvent {
  enum class Kind : uint8_t { Begin, ReadInt, ReadExt, Write, CommitRO, CommitWR, Abort };
  Kind kind;
  ThreadId thread;
  int tx_loc = -1;
  Val val = 0;
  int idx = -1;  // Begin: chosen snapshot; ReadExt: validated memory index
};

using TmHistory = std::vector<TmEvent>;

/// Enumerate the distinct transactional histories of all complete
/// executions (every thread at its final label) of p under TMS2-RA.
std::vector<TmHistory> enumerate_histories(const LitmusProgram& p, const ExploreOptions& opt,
                                           long long max_paths = 2'000'000);

/**
 * Which precedence constraints the serialization order must respect.
 *
 * WallClock is the sequentially-consistent reading: a transaction that ends
 * before another begins precedes it. The relaxed specification deliberately
 * lets a transaction begin at an older visible snapshot, so WallClock is
 * refutable on its histories; CommitOrder keeps the order the automaton
 * actually enforces (writers in memory-installation order) and is the mode
 * the acceptance suite runs.
 */
enum class SerializabilityMode { WallClock, CommitOrder };

/**
 * Brute-force serializability check: search for a total order over the
 * committed transactions of the history that respects the chosen precedence
 * constraints and explains every internal read from the transaction's own
 * writes and every external read from the memory left by its committed
 * predecessors.
 */
bool strictly_serializable(const TmHistory& history, int num_txlocations,
                           SerializabilityMode mode = SerializabilityMode::CommitOrder);

struct SerializabilityReport {
  long long histories = 0;
  long long failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0; }
};

SerializabilityReport check_program_serializability(
    const LitmusProgram& p, const ExploreOptions& opt,
    SerializabilityMode mode = SerializabilityMode::CommitOrder);

/// Deterministic random straight-line transactional programs (2-3 threads,
/// one transaction each) for the serializability suite.
LitmusProgram random_tx_program(unsigned seed);

}  // namespace ratm

#endif  // RATM_SERIALIZABILITY_HPP_
