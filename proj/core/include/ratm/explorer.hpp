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

#ifndef RATM_EXPLORER_HPP_
#define RATM_EXPLORER_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ratm/program.hpp"

namespace ratm {

/// Raised when the canonical-state ceiling is hit: exploration never
/// reports a partial verdict.
struct ExhaustionError : std::runtime_error {
  explicit ExhaustionError(const std::string& what) : std::runtime_error(what) {}
};

struct ExploreOptions {
  StepOptions step;
  long long state_ceiling = 5'000'000;
  bool memoize = true;
  bool check_invariants = true;
  int workers = 1;
  bool record_traces = false;  // forces a single worker
};

struct ExploreStats {
  long long states = 0;
  long long transitions = 0;
  long long budget_exhausted = 0;
  long long stuck = 0;
};

struct ExplorationResult {
  std::vector<std::vector<RegVal>> finals;  // sorted, deduplicated
  bool verdict = true;
  std::vector<std::string> failed_posts;
  std::optional<std::vector<std::string>> counterexample_trace;
  ExploreStats stats;
  std::vector<std::string> invariant_violations;

  std::string json(const LitmusProgram& p, Backend b) const;
};

/// Exhaustively explore all executions and check the program's
/// postconditions over the completed finals.
ExplorationResult explore(const LitmusProgram& p, Backend b, const ExploreOptions& opt);

/// The reachable configuration graph, for checkers that need per-state
/// access (outline checking, rule checking, witness recovery).
struct ReachGraph {
  std::vector<Configuration> configs;
  std::vector<std::vector<std::pair<int, Action>>> succs;  // node -> (target, action)
  std::vector<int> parent;          // discovery parent, -1 at root
  std::vector<Action> parent_act;
  ExploreStats stats;
  std::vector<std::string> invariant_violations;

  std::vector<std::string> trace_to(int node) const;
};

ReachGraph explore_graph(const LitmusProgram& p, Backend b, const ExploreOptions& opt);

/// Union of observable values of x at a control point over all reachable
/// configurations whose program counter sits at that point.
std::vector<Val> reachable_values(const LitmusProgram& p, Backend b, ThreadId thread, int label,
                                  const std::string& loc_name, const ExploreOptions& opt);

std::string format_regs(const LitmusProgram& p, const std::vector<RegVal>& regs);

}  // namespace ratm

#endif  // RATM_EXPLORER_HPP_
