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

#ifndef RATM_REFINEMENT_HPP_
#define RATM_REFINEMENT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ratm/explorer.hpp"
#include "ratm/program.hpp"

namespace ratm {

/// Lock-word value to memory-epoch map.
inline Val wc(Val n) { return n / 2; }

/**
 * A client-observable state: the register file with transaction-leased
 * registers hidden, and the memory state restricted (by comparison) to
 * client locations.
 */
struct ClientObs {
  // outer nullopt: leased to a live transaction; inner nullopt: poisoned.
  std::vector<std::optional<RegVal>> regs;
  ClientMemoryState mem;
  int client_locs = 0;
  int threads = 0;

  std::string key() const;
};

using ClientTrace = std::vector<ClientObs>;

ClientObs client_obs(const LitmusProgram& p, Backend b, const Configuration& c);

/// Def-style state refinement: visible registers agree and per thread and
/// client location the concrete observable writes are a subset of the
/// abstract ones (writes matched by (location, value, duplicate rank)).
bool state_refines(const ClientObs& concrete, const ClientObs& abstract);

/// Pointwise state refinement of stutter-free traces of equal length.
bool trace_refines(const ClientTrace& ct, const ClientTrace& at);

/// Names of the simulation-relation conjuncts, in report order.
std::vector<std::string> simulation_conjunct_names();

struct SimCheck {
  std::vector<bool> conjuncts;  // aligned with simulation_conjunct_names()
  bool holds() const;
  std::string failing() const;
};

/// Evaluate the simulation relation on an (abstract, concrete) pair:
/// client observation plus the lock-epoch, window, write-set, read-set and
/// seen-index conjuncts.
SimCheck simulation_holds(const LitmusProgram& p, const Configuration& abstract,
                          const Configuration& concrete);

struct SimReport {
  bool ok = true;
  std::string detail;                // failing conjunct or clause
  std::vector<std::string> trace;    // concrete trace to the failure
  long long product_nodes = 0;
  bool view_stability_ok = true;
};

struct RefinementOptions {
  StepOptions concrete_step;   // carries the mutation set
  StepOptions abstract_step;
  long long node_ceiling = 5'000'000;
};

/**
 * Forward-simulation check along all concrete executions: after every
 * concrete step the abstract candidate set is advanced by stuttering or by
 * one same-thread transition (library steps), or by mirroring the identical
 * client step; a simulation failure is an empty candidate set.
 */
SimReport check_forward_simulation(const LitmusProgram& p, const RefinementOptions& opt = {});

/**
 * Trace-inclusion check: every stutter-free client trace of the program
 * under TML-RA is matched, pointwise and with equal length, by one under
 * TMS2-RA.
 */
SimReport check_program_refinement(const LitmusProgram& p, const RefinementOptions& opt = {});

/// A matching (concrete, abstract) maximal trace pair, for tests.
std::optional<std::pair<ClientTrace, ClientTrace>> witness_trace_pair(
    const LitmusProgram& p, const RefinementOptions& opt = {});

}  // namespace ratm

#endif  // RATM_REFINEMENT_HPP_
