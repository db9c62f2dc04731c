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

#ifndef RATM_OUTLINE_HPP_
#define RATM_OUTLINE_HPP_

#include <string>
#include <vector>

#include "ratm/assertions.hpp"
#include "ratm/explorer.hpp"

namespace ratm {

/**
 * A proof outline: an initial assertion, one assertion per program point
 * (including each thread's terminal point), and a final assertion.
 */
struct ProofOutline {
  Assertion init;
  std::vector<std::vector<Assertion>> ann;  // [thread][label], label up to terminal()
  Assertion fin;
};

struct OutlineVerdict {
  bool ok = true;
  std::string clause;      // which obligation failed
  std::string detail;
  std::vector<std::string> trace;
};

struct OutlineOptions {
  ExploreOptions explore;
  AssertOptions assertions;
};

/// Necessary condition for validity: every annotation holds at every
/// reachable configuration whose program counter sits at its point.
OutlineVerdict check_reachable_annotations(const LitmusProgram& p, const ProofOutline& o,
                                           const OutlineOptions& opt = {});

/**
 * The four validity clauses (initialisation, finalisation, local
 * correctness, stability), with Hoare triples discharged semantically over
 * reachable configurations satisfying the precondition. This reachable
 * restriction is sound for refutation and is reported in the verdict.
 */
OutlineVerdict check_og_validity(const LitmusProgram& p, const ProofOutline& o,
                                 const OutlineOptions& opt = {});

}  // namespace ratm

#endif  // RATM_OUTLINE_HPP_
