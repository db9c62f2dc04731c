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

#ifndef RATM_RULES_HPP_
#define RATM_RULES_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ratm/program.hpp"

namespace ratm {

struct RuleBounds {
  Val max_val = 3;      // values range over 0..max_val
  int max_mem_idx = 2;  // memory indices range over 0..max_mem_idx
};

struct RuleInfo {
  std::string name;
  std::string description;
  bool falsified;  // a deliberately broken schema that must be refuted
};

struct RuleOutcome {
  std::string name;
  bool falsified = false;
  bool held = true;
  std::string counterexample;  // populated when a post-state violates the rule

  /// A catalogue rule passes when it held; a falsified one when refuted.
  bool as_expected() const { return falsified ? !held : held; }
};

const std::vector<RuleInfo>& rule_catalogue();

/**
 * Check one proof-rule schema by brute force: every instantiation within
 * the bounds is evaluated over every reachable configuration of a family of
 * small two- and three-transaction scaffold programs; configurations
 * satisfying the precondition have the rule's command applied in every
 * enabled resolution and the postcondition checked in each post-state.
 */
RuleOutcome check_rule(const std::string& name, const RuleBounds& bounds = {});

std::vector<RuleOutcome> check_all_rules(const RuleBounds& bounds = {});

}  // namespace ratm

#endif  // RATM_RULES_HPP_
