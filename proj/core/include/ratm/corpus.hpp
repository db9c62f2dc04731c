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

#ifndef RATM_CORPUS_HPP_
#define RATM_CORPUS_HPP_

#include <string>
#include <vector>

#include "ratm/program.hpp"

namespace ratm {

/// Ids of the built-in litmus corpus, in a stable order.
std::vector<std::string> builtin_ids();

/// Extra programs used by the mutation-sensitivity harness: they drive the
/// lock algorithm's validation and publication paths, which the five-program
/// corpus never reaches.
std::vector<std::string> mutation_harness_ids();

/// Source text of a built-in program.
const std::string& builtin_source(const std::string& id);

/// Parse one built-in program by id.
LitmusProgram builtin_program(const std::string& id);

/// All five built-in programs.
std::vector<LitmusProgram> builtin_corpus();

/// Source text of the bundled proof-outline fixtures: "fig-mp", "fig-chain",
/// "fig-relaxed", plus deliberately broken variants with a "-weak" suffix.
const std::string& outline_fixture(const std::string& name);
std::vector<std::string> outline_fixture_ids();

}  // namespace ratm

#endif  // RATM_CORPUS_HPP_
