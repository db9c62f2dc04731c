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

#ifndef RATM_PARSER_HPP_
#define RATM_PARSER_HPP_

#include <stdexcept>
#include <string>

#include "ratm/assertions.hpp"
#include "ratm/outline.hpp"
#include "ratm/program.hpp"

namespace ratm {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + msg),
        line(line_), col(col_) {}
};

/**
 * Parse a litmus program.
 *
 * Sections: `program "<id>"` (optional), `locations ...`, `txlocations ...`,
 * one `thread <id> { ... }` block per thread, and any number of
 * `forall <pred>` / `exists <pred>` postcondition lines. Accesses carry the
 * optional annotations ^R (stores), ^A (loads), ^RX/^R/^A/^RA (CAS and
 * TxBegin). Registers are declared implicitly at first use and are owned by
 * the thread that uses them. do/until and if/else lower to labelled
 * commands with explicit branch targets.
 */
LitmusProgram parse_litmus(const std::string& text);

/// An annotated program: a litmus program plus a proof outline whose
/// assertions were written between the statements.
struct AnnotatedProgram {
  LitmusProgram program;
  ProofOutline outline;
};

/// Parse an outline file: litmus syntax extended with `{| assertion |}`
/// blocks before statements, `ghost g = v` declarations, `TxEnd with
/// g := v` exit assignments, and `init {| ... |}` / `final {| ... |}`.
AnnotatedProgram parse_outline(const std::string& text);

/// Parse a single assertion (ASCII TARO syntax) against a program's symbols.
Assertion parse_assertion(const std::string& text, const LitmusProgram& program);

/// Parse a postcondition predicate, e.g. for --expect.
BoolExpr parse_predicate(const std::string& text, const LitmusProgram& program);

}  // namespace ratm

#endif  // RATM_PARSER_HPP_
