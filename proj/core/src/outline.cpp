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

#include "ratm/outline.hpp"

#include <sstream>

namespace ratm {

namespace {

constexpr Backend kBackend = Backend::Tms2Ra;

std::string point_name(const LitmusProgram& p, ThreadId t, int label) {
  std::ostringstream os;
  os << p.sym.threads[t] << ":" << label;
  if (label >= p.threads[t].terminal()) os << " (end)";
  return os.str();
}

bool holds(const Assertion& a, const LitmusProgram& p, const Configuration& c,
           const OutlineOptions& opt) {
  return eval_assertion(a, p, kBackend, c, opt.assertions);
}

}  // namespace

OutlineVerdict check_reachable_annotations(const LitmusProgram& p, const ProofOutline& o,
                                           const OutlineOptions& opt) {
  OutlineVerdict v;
  ReachGraph g = explore_graph(p, kBackend, opt.explore);
  for (size_t n = 0; n < g.configs.size(); ++n) {
    const Configuration& c = g.configs[n];
    for (ThreadId t = 0; t < p.num_threads(); ++t) {
      const Assertion& a = o.ann[t][c.pc[t]];
      if (!holds(a, p, c, opt)) {
        v.ok = false;
        v.clause = "reachable-annotation";
        v.detail = "annotation at " + point_name(p, t, c.pc[t]) + " fails: " + a.text;
        v.trace = g.trace_to(static_cast<int>(n));
        return v;
      }
    }
  }
  return v;
}

OutlineVerdict check_og_validity(const LitmusProgram& p, const ProofOutline& o,
                                 const OutlineOptions& opt) {
  OutlineVerdict v;
  ReachGraph g = explore_graph(p, kBackend, opt.explore);

  // Initialisation: in => ann(t, entry), checked at the initial state.
  {
    const Configuration& c0 = g.configs[0];
    if (holds(o.init, p, c0, opt)) {
      for (ThreadId t = 0; t < p.num_threads(); ++t) {
        if (!holds(o.ann[t][0], p, c0, opt)) {
          v.ok = false;
          v.clause = "initialisation";
          v.detail = "initial assertion does not establish " + point_name(p, t, 0);
          return v;
        }
      }
    }
  }

  // Finalisation: the conjunction of terminal annotations implies fin.
  for (size_t n = 0; n < g.configs.size(); ++n) {
    const Configuration& c = g.configs[n];
    bool all_terminal_anns = true;
    for (ThreadId t = 0; t < p.num_threads() && all_terminal_anns; ++t)
      if (!holds(o.ann[t][p.threads[t].terminal()], p, c, opt)) all_terminal_anns = false;
    if (all_terminal_anns && !holds(o.fin, p, c, opt)) {
      v.ok = false;
      v.clause = "finalisation";
      v.detail = "terminal annotations hold but the final assertion fails";
      v.trace = g.trace_to(static_cast<int>(n));
      return v;
    }
  }

  // Local correctness and stability, discharged over reachable states that
  // satisfy the precondition.
  for (size_t n = 0; n < g.configs.size(); ++n) {
    const Configuration& c = g.configs[n];
    std::vector<bool> ann_holds(p.num_threads());
    for (ThreadId t = 0; t < p.num_threads(); ++t)
      ann_holds[t] = holds(o.ann[t][c.pc[t]], p, c, opt);

    for (const auto& [target, act] : g.succs[n]) {
      ThreadId t = act.thread;
      if (!ann_holds[t]) continue;
      const Configuration& next = g.configs[target];

      // Local correctness: the stepping thread lands on a point whose
      // annotation must hold (covers branch targets and abort exits).
      if (!holds(o.ann[t][next.pc[t]], p, next, opt)) {
        v.ok = false;
        v.clause = "local-correctness";
        v.detail = "step " + act.text + " from " + point_name(p, t, c.pc[t]) +
                   " does not establish " + point_name(p, t, next.pc[t]);
        v.trace = g.trace_to(static_cast<int>(n));
        v.trace.push_back("t" + std::to_string(t) + ": " + act.text);
        return v;
      }

      // Stability: every other thread's annotation is interference-free.
      if (act.kind == Action::Kind::IfBranch) continue;
      for (ThreadId u = 0; u < p.num_threads(); ++u) {
        if (u == t || !ann_holds[u]) continue;
        if (!holds(o.ann[u][c.pc[u]], p, next, opt)) {
          v.ok = false;
          v.clause = "stability";
          v.detail = "step " + act.text + " by " + p.sym.threads[t] + " interferes with " +
                     point_name(p, u, c.pc[u]);
          v.trace = g.trace_to(static_cast<int>(n));
          v.trace.push_back("t" + std::to_string(t) + ": " + act.text);
          return v;
        }
      }
    }
  }
  return v;
}

}  // namespace ratm
