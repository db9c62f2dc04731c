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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ratm/corpus.hpp"
#include "ratm/explorer.hpp"
#include "ratm/outline.hpp"
#include "ratm/parser.hpp"
#include "ratm/refinement.hpp"
#include "ratm/rules.hpp"
#include "ratm/serializability.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitExhausted = 3;

struct CommonArgs {
  std::string builtin;
  std::string file;
  std::string backend = "auto";
  std::string mutate;
  int budget = 4;
  long long ceiling = 5'000'000;
  int workers = 1;
  bool json = false;
};

void add_program_options(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--builtin", args->builtin, "built-in litmus program id");
  cmd->add_option("--file", args->file, "litmus program file");
  cmd->add_option("--budget", args->budget, "loop retry budget")->capture_default_str();
  cmd->add_option("--ceiling", args->ceiling, "canonical-state ceiling")->capture_default_str();
  cmd->add_option("--workers", args->workers, "exploration workers")->capture_default_str();
  cmd->add_flag("--json", args->json, "emit a JSON report");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ratm::ParseError(0, 0, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ratm::LitmusProgram load_program(const CommonArgs& args) {
  if (!args.builtin.empty() && !args.file.empty())
    throw ratm::ParseError(0, 0, "--builtin and --file are mutually exclusive");
  if (!args.builtin.empty()) return ratm::builtin_program(args.builtin);
  if (!args.file.empty()) return ratm::parse_litmus(read_file(args.file));
  throw ratm::ParseError(0, 0, "one of --builtin or --file is required");
}

long long env_ceiling(long long fallback) {
  const char* env = std::getenv("RATM_STATE_CEILING");
  if (!env) return fallback;
  return std::atoll(env);
}

ratm::ExploreOptions explore_options(const CommonArgs& args) {
  ratm::ExploreOptions opt;
  opt.step.retry_budget = args.budget;
  opt.state_ceiling = env_ceiling(args.ceiling);
  opt.workers = args.workers;
  if (!args.mutate.empty() && !ratm::apply_mutation(args.mutate, &opt.step.mutations))
    throw ratm::ParseError(0, 0, "unknown mutation '" + args.mutate + "'");
  return opt;
}

ratm::Backend pick_backend(const CommonArgs& args, const ratm::LitmusProgram& p) {
  if (args.backend == "auto")
    return p.has_tx_commands ? ratm::Backend::Tms2Ra : ratm::Backend::Plain;
  auto b = ratm::backend_from_string(args.backend);
  if (!b) throw ratm::ParseError(0, 0, "unknown backend '" + args.backend + "'");
  return *b;
}

int cmd_litmus(const CommonArgs& args, const std::string& expect) {
  ratm::LitmusProgram p = load_program(args);
  ratm::Backend backend = pick_backend(args, p);
  ratm::ExploreOptions opt = explore_options(args);
  ratm::ExplorationResult res = ratm::explore(p, backend, opt);

  bool expect_ok = true;
  if (!expect.empty()) {
    ratm::BoolExpr pred = ratm::parse_predicate(expect, p);
    for (const auto& regs : res.finals) {
      ratm::Configuration probe = ratm::initial_configuration(p, backend);
      probe.regs = regs;
      if (!ratm::eval_post(probe, pred)) expect_ok = false;
    }
  }

  bool ok = res.verdict && expect_ok && res.invariant_violations.empty();
  if (args.json) {
    std::cout << res.json(p, backend) << "\n";
  } else {
    std::cout << "program " << p.id << " under " << to_string(backend) << ": "
              << (ok ? "pass" : "FAIL") << "\n";
    for (const auto& regs : res.finals)
      std::cout << "  final: " << ratm::format_regs(p, regs) << "\n";
    std::cout << "  states " << res.stats.states << ", budget-cut "
              << res.stats.budget_exhausted << ", stuck " << res.stats.stuck << "\n";
    for (const auto& f : res.failed_posts) std::cout << "  failed: " << f << "\n";
    if (!expect_ok) std::cout << "  failed: expect " << expect << "\n";
    for (const auto& v : res.invariant_violations) std::cout << "  invariant: " << v << "\n";
    if (res.counterexample_trace) {
      std::cout << "  counterexample:\n";
      for (const auto& step : *res.counterexample_trace) std::cout << "    " << step << "\n";
    }
  }
  return ok ? kExitPass : kExitViolation;
}

int cmd_outline(const CommonArgs& args, const std::string& outline_path,
                const std::string& fixture) {
  std::string text;
  if (!fixture.empty()) text = ratm::outline_fixture(fixture);
  else if (!outline_path.empty()) text = read_file(outline_path);
  else throw ratm::ParseError(0, 0, "one of --outline or --fixture is required");

  ratm::AnnotatedProgram ap = ratm::parse_outline(text);
  if (!args.builtin.empty() && ap.program.id != args.builtin)
    throw ratm::ParseError(0, 0, "outline is for program '" + ap.program.id + "'");

  ratm::OutlineOptions opt;
  opt.explore.step.retry_budget = args.budget;
  opt.explore.state_ceiling = env_ceiling(args.ceiling);
  ratm::OutlineVerdict reach = ratm::check_reachable_annotations(ap.program, ap.outline, opt);
  ratm::OutlineVerdict og = ratm::check_og_validity(ap.program, ap.outline, opt);
  bool ok = reach.ok && og.ok;

  if (args.json) {
    nlohmann::json j;
    j["program"] = ap.program.id;
    j["reachable_annotations"] = reach.ok;
    j["og_validity"] = og.ok;
    j["note"] = "triples are discharged over reachable configurations only";
    if (!reach.ok) j["reachable_detail"] = reach.detail;
    if (!og.ok) {
      j["og_clause"] = og.clause;
      j["og_detail"] = og.detail;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "outline for " << ap.program.id << ": reachable-annotations "
              << (reach.ok ? "pass" : "FAIL") << ", validity " << (og.ok ? "pass" : "FAIL")
              << " (triples checked over reachable configurations)\n";
    if (!reach.ok) std::cout << "  " << reach.detail << "\n";
    if (!og.ok) std::cout << "  " << og.clause << ": " << og.detail << "\n";
    for (const auto& v : reach.ok ? og.trace : reach.trace) std::cout << "    " << v << "\n";
  }
  return ok ? kExitPass : kExitViolation;
}

int cmd_rules(const CommonArgs& args, const std::string& rule) {
  std::vector<ratm::RuleOutcome> outcomes;
  if (rule.empty()) outcomes = ratm::check_all_rules();
  else outcomes.push_back(ratm::check_rule(rule));

  bool ok = true;
  nlohmann::json j = nlohmann::json::array();
  for (const auto& o : outcomes) {
    if (!o.as_expected()) ok = false;
    if (args.json) {
      j.push_back({{"rule", o.name},
                   {"falsified", o.falsified},
                   {"held", o.held},
                   {"as_expected", o.as_expected()},
                   {"counterexample", o.counterexample}});
    } else {
      std::cout << (o.as_expected() ? "pass" : "FAIL") << "  " << o.name
                << (o.falsified ? " (falsified schema, refuted)" : "") << "\n";
      if (!o.as_expected() && !o.counterexample.empty())
        std::cout << "      " << o.counterexample << "\n";
    }
  }
  if (args.json) std::cout << j.dump(2) << "\n";
  return ok ? kExitPass : kExitViolation;
}

int cmd_simulate(const CommonArgs& args, bool refine) {
  ratm::LitmusProgram p = load_program(args);
  ratm::RefinementOptions opt;
  opt.concrete_step.retry_budget = args.budget;
  opt.abstract_step.retry_budget = args.budget;
  opt.node_ceiling = env_ceiling(args.ceiling);
  if (!args.mutate.empty() && !ratm::apply_mutation(args.mutate, &opt.concrete_step.mutations))
    throw ratm::ParseError(0, 0, "unknown mutation '" + args.mutate + "'");

  ratm::SimReport rep =
      refine ? ratm::check_program_refinement(p, opt) : ratm::check_forward_simulation(p, opt);
  if (args.json) {
    nlohmann::json j;
    j["program"] = p.id;
    j["check"] = refine ? "refine" : "simulate";
    j["mutation"] = args.mutate;
    j["ok"] = rep.ok;
    j["detail"] = rep.detail;
    j["product_nodes"] = rep.product_nodes;
    j["trace"] = rep.trace;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (refine ? "refinement" : "simulation") << " of " << p.id
              << (args.mutate.empty() ? "" : " with mutation " + args.mutate) << ": "
              << (rep.ok ? "pass" : "FAIL") << " (" << rep.product_nodes << " product nodes)\n";
    if (!rep.ok) {
      std::cout << "  " << rep.detail << "\n";
      for (const auto& step : rep.trace) std::cout << "    " << step << "\n";
    }
  }
  return rep.ok ? kExitPass : kExitViolation;
}

int cmd_serial(const CommonArgs& args, int random_count) {
  bool ok = true;
  nlohmann::json j = nlohmann::json::array();
  auto run = [&](const ratm::LitmusProgram& p) {
    ratm::ExploreOptions opt = explore_options(args);
    ratm::SerializabilityReport rep = ratm::check_program_serializability(p, opt);
    if (!rep.ok()) ok = false;
    if (args.json) {
      j.push_back({{"program", p.id}, {"histories", rep.histories}, {"failures", rep.failures}});
    } else {
      std::cout << (rep.ok() ? "pass" : "FAIL") << "  " << p.id << ": " << rep.histories
                << " histories\n";
    }
  };
  if (!args.builtin.empty() || !args.file.empty()) run(load_program(args));
  else
    for (const auto& id : ratm::builtin_ids()) run(ratm::builtin_program(id));
  for (int seed = 1; seed <= random_count; ++seed) run(ratm::random_tx_program(seed));
  if (args.json) std::cout << j.dump(2) << "\n";
  return ok ? kExitPass : kExitViolation;
}

int cmd_dump(const CommonArgs& args, bool trace) {
  ratm::LitmusProgram p = load_program(args);
  if (!trace) {
    std::cout << p.json() << "\n";
    return kExitPass;
  }
  // One maximal execution as (action, state) pairs.
  ratm::Backend backend = pick_backend(args, p);
  ratm::ExploreOptions opt = explore_options(args);
  ratm::Configuration c = ratm::initial_configuration(p, backend);
  std::set<std::string> on_path{c.canonical_key(p, backend)};
  nlohmann::json steps = nlohmann::json::array();
  for (long long guard = 0; guard < 100000; ++guard) {
    auto succs = ratm::enabled_steps(p, backend, c, opt.step);
    bool advanced = false;
    for (ratm::Successor& s : succs) {
      if (s.budget_exhausted) continue;
      if (!on_path.insert(s.config.canonical_key(p, backend)).second) continue;
      nlohmann::json e;
      e["action"] = "t" + std::to_string(s.thread) + ": " + s.action.text;
      if (s.config.spec) e["gamma"] = nlohmann::json::parse(s.config.spec->dump_json(p.sym.tx_locs));
      e["beta"] = nlohmann::json::parse(
          s.config.mem.dump_json(backend == ratm::Backend::TmlRa
                                     ? [&] {
                                         auto names = p.sym.client_locs;
                                         for (const auto& t : p.sym.tx_locs) names.push_back(t);
                                         names.push_back("glb");
                                         return names;
                                       }()
                                     : p.sym.client_locs,
                                 p.sym.threads));
      steps.push_back(std::move(e));
      c = std::move(s.config);
      advanced = true;
      break;
    }
    if (!advanced) break;
  }
  nlohmann::json j;
  j["program"] = p.id;
  j["backend"] = to_string(backend);
  j["trace"] = std::move(steps);
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

int list_mutations(bool json) {
  if (json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& m : ratm::tml_mutation_catalogue())
      j.push_back({{"name", m.name}, {"description", m.description}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& m : ratm::tml_mutation_catalogue())
      std::cout << m.name << ": " << m.description << "\n";
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"release-acquire transactional memory laboratory"};
  app.require_subcommand(1);

  CommonArgs litmus_args;
  std::string expect;
  CLI::App* litmus = app.add_subcommand("litmus", "explore a litmus program");
  add_program_options(litmus, &litmus_args);
  litmus->add_option("--backend", litmus_args.backend, "plain | tms2ra | tmlra | auto")
      ->capture_default_str();
  litmus->add_option("--mutate", litmus_args.mutate, "named TML-RA mutation");
  litmus->add_option("--expect", expect, "extra predicate over the finals");

  CLI::App* check = app.add_subcommand("check", "run a checker");
  check->require_subcommand(1);

  CommonArgs outline_args;
  std::string outline_path, fixture;
  CLI::App* outline = check->add_subcommand("outline", "check a proof outline");
  outline->add_option("--outline", outline_path, "annotated program file");
  outline->add_option("--fixture", fixture, "bundled outline fixture name");
  outline->add_option("--builtin", outline_args.builtin, "expected program id");
  outline->add_option("--budget", outline_args.budget, "loop retry budget")
      ->capture_default_str();
  outline->add_flag("--json", outline_args.json, "emit a JSON report");

  CommonArgs rules_args;
  std::string rule;
  CLI::App* rules = check->add_subcommand("rules", "check the proof-rule catalogue");
  rules->add_option("--rule", rule, "check a single rule by name");
  rules->add_flag("--json", rules_args.json, "emit a JSON report");

  CommonArgs sim_args;
  bool sim_list = false;
  CLI::App* simulate = check->add_subcommand("simulate", "check the forward simulation");
  add_program_options(simulate, &sim_args);
  simulate->add_option("--mutate", sim_args.mutate, "named TML-RA mutation");
  simulate->add_flag("--list-mutations", sim_list, "list the mutation catalogue");

  CommonArgs ref_args;
  CLI::App* refine = check->add_subcommand("refine", "check client-trace inclusion");
  add_program_options(refine, &ref_args);
  refine->add_option("--mutate", ref_args.mutate, "named TML-RA mutation");

  CommonArgs serial_args;
  int random_count = 0;
  CLI::App* serial = check->add_subcommand("serial", "check strict serializability");
  add_program_options(serial, &serial_args);
  serial->add_option("--random", random_count, "additionally check N random programs");

  CommonArgs dump_args;
  bool dump_trace = false;
  CLI::App* dump = app.add_subcommand("dump", "export a parsed program as JSON");
  add_program_options(dump, &dump_args);
  dump->add_option("--backend", dump_args.backend, "backend for --trace")->capture_default_str();
  dump->add_flag("--trace", dump_trace, "emit one execution as (action, state) pairs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (litmus->parsed()) return cmd_litmus(litmus_args, expect);
    if (outline->parsed()) return cmd_outline(outline_args, outline_path, fixture);
    if (rules->parsed()) return cmd_rules(rules_args, rule);
    if (simulate->parsed()) {
      if (sim_list) return list_mutations(sim_args.json);
      return cmd_simulate(sim_args, false);
    }
    if (refine->parsed()) return cmd_simulate(ref_args, true);
    if (serial->parsed()) return cmd_serial(serial_args, random_count);
    if (dump->parsed()) return cmd_dump(dump_args, dump_trace);
  } catch (const ratm::ExhaustionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExhausted;
  } catch (const ratm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ratm::ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
