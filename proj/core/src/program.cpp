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

#include "ratm/program.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace ratm {

std::optional<Backend> backend_from_string(const std::string& s) {
  if (s == "plain") return Backend::Plain;
  if (s == "tms2ra") return Backend::Tms2Ra;
  if (s == "tmlra") return Backend::TmlRa;
  return std::nullopt;
}

static int find_name(const std::vector<std::string>& v, const std::string& n) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] == n) return static_cast<int>(i);
  return -1;
}

int SymbolTable::find_client_loc(const std::string& n) const { return find_name(client_locs, n); }
int SymbolTable::find_tx_loc(const std::string& n) const { return find_name(tx_locs, n); }
int SymbolTable::find_thread(const std::string& n) const { return find_name(threads, n); }
int SymbolTable::find_reg(const std::string& n) const { return find_name(regs, n); }

Expr Expr::literal(Val v) {
  Expr e;
  e.kind = Kind::Lit;
  e.lit = v;
  return e;
}

Expr Expr::regref(RegId r) {
  Expr e;
  e.kind = Kind::Reg;
  e.reg = r;
  return e;
}

int LitmusProgram::beta_locations(Backend b) const {
  int n = static_cast<int>(sym.client_locs.size());
  if (b == Backend::TmlRa) n += static_cast<int>(sym.tx_locs.size()) + 1;
  return n;
}

LocId LitmusProgram::tml_beta_loc(int tx_loc) const {
  return static_cast<LocId>(sym.client_locs.size()) + tx_loc;
}

LocId LitmusProgram::tml_glb_loc() const {
  return static_cast<LocId>(sym.client_locs.size() + sym.tx_locs.size());
}

std::string LitmusProgram::label_name(ThreadId t, int label) const {
  std::ostringstream os;
  os << sym.threads[t] << ":" << label;
  return os.str();
}

static nlohmann::json expr_json(const SymbolTable& sym, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Lit: return e.lit;
    case Expr::Kind::Reg: return sym.regs[e.reg];
    case Expr::Kind::Add: return {{"add", {expr_json(sym, *e.lhs), expr_json(sym, *e.rhs)}}};
    case Expr::Kind::Sub: return {{"sub", {expr_json(sym, *e.lhs), expr_json(sym, *e.rhs)}}};
  }
  return nullptr;
}

std::string LitmusProgram::json() const {
  nlohmann::json j;
  j["id"] = id;
  j["locations"] = sym.client_locs;
  j["txlocations"] = sym.tx_locs;
  j["registers"] = nlohmann::json::object();
  for (size_t r = 0; r < sym.regs.size(); ++r)
    j["registers"][sym.threads[sym.reg_owner[r]]].push_back(sym.regs[r]);
  j["threads"] = nlohmann::json::array();
  for (const ThreadCode& tc : threads) {
    nlohmann::json tj;
    tj["name"] = tc.name;
    tj["labels"] = nlohmann::json::array();
    for (const LabelledCommand& lc : tc.code) {
      nlohmann::json cj;
      if (lc.kind == LabelledCommand::Kind::If) {
        cj["if"] = {{"then", lc.then_label}, {"else", lc.else_label}};
      } else {
        switch (lc.cmd.kind) {
          case AtomicCommand::Kind::RegAssign:
            cj["assign"] = {{"reg", sym.regs[lc.cmd.reg]}, {"expr", expr_json(sym, lc.cmd.expr)}};
            break;
          case AtomicCommand::Kind::Store:
            cj["store"] = {{"loc", sym.client_locs[lc.cmd.loc]},
                           {"expr", expr_json(sym, lc.cmd.expr)},
                           {"flag", to_string(lc.cmd.flag)}};
            break;
          case AtomicCommand::Kind::Load:
            cj["load"] = {{"reg", sym.regs[lc.cmd.reg]},
                          {"loc", sym.client_locs[lc.cmd.loc]},
                          {"flag", to_string(lc.cmd.flag)}};
            break;
          case AtomicCommand::Kind::Cas:
            cj["cas"] = {{"reg", sym.regs[lc.cmd.reg]},
                         {"loc", sym.client_locs[lc.cmd.loc]},
                         {"expected", expr_json(sym, lc.cmd.cas_expected)},
                         {"new", expr_json(sym, lc.cmd.cas_new)},
                         {"flag", to_string(lc.cmd.flag)}};
            break;
          case AtomicCommand::Kind::TxBegin: {
            nlohmann::json rs = nlohmann::json::array();
            for (RegId r : lc.cmd.reg_set) rs.push_back(sym.regs[r]);
            cj["txbegin"] = {{"flag", to_string(lc.cmd.flag)}, {"regs", rs}};
            break;
          }
          case AtomicCommand::Kind::TxRead:
            cj["txread"] = {{"loc", sym.tx_locs[lc.cmd.tx_loc]}, {"reg", sym.regs[lc.cmd.reg]}};
            break;
          case AtomicCommand::Kind::TxWrite:
            cj["txwrite"] = {{"loc", sym.tx_locs[lc.cmd.tx_loc]},
                             {"expr", expr_json(sym, lc.cmd.expr)}};
            break;
          case AtomicCommand::Kind::TxEnd:
            cj["txend"] = true;
            break;
        }
        cj["next"] = lc.next;
      }
      tj["labels"].push_back(cj);
    }
    j["threads"].push_back(tj);
  }
  for (const PostCondition& p : posts)
    j[p.universal ? "forall" : "exists"].push_back(p.text);
  return j.dump(2);
}

bool Configuration::thread_terminal(const LitmusProgram& p, ThreadId t) const {
  if (!tml.empty() && tml[t].pc != TmlPc::Idle) return false;
  return pc[t] >= p.threads[t].terminal();
}

bool Configuration::all_terminal(const LitmusProgram& p) const {
  for (ThreadId t = 0; t < p.num_threads(); ++t)
    if (!thread_terminal(p, t)) return false;
  return true;
}

bool Configuration::reg_leased(Backend b, RegId r, const LitmusProgram& p) const {
  (void)p;
  if (b == Backend::Tms2Ra && spec) {
    for (ThreadId t = 0; t < static_cast<int>(pc.size()); ++t) {
      auto id = spec->live_txn(t);
      if (!id) continue;
      const TxnLocal& txn = spec->txn(*id);
      if (txn.status == TxnStatus::Ready &&
          std::find(txn.regs.begin(), txn.regs.end(), r) != txn.regs.end())
        return true;
    }
  }
  if (b == Backend::TmlRa) {
    for (const TmlThread& mt : tml)
      if (mt.in_txn && std::find(mt.regs.begin(), mt.regs.end(), r) != mt.regs.end()) return true;
  }
  return false;
}

TxnStatus Configuration::status_of(Backend b, ThreadId t) const {
  if (b == Backend::Tms2Ra && spec) return spec->last_status(t);
  if (b == Backend::TmlRa) return tml_status[t];
  return TxnStatus::NotStarted;
}

std::string Configuration::canonical_key(const LitmusProgram& p, Backend b) const {
  KeySink sink;
  for (int l : pc) sink.put_i32(l);
  for (const RegVal& r : regs) sink.put_reg(r);
  mem.canonical_key(sink);
  if (spec) spec->canonical_key(sink, mem);
  for (const TmlThread& mt : tml) mt.canonical_key(sink);
  for (TxnStatus s : tml_status) sink.put_u8(static_cast<uint8_t>(s));
  for (int c : loop_count) sink.put_i32(c);
  for (Val g : ghosts) sink.put_i64(g);
  (void)p;
  (void)b;
  return sink.take();
}

Configuration initial_configuration(const LitmusProgram& p, Backend b) {
  Configuration c;
  c.pc.assign(p.num_threads(), 0);
  c.regs.assign(p.sym.regs.size(), RegVal{0});
  c.mem = ClientMemoryState(p.beta_locations(b), p.num_threads());
  if (b == Backend::Tms2Ra)
    c.spec = TMSpecState(static_cast<int>(p.sym.tx_locs.size()), p.num_threads(), c.mem);
  if (b == Backend::TmlRa) c.tml.assign(p.num_threads(), TmlThread{});
  c.tml_status.assign(p.num_threads(), TxnStatus::NotStarted);
  c.loop_count.assign(p.num_threads(), 0);
  c.ghosts.reserve(p.ghosts.size());
  for (const GhostVar& g : p.ghosts) c.ghosts.push_back(g.init);
  return c;
}

}  // namespace ratm
