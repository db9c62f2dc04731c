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

#include "ratm/parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

namespace ratm {

namespace {

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

struct Token {
  enum class Kind : uint8_t { Ident, Int, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  long long value = 0;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { next(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    next();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(tok_.line, tok_.col, msg);
  }

 private:
  void next() {
    skip_ws();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        id.push_back(advance());
      tok_.kind = Token::Kind::Ident;
      tok_.text = std::move(id);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::string num;
      if (c == '-') num.push_back(advance());
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        num.push_back(advance());
      tok_.kind = Token::Kind::Int;
      tok_.value = std::stoll(num);
      tok_.text = std::move(num);
      return;
    }
    if (c == '"') {
      advance();
      std::string s;
      while (pos_ < src_.size() && src_[pos_] != '"') s.push_back(advance());
      if (pos_ >= src_.size()) throw ParseError(line_, col_, "unterminated string");
      advance();
      tok_.kind = Token::Kind::String;
      tok_.text = std::move(s);
      return;
    }
    static const char* two[] = {":=", "<-", "==", "!=", "<=", "=>", "{|", "|}"};
    for (const char* p : two) {
      if (src_.compare(pos_, 2, p) == 0) {
        tok_.kind = Token::Kind::Punct;
        tok_.text = p;
        advance();
        advance();
        return;
      }
    }
    if (src_.compare(pos_, 2, "/\\") == 0 || src_.compare(pos_, 2, "\\/") == 0) {
      tok_.kind = Token::Kind::Punct;
      tok_.text = src_.substr(pos_, 2);
      advance();
      advance();
      return;
    }
    tok_.kind = Token::Kind::Punct;
    tok_.text = std::string(1, c);
    advance();
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// ---------------------------------------------------------------------------
// Statement AST prior to lowering
// ---------------------------------------------------------------------------

struct Stmt {
  enum class Kind : uint8_t {
    Assign, Store, Load, Cas, TxBegin, TxRead, TxWrite, TxEnd, DoUntil, If
  };
  Kind kind;
  int line = 0, col = 0;

  std::string lhs, loc;  // names; resolution happens during lowering
  Expr expr, cas_expected, cas_new;
  SyncFlag flag = SyncFlag::RX;
  std::vector<std::string> reg_names;
  std::vector<std::pair<std::string, Val>> ghost_assigns;  // TxEnd with ...

  BoolExpr cond;
  std::vector<Stmt> body, else_body;

  std::string pre_assert;           // raw assertion text ({|...|} before)
  std::string trailing_assert;      // do-body trailing block (until label)
  bool has_pre = false;
  bool has_trailing = false;
};

struct ThreadSrc {
  std::string name;
  std::vector<Stmt> body;
  std::string final_assert;
  bool has_final = false;
};

struct SourceFile {
  std::string id;
  std::vector<std::string> locations;
  std::vector<std::string> txlocations;
  std::vector<ThreadSrc> threads;
  std::vector<std::pair<bool, std::string>> posts;  // (universal, text)
  std::vector<GhostVar> ghosts;
  std::string init_assert, fin_assert;
  bool outline_mode = false;
};

// ---------------------------------------------------------------------------
// Program parser
// ---------------------------------------------------------------------------

class ProgramParser {
 public:
  ProgramParser(const std::string& text, bool outline_mode) : lex_(text) {
    file_.outline_mode = outline_mode;
  }

  SourceFile parse() {
    while (lex_.peek().kind != Token::Kind::End) top_level();
    return std::move(file_);
  }

 private:
  void top_level() {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::Ident) lex_.fail("expected a section keyword");
    if (t.text == "program") {
      lex_.take();
      Token id = lex_.take();
      if (id.kind != Token::Kind::String && id.kind != Token::Kind::Ident)
        lex_.fail("expected a program id");
      file_.id = id.text;
    } else if (t.text == "locations") {
      lex_.take();
      read_names(&file_.locations);
    } else if (t.text == "txlocations") {
      lex_.take();
      read_names(&file_.txlocations);
    } else if (t.text == "ghost") {
      if (!file_.outline_mode) lex_.fail("ghost declarations belong to outline files");
      lex_.take();
      GhostVar g;
      g.name = expect_ident("ghost name");
      expect_punct("=");
      g.init = expect_int();
      file_.ghosts.push_back(std::move(g));
    } else if (t.text == "init") {
      lex_.take();
      file_.init_assert = read_assert_block();
    } else if (t.text == "final") {
      lex_.take();
      file_.fin_assert = read_assert_block();
    } else if (t.text == "thread") {
      lex_.take();
      ThreadSrc th;
      th.name = expect_ident("thread name");
      expect_punct("{");
      th.body = statements("}");
      // A trailing assertion block annotates the thread's terminal point.
      if (pending_assert_) {
        th.final_assert = *pending_assert_;
        th.has_final = true;
        pending_assert_.reset();
      }
      expect_punct("}");
      file_.threads.push_back(std::move(th));
    } else if (t.text == "forall" || t.text == "exists") {
      bool universal = t.text == "forall";
      lex_.take();
      file_.posts.emplace_back(universal, read_rest_predicate());
    } else {
      lex_.fail("unknown section '" + t.text + "'");
    }
  }

  static bool is_section_keyword(const std::string& s) {
    return s == "program" || s == "locations" || s == "txlocations" || s == "thread" ||
           s == "forall" || s == "exists" || s == "ghost" || s == "init" || s == "final";
  }

  void read_names(std::vector<std::string>* out) {
    while (lex_.peek().kind == Token::Kind::Ident && !is_section_keyword(lex_.peek().text))
      out->push_back(lex_.take().text);
  }

  std::string expect_ident(const std::string& what) {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Ident) throw ParseError(t.line, t.col, "expected " + what);
    return t.text;
  }

  Val expect_int() {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Int) throw ParseError(t.line, t.col, "expected an integer");
    return t.value;
  }

  void expect_punct(const std::string& p) {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Punct || t.text != p)
      throw ParseError(t.line, t.col, "expected '" + p + "', found '" + t.text + "'");
  }

  bool peek_punct(const std::string& p) {
    return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p;
  }

  bool accept_punct(const std::string& p) {
    if (!peek_punct(p)) return false;
    lex_.take();
    return true;
  }

  bool peek_ident(const std::string& id) {
    return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == id;
  }

  /// Raw text of a {| ... |} assertion block.
  std::string read_assert_block() {
    expect_punct("{|");
    std::string out;
    int depth = 1;
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Kind::End) lex_.fail("unterminated assertion block");
      if (t.kind == Token::Kind::Punct && t.text == "{|") ++depth;
      if (t.kind == Token::Kind::Punct && t.text == "|}") {
        if (--depth == 0) {
          lex_.take();
          break;
        }
      }
      Token tok = lex_.take();
      if (!out.empty()) out.push_back(' ');
      if (tok.kind == Token::Kind::String) out += "\"" + tok.text + "\"";
      else out += tok.text;
    }
    return out;
  }

  /// Statements until the closing brace (not consumed).
  std::vector<Stmt> statements(const std::string& closer) {
    std::vector<Stmt> out;
    while (!peek_punct(closer)) {
      if (peek_punct("{|")) {
        if (pending_assert_) lex_.fail("two assertion blocks in a row");
        pending_assert_ = read_assert_block();
        continue;
      }
      // The pending block is this statement's precondition; it must be
      // detached before compound statements parse their bodies.
      std::optional<std::string> pre = std::move(pending_assert_);
      pending_assert_.reset();
      Stmt s = statement();
      if (pre) {
        s.pre_assert = *pre;
        s.has_pre = true;
      }
      out.push_back(std::move(s));
    }
    return out;
  }

  Stmt statement() {
    Token t = lex_.peek();
    Stmt s;
    s.line = t.line;
    s.col = t.col;
    if (t.kind != Token::Kind::Ident) lex_.fail("expected a statement");

    if (t.text == "do") {
      lex_.take();
      expect_punct("{");
      s.kind = Stmt::Kind::DoUntil;
      s.body = statements("}");
      if (pending_assert_) {
        s.trailing_assert = *pending_assert_;
        s.has_trailing = true;
        pending_assert_.reset();
      }
      expect_punct("}");
      if (!peek_ident("until")) lex_.fail("expected 'until'");
      lex_.take();
      s.cond = predicate();
      expect_punct(";");
      return s;
    }
    if (t.text == "if") {
      lex_.take();
      s.kind = Stmt::Kind::If;
      s.cond = predicate();
      expect_punct("{");
      s.body = statements("}");
      // A trailing block inside a branch restates the branch postcondition;
      // the join point carries its own annotation, so it is dropped here.
      pending_assert_.reset();
      expect_punct("}");
      if (peek_ident("else")) {
        lex_.take();
        expect_punct("{");
        s.else_body = statements("}");
        pending_assert_.reset();
        expect_punct("}");
      }
      return s;
    }
    if (t.text == "TxBegin") {
      lex_.take();
      s.kind = Stmt::Kind::TxBegin;
      s.flag = annotation(SyncFlag::RX);
      expect_punct("{");
      while (lex_.peek().kind == Token::Kind::Ident) {
        s.reg_names.push_back(lex_.take().text);
        accept_punct(",");
      }
      expect_punct("}");
      expect_punct(";");
      return s;
    }
    if (t.text == "TxRead") {
      lex_.take();
      s.kind = Stmt::Kind::TxRead;
      expect_punct("(");
      s.loc = expect_ident("transactional location");
      expect_punct(",");
      s.lhs = expect_ident("register");
      expect_punct(")");
      expect_punct(";");
      return s;
    }
    if (t.text == "TxWrite") {
      lex_.take();
      s.kind = Stmt::Kind::TxWrite;
      expect_punct("(");
      s.loc = expect_ident("transactional location");
      expect_punct(",");
      s.expr = expression();
      expect_punct(")");
      expect_punct(";");
      return s;
    }
    if (t.text == "TxEnd") {
      lex_.take();
      s.kind = Stmt::Kind::TxEnd;
      if (peek_ident("with")) {
        lex_.take();
        do {
          std::string g = expect_ident("ghost name");
          expect_punct(":=");
          s.ghost_assigns.emplace_back(g, expect_int());
        } while (accept_punct(","));
      }
      expect_punct(";");
      return s;
    }

    // Assignment forms: lhs := e | lhs :=^R e | r <- x | r <-^A x | r <- CAS...
    std::string lhs = lex_.take().text;
    if (accept_punct(":=")) {
      s.flag = annotation(SyncFlag::RX);
      s.lhs = lhs;
      s.expr = expression();
      expect_punct(";");
      s.kind = Stmt::Kind::Assign;  // store vs register decided at lowering
      return s;
    }
    if (accept_punct("<-")) {
      if (peek_ident("CAS")) {
        lex_.take();
        s.kind = Stmt::Kind::Cas;
        s.lhs = lhs;
        s.flag = annotation(SyncFlag::RX);
        expect_punct("(");
        s.loc = expect_ident("location");
        expect_punct(",");
        s.cas_expected = expression();
        expect_punct(",");
        s.cas_new = expression();
        expect_punct(")");
        expect_punct(";");
        return s;
      }
      s.kind = Stmt::Kind::Load;
      s.lhs = lhs;
      s.flag = annotation(SyncFlag::RX);
      s.loc = expect_ident("location");
      expect_punct(";");
      return s;
    }
    lex_.fail("expected ':=' or '<-' after '" + lhs + "'");
  }

  SyncFlag annotation(SyncFlag dflt) {
    if (!accept_punct("^")) return dflt;
    std::string f = expect_ident("annotation");
    if (f == "RX") return SyncFlag::RX;
    if (f == "R") return SyncFlag::R;
    if (f == "A") return SyncFlag::A;
    if (f == "RA") return SyncFlag::RA;
    lex_.fail("unknown annotation '^" + f + "'");
  }

  Expr expression() {
    Expr e = primary_expr();
    while (peek_punct("+") || peek_punct("-")) {
      bool add = lex_.take().text == "+";
      Expr rhs = primary_expr();
      Expr parent;
      parent.kind = add ? Expr::Kind::Add : Expr::Kind::Sub;
      parent.lhs = std::make_shared<Expr>(std::move(e));
      parent.rhs = std::make_shared<Expr>(std::move(rhs));
      e = std::move(parent);
    }
    return e;
  }

  Expr primary_expr() {
    Token t = lex_.take();
    if (t.kind == Token::Kind::Int) return Expr::literal(t.value);
    if (t.kind == Token::Kind::Ident) {
      // Register references carry a name-pool index in `lit` until the
      // lowering pass resolves them against the final symbol table.
      Expr e;
      e.kind = Expr::Kind::Reg;
      e.reg = -1;
      e.lit = static_cast<Val>(reg_name_pool(t.text));
      return e;
    }
    throw ParseError(t.line, t.col, "expected a value or register");
  }

  // Register names inside expressions are interned into a pool; lowering
  // resolves pool ids against the final symbol table.
  int reg_name_pool(const std::string& n) {
    for (size_t i = 0; i < reg_pool_.size(); ++i)
      if (reg_pool_[i] == n) return static_cast<int>(i);
    reg_pool_.push_back(n);
    return static_cast<int>(reg_pool_.size() - 1);
  }

  BoolExpr predicate() { return pred_imp(); }

  BoolExpr pred_imp() {
    BoolExpr l = pred_or();
    if (accept_punct("=>")) {
      BoolExpr r = pred_imp();
      BoolExpr e;
      e.kind = BoolExpr::Kind::Imp;
      e.l = std::make_shared<BoolExpr>(std::move(l));
      e.r = std::make_shared<BoolExpr>(std::move(r));
      return e;
    }
    return l;
  }

  BoolExpr pred_or() {
    BoolExpr e = pred_and();
    while (peek_punct("\\/")) {
      lex_.take();
      BoolExpr r = pred_and();
      BoolExpr parent;
      parent.kind = BoolExpr::Kind::Or;
      parent.l = std::make_shared<BoolExpr>(std::move(e));
      parent.r = std::make_shared<BoolExpr>(std::move(r));
      e = std::move(parent);
    }
    return e;
  }

  BoolExpr pred_and() {
    BoolExpr e = pred_unary();
    while (peek_punct("/\\")) {
      lex_.take();
      BoolExpr r = pred_unary();
      BoolExpr parent;
      parent.kind = BoolExpr::Kind::And;
      parent.l = std::make_shared<BoolExpr>(std::move(e));
      parent.r = std::make_shared<BoolExpr>(std::move(r));
      e = std::move(parent);
    }
    return e;
  }

  BoolExpr pred_unary() {
    if (accept_punct("!")) {
      BoolExpr e;
      e.kind = BoolExpr::Kind::Not;
      e.l = std::make_shared<BoolExpr>(pred_unary());
      return e;
    }
    if (accept_punct("(")) {
      BoolExpr e = predicate();
      expect_punct(")");
      return e;
    }
    return pred_atom();
  }

  BoolExpr pred_atom() {
    if (peek_ident("true")) {
      lex_.take();
      return BoolExpr{};
    }
    BoolExpr e;
    e.a = expression();
    if (peek_ident("in")) {
      lex_.take();
      e.kind = BoolExpr::Kind::InSet;
      expect_punct("{");
      while (lex_.peek().kind == Token::Kind::Int) {
        e.set.push_back(expect_int());
        accept_punct(",");
      }
      expect_punct("}");
      return e;
    }
    Token op = lex_.take();
    if (op.kind != Token::Kind::Punct) throw ParseError(op.line, op.col, "expected a comparison");
    if (op.text == "==") e.kind = BoolExpr::Kind::Eq;
    else if (op.text == "!=") e.kind = BoolExpr::Kind::Ne;
    else if (op.text == "<") e.kind = BoolExpr::Kind::Lt;
    else if (op.text == "<=") e.kind = BoolExpr::Kind::Le;
    else throw ParseError(op.line, op.col, "unknown comparison '" + op.text + "'");
    e.b = expression();
    return e;
  }

  std::string read_rest_predicate() {
    // Re-serialize a predicate's tokens; resolved once symbols are final.
    std::string out;
    int depth = 0;
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Kind::End) break;
      if (t.kind == Token::Kind::Ident &&
          (t.text == "thread" || t.text == "forall" || t.text == "exists" ||
           t.text == "locations" || t.text == "txlocations" || t.text == "program" ||
           t.text == "ghost" || t.text == "init" || t.text == "final") &&
          depth == 0)
        break;
      if (t.kind == Token::Kind::Punct && (t.text == "(" || t.text == "{")) ++depth;
      if (t.kind == Token::Kind::Punct && (t.text == ")" || t.text == "}")) --depth;
      Token tok = lex_.take();
      if (!out.empty()) out.push_back(' ');
      out += tok.text;
    }
    return out;
  }

 public:
  std::vector<std::string> reg_pool_;

 private:
  Lexer lex_;
  SourceFile file_;
  std::optional<std::string> pending_assert_;
};

// ---------------------------------------------------------------------------
// Lowering
// ---------------------------------------------------------------------------

struct Patch {
  int label;
  int field;  // 0: next, 1: then, 2: else
};

class Lowerer {
 public:
  Lowerer(const SourceFile& file, const std::vector<std::string>& reg_pool)
      : file_(file), reg_pool_(reg_pool) {}

  LitmusProgram lower() {
    LitmusProgram p;
    p.id = file_.id;
    p.sym.client_locs = file_.locations;
    p.sym.tx_locs = file_.txlocations;
    for (const auto& th : file_.threads) p.sym.threads.push_back(th.name);
    p.ghosts = file_.ghosts;
    prog_ = &p;

    // First pass over all threads discovers register ownership.
    for (ThreadId t = 0; t < static_cast<int>(file_.threads.size()); ++t)
      discover_registers(t, file_.threads[t].body);

    for (ThreadId t = 0; t < static_cast<int>(file_.threads.size()); ++t) {
      ThreadCode code;
      code.name = file_.threads[t].name;
      cur_thread_ = t;
      cur_code_ = &code;
      region_open_ = false;
      if_depth_ = 0;
      asserts_.push_back({});
      auto dangling = lower_block(file_.threads[t].body);
      if (region_open_)
        throw ParseError(0, 0, "thread " + code.name + " leaves a transaction open");
      int terminal = code.terminal();
      for (const Patch& pt : dangling) patch(code, pt, terminal);
      asserts_.back().resize(code.code.size() + 1);
      if (file_.threads[t].has_final)
        asserts_.back()[code.code.size()] = file_.threads[t].final_assert;
      p.threads.push_back(std::move(code));
    }

    for (const auto& [universal, text] : file_.posts) {
      PostCondition pc;
      pc.universal = universal;
      pc.text = text;
      pc.pred = parse_predicate(text, p);
      p.posts.push_back(std::move(pc));
    }
    validate(p);
    return p;
  }

  // Raw assertion text per (thread, label); empty string means "true".
  std::vector<std::vector<std::string>> asserts_;

 private:
  void discover_registers(ThreadId t, const std::vector<Stmt>& body) {
    for (const Stmt& s : body) {
      auto touch = [&](const std::string& name) {
        if (name.empty()) return;
        if (std::find(file_.locations.begin(), file_.locations.end(), name) !=
            file_.locations.end())
          return;
        if (std::find(file_.txlocations.begin(), file_.txlocations.end(), name) !=
            file_.txlocations.end())
          return;
        intern_reg(t, name, s.line, s.col);
      };
      switch (s.kind) {
        case Stmt::Kind::Assign: touch(s.lhs); touch_expr(t, s, s.expr); break;
        case Stmt::Kind::Load: touch(s.lhs); break;
        case Stmt::Kind::Cas:
          touch(s.lhs);
          touch_expr(t, s, s.cas_expected);
          touch_expr(t, s, s.cas_new);
          break;
        case Stmt::Kind::TxBegin:
          for (const auto& r : s.reg_names) intern_reg(t, r, s.line, s.col);
          break;
        case Stmt::Kind::TxRead: touch(s.lhs); break;
        case Stmt::Kind::TxWrite: touch_expr(t, s, s.expr); break;
        case Stmt::Kind::DoUntil:
          discover_registers(t, s.body);
          touch_pred(t, s, s.cond);
          break;
        case Stmt::Kind::If:
          touch_pred(t, s, s.cond);
          discover_registers(t, s.body);
          discover_registers(t, s.else_body);
          break;
        default: break;
      }
    }
  }

  void touch_expr(ThreadId t, const Stmt& s, const Expr& e) {
    if (e.kind == Expr::Kind::Reg) intern_reg(t, reg_pool_[static_cast<int>(e.lit)], s.line, s.col);
    if (e.lhs) touch_expr(t, s, *e.lhs);
    if (e.rhs) touch_expr(t, s, *e.rhs);
  }

  void touch_pred(ThreadId t, const Stmt& s, const BoolExpr& e) {
    touch_expr(t, s, e.a);
    touch_expr(t, s, e.b);
    if (e.l) touch_pred(t, s, *e.l);
    if (e.r) touch_pred(t, s, *e.r);
  }

  RegId intern_reg(ThreadId t, const std::string& name, int line, int col) {
    if (prog_->sym.find_client_loc(name) >= 0 || prog_->sym.find_tx_loc(name) >= 0)
      throw ParseError(line, col, "location '" + name + "' used where a register is required");
    int r = prog_->sym.find_reg(name);
    if (r >= 0) {
      if (prog_->sym.reg_owner[r] != t)
        throw ParseError(line, col,
                         "register '" + name + "' is owned by thread " +
                             prog_->sym.threads[prog_->sym.reg_owner[r]]);
      return r;
    }
    prog_->sym.regs.push_back(name);
    prog_->sym.reg_owner.push_back(t);
    return static_cast<RegId>(prog_->sym.regs.size() - 1);
  }

  Expr resolve_expr(const Expr& e, int line, int col) {
    Expr out = e;
    if (e.kind == Expr::Kind::Reg) {
      const std::string& name = reg_pool_[static_cast<int>(e.lit)];
      int r = prog_->sym.find_reg(name);
      if (r < 0) throw ParseError(line, col, "undeclared register '" + name + "'");
      out.reg = r;
      out.lit = 0;
    }
    if (e.lhs) out.lhs = std::make_shared<Expr>(resolve_expr(*e.lhs, line, col));
    if (e.rhs) out.rhs = std::make_shared<Expr>(resolve_expr(*e.rhs, line, col));
    return out;
  }

  BoolExpr resolve_pred(const BoolExpr& e, int line, int col) {
    BoolExpr out = e;
    out.a = resolve_expr(e.a, line, col);
    out.b = resolve_expr(e.b, line, col);
    if (e.l) out.l = std::make_shared<BoolExpr>(resolve_pred(*e.l, line, col));
    if (e.r) out.r = std::make_shared<BoolExpr>(resolve_pred(*e.r, line, col));
    return out;
  }

  void patch(ThreadCode& code, const Patch& pt, int target) {
    LabelledCommand& lc = code.code[pt.label];
    if (pt.field == 0) lc.next = target;
    else if (pt.field == 1) lc.then_label = target;
    else lc.else_label = target;
  }

  int emit(LabelledCommand lc, const std::string& pre, bool has_pre) {
    int label = static_cast<int>(cur_code_->code.size());
    cur_code_->code.push_back(std::move(lc));
    asserts_.back().resize(cur_code_->code.size());
    if (has_pre) asserts_.back()[label] = pre;
    return label;
  }

  std::vector<Patch> lower_block(const std::vector<Stmt>& body) {
    std::vector<Patch> dangling;
    for (const Stmt& s : body) {
      int here = static_cast<int>(cur_code_->code.size());
      for (const Patch& pt : dangling) patch(*cur_code_, pt, here);
      dangling = lower_stmt(s);
    }
    return dangling;
  }

  std::vector<Patch> lower_stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::DoUntil: {
        int head = static_cast<int>(cur_code_->code.size());
        auto body_dangling = lower_block(s.body);
        LabelledCommand guard;
        guard.kind = LabelledCommand::Kind::If;
        guard.cond = resolve_pred(s.cond, s.line, s.col);
        guard.else_label = head;
        guard.back_edge_on_else = true;
        int glabel = emit(std::move(guard), s.trailing_assert, s.has_trailing);
        for (const Patch& pt : body_dangling) patch(*cur_code_, pt, glabel);
        return {{glabel, 1}};
      }
      case Stmt::Kind::If: {
        LabelledCommand guard;
        guard.kind = LabelledCommand::Kind::If;
        guard.cond = resolve_pred(s.cond, s.line, s.col);
        int glabel = emit(std::move(guard), s.pre_assert, s.has_pre);
        cur_code_->code[glabel].then_label = static_cast<int>(cur_code_->code.size());
        ++if_depth_;
        std::vector<Patch> dangling = lower_block(s.body);
        if (s.else_body.empty()) {
          dangling.push_back({glabel, 2});
        } else {
          patch(*cur_code_, {glabel, 2}, static_cast<int>(cur_code_->code.size()));
          auto else_dangling = lower_block(s.else_body);
          dangling.insert(dangling.end(), else_dangling.begin(), else_dangling.end());
        }
        --if_depth_;
        return dangling;
      }
      default:
        return lower_simple(s);
    }
  }

  std::vector<Patch> lower_simple(const Stmt& s) {
    LabelledCommand lc;
    lc.kind = LabelledCommand::Kind::Step;
    AtomicCommand& cmd = lc.cmd;
    switch (s.kind) {
      case Stmt::Kind::Assign: {
        int loc = prog_->sym.find_client_loc(s.lhs);
        if (loc >= 0) {
          if (s.flag != SyncFlag::RX && s.flag != SyncFlag::R)
            throw ParseError(s.line, s.col, "stores may only carry ^R");
          cmd.kind = AtomicCommand::Kind::Store;
          cmd.loc = loc;
          cmd.expr = resolve_expr(s.expr, s.line, s.col);
          cmd.flag = s.flag;
        } else if (prog_->sym.find_tx_loc(s.lhs) >= 0) {
          throw ParseError(s.line, s.col,
                           "transactional location '" + s.lhs + "' accessed directly");
        } else {
          cmd.kind = AtomicCommand::Kind::RegAssign;
          cmd.reg = require_reg(s.lhs, s);
          cmd.expr = resolve_expr(s.expr, s.line, s.col);
        }
        break;
      }
      case Stmt::Kind::Load: {
        int loc = prog_->sym.find_client_loc(s.loc);
        if (loc < 0) {
          if (prog_->sym.find_tx_loc(s.loc) >= 0)
            throw ParseError(s.line, s.col,
                             "transactional location '" + s.loc + "' accessed directly");
          throw ParseError(s.line, s.col, "undeclared location '" + s.loc + "'");
        }
        if (s.flag != SyncFlag::RX && s.flag != SyncFlag::A)
          throw ParseError(s.line, s.col, "loads may only carry ^A");
        cmd.kind = AtomicCommand::Kind::Load;
        cmd.reg = require_reg(s.lhs, s);
        cmd.loc = loc;
        cmd.flag = s.flag;
        break;
      }
      case Stmt::Kind::Cas: {
        int loc = prog_->sym.find_client_loc(s.loc);
        if (loc < 0) throw ParseError(s.line, s.col, "undeclared location '" + s.loc + "'");
        cmd.kind = AtomicCommand::Kind::Cas;
        cmd.reg = require_reg(s.lhs, s);
        cmd.loc = loc;
        cmd.cas_expected = resolve_expr(s.cas_expected, s.line, s.col);
        cmd.cas_new = resolve_expr(s.cas_new, s.line, s.col);
        cmd.flag = s.flag;
        break;
      }
      case Stmt::Kind::TxBegin: {
        if (region_open_) throw ParseError(s.line, s.col, "nested TxBegin");
        if (if_depth_ > 0) throw ParseError(s.line, s.col, "TxBegin inside a branch");
        cmd.kind = AtomicCommand::Kind::TxBegin;
        cmd.flag = s.flag;
        for (const auto& r : s.reg_names) cmd.reg_set.push_back(require_reg(r, s));
        region_open_ = true;
        region_regs_ = cmd.reg_set;
        prog_->has_tx_commands = true;
        break;
      }
      case Stmt::Kind::TxRead: {
        if (!region_open_) throw ParseError(s.line, s.col, "TxRead outside a transaction");
        int xl = prog_->sym.find_tx_loc(s.loc);
        if (xl < 0)
          throw ParseError(s.line, s.col, "'" + s.loc + "' is not a transactional location");
        cmd.kind = AtomicCommand::Kind::TxRead;
        cmd.tx_loc = xl;
        cmd.reg = require_reg(s.lhs, s);
        if (std::find(region_regs_.begin(), region_regs_.end(), cmd.reg) == region_regs_.end())
          throw ParseError(s.line, s.col,
                           "TxRead target '" + s.lhs + "' is not in the transaction's register set");
        break;
      }
      case Stmt::Kind::TxWrite: {
        if (!region_open_) throw ParseError(s.line, s.col, "TxWrite outside a transaction");
        int xl = prog_->sym.find_tx_loc(s.loc);
        if (xl < 0)
          throw ParseError(s.line, s.col, "'" + s.loc + "' is not a transactional location");
        cmd.kind = AtomicCommand::Kind::TxWrite;
        cmd.tx_loc = xl;
        cmd.expr = resolve_expr(s.expr, s.line, s.col);
        break;
      }
      case Stmt::Kind::TxEnd: {
        if (!region_open_) throw ParseError(s.line, s.col, "TxEnd outside a transaction");
        if (if_depth_ > 0) throw ParseError(s.line, s.col, "TxEnd inside a branch");
        cmd.kind = AtomicCommand::Kind::TxEnd;
        for (const auto& [g, v] : s.ghost_assigns) {
          int gi = -1;
          for (size_t k = 0; k < prog_->ghosts.size(); ++k)
            if (prog_->ghosts[k].name == g) gi = static_cast<int>(k);
          if (gi < 0) throw ParseError(s.line, s.col, "undeclared ghost '" + g + "'");
          lc.on_tx_exit.push_back({gi, v});
        }
        break;
      }
      default:
        throw ParseError(s.line, s.col, "unexpected statement");
    }

    AtomicCommand::Kind kind = cmd.kind;
    int label = emit(std::move(lc), s.pre_assert, s.has_pre);
    if (kind == AtomicCommand::Kind::TxBegin) region_first_ = label;
    if (kind == AtomicCommand::Kind::TxEnd) {
      // Abort continuation: the label after this TxEnd. The region's exit
      // ghosts are shared by every command in it so that an abort anywhere
      // fires them too.
      int cont = label + 1;
      for (int l = region_first_; l <= label; ++l) {
        LabelledCommand& r = cur_code_->code[l];
        if (r.kind != LabelledCommand::Kind::Step) continue;
        switch (r.cmd.kind) {
          case AtomicCommand::Kind::TxBegin:
          case AtomicCommand::Kind::TxRead:
          case AtomicCommand::Kind::TxWrite:
          case AtomicCommand::Kind::TxEnd:
            r.abort_next = cont;
            if (l != label) r.on_tx_exit = cur_code_->code[label].on_tx_exit;
            break;
          default: break;
        }
      }
      region_open_ = false;
      region_regs_.clear();
    }
    return {{label, 0}};
  }

  RegId require_reg(const std::string& name, const Stmt& s) {
    int r = prog_->sym.find_reg(name);
    if (r < 0) throw ParseError(s.line, s.col, "undeclared register '" + name + "'");
    if (prog_->sym.reg_owner[r] != cur_thread_)
      throw ParseError(s.line, s.col, "register '" + name + "' belongs to another thread");
    return r;
  }

  void validate(const LitmusProgram& p) {
    for (ThreadId t = 0; t < p.num_threads(); ++t) {
      const ThreadCode& code = p.threads[t];
      // Terminal reachability over the label graph.
      std::vector<bool> seen(code.code.size() + 1, false);
      std::vector<int> stack{0};
      if (code.code.empty()) continue;
      while (!stack.empty()) {
        int l = stack.back();
        stack.pop_back();
        if (l < 0 || l > code.terminal() || seen[l]) continue;
        seen[l] = true;
        if (l == code.terminal()) continue;
        const LabelledCommand& lc = code.code[l];
        if (lc.kind == LabelledCommand::Kind::If) {
          stack.push_back(lc.then_label);
          stack.push_back(lc.else_label);
        } else {
          stack.push_back(lc.next);
          if (lc.abort_next >= 0) stack.push_back(lc.abort_next);
        }
      }
      if (!seen[code.terminal()])
        throw ParseError(0, 0, "thread " + code.name + " cannot reach its final label");
    }
  }

  const SourceFile& file_;
  const std::vector<std::string>& reg_pool_;
  LitmusProgram* prog_ = nullptr;
  ThreadCode* cur_code_ = nullptr;
  ThreadId cur_thread_ = 0;
  bool region_open_ = false;
  int region_first_ = -1;
  int if_depth_ = 0;
  std::vector<RegId> region_regs_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Assertion parser
// ---------------------------------------------------------------------------

namespace {

class AssertParser {
 public:
  AssertParser(const std::string& text, const LitmusProgram& p) : lex_(text), p_(p) {}

  Assertion parse() {
    Assertion a = imp();
    if (lex_.peek().kind != Token::Kind::End) lex_.fail("trailing input in assertion");
    return a;
  }

 private:
  Assertion imp() {
    Assertion l = disj();
    if (accept_punct("=>")) {
      Assertion r = imp();
      return node(Assertion::Kind::Imp, std::move(l), std::move(r));
    }
    return l;
  }

  Assertion disj() {
    Assertion e = conj();
    while (accept_punct("\\/")) e = node(Assertion::Kind::Or, std::move(e), conj());
    return e;
  }

  Assertion conj() {
    Assertion e = unary();
    while (accept_punct("/\\")) e = node(Assertion::Kind::And, std::move(e), unary());
    return e;
  }

  Assertion unary() {
    if (accept_punct("!")) {
      Assertion a;
      a.kind = Assertion::Kind::Not;
      a.kids.push_back(std::make_shared<Assertion>(unary()));
      return a;
    }
    return primary();
  }

  Assertion primary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Punct && t.text == "(") return paren_or_pair();
    if (t.kind == Token::Kind::Punct && t.text == "[") return bracket();
    if (t.kind == Token::Kind::Punct && t.text == "<") return conditional();
    if (t.kind != Token::Kind::Ident) lex_.fail("expected an assertion");

    if (t.text == "true") {
      lex_.take();
      return Assertion{};
    }
    if (t.text == "false") {
      lex_.take();
      Assertion a;
      a.kind = Assertion::Kind::Not;
      a.kids.push_back(std::make_shared<Assertion>(Assertion{}));
      return a;
    }
    if (t.text == "WS") {
      lex_.take();
      expect_punct("@");
      Assertion a;
      a.kind = Assertion::Kind::WSEmpty;
      a.thread = thread_ref();
      expect_punct("=");
      expect_punct("{");
      expect_punct("}");
      return a;
    }
    if (t.text == "Rel" || t.text == "Acq") {
      bool rel = t.text == "Rel";
      lex_.take();
      expect_punct("@");
      Assertion a;
      a.kind = rel ? Assertion::Kind::RelFlag : Assertion::Kind::AcqFlag;
      a.thread = thread_ref();
      return a;
    }
    if (t.text == "M") {
      lex_.take();
      expect_punct("[");
      Assertion a;
      a.kind = Assertion::Kind::MemVal;
      a.tx_loc = txloc_ref();
      expect_punct("=");
      a.val = int_lit();
      expect_punct("]");
      expect_punct("@");
      a.idx_a = idx_term();
      return a;
    }
    if (t.text == "NW") {
      lex_.take();
      expect_punct("[");
      Assertion a;
      a.kind = Assertion::Kind::NeverWritten;
      a.tx_loc = txloc_ref();
      expect_punct(",");
      a.val = int_lit();
      expect_punct("]");
      return a;
    }
    if (t.text == "status") {
      lex_.take();
      expect_punct("@");
      Assertion a;
      a.kind = Assertion::Kind::StatusIs;
      a.thread = thread_ref();
      expect_punct("==");
      std::string s = ident("status");
      if (s == "committed") a.status = TxnStatus::Committed;
      else if (s == "aborted") a.status = TxnStatus::Aborted;
      else if (s == "ready") a.status = TxnStatus::Ready;
      else if (s == "notstarted") a.status = TxnStatus::NotStarted;
      else lex_.fail("unknown status '" + s + "'");
      return a;
    }
    if (t.text == "memlen") {
      lex_.take();
      expect_punct("==");
      Assertion a;
      a.kind = Assertion::Kind::MemLenCmp;
      a.val = int_lit();
      return a;
    }
    if (t.text == "obs") {
      lex_.take();
      expect_punct("(");
      Assertion a;
      a.kind = Assertion::Kind::ObsSubset;
      a.loc = clientloc_ref();
      expect_punct(")");
      expect_punct("@");
      a.thread = thread_ref();
      if (ident("subset") != "subset") lex_.fail("expected 'subset'");
      expect_punct("{");
      while (lex_.peek().kind == Token::Kind::Int) {
        a.val_set.push_back(int_lit());
        accept_punct(",");
      }
      expect_punct("}");
      return a;
    }
    if (t.text == "forall") {
      lex_.take();
      std::string var = ident("index variable");
      if (ident("in") != "in") lex_.fail("expected 'in'");
      if (ident("M") != "M") lex_.fail("expected 'M'");
      expect_punct("(");
      idx_vars_.push_back(var);
      Assertion a;
      a.kind = Assertion::Kind::ForallMemIdx;
      a.kids.push_back(std::make_shared<Assertion>(imp()));
      idx_vars_.pop_back();
      expect_punct(")");
      return a;
    }

    // Bound index variable, ghost, or register predicate.
    for (int i = static_cast<int>(idx_vars_.size()) - 1; i >= 0; --i) {
      if (idx_vars_[i] == t.text) return idx_cmp();
    }
    for (size_t g = 0; g < p_.ghosts.size(); ++g) {
      if (p_.ghosts[g].name == t.text) {
        lex_.take();
        Assertion a;
        a.kind = Assertion::Kind::Ghost;
        a.ghost = static_cast<int>(g);
        return a;
      }
    }
    return reg_pred();
  }

  Assertion paren_or_pair() {
    // Either a parenthesized assertion or a (loc, value) in WS/RS pair.
    expect_punct("(");
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Ident && p_.sym.find_tx_loc(t.text) >= 0) {
      std::string name = lex_.take().text;
      bool hat = accept_punct("^");
      (void)hat;
      if (accept_punct(",")) {
        Assertion a;
        a.tx_loc = p_.sym.find_tx_loc(name);
        const Token& v = lex_.peek();
        if (v.kind == Token::Kind::Int) {
          a.val_expr = Expr::literal(lex_.take().value);
        } else {
          int r = p_.sym.find_reg(ident("value or register"));
          if (r < 0) lex_.fail("unknown register in write/read-set pair");
          a.val_expr = Expr::regref(r);
        }
        expect_punct(")");
        if (ident("in") != "in") lex_.fail("expected 'in'");
        std::string which = ident("WS or RS");
        if (which == "WS") a.kind = Assertion::Kind::InWS;
        else if (which == "RS") a.kind = Assertion::Kind::InRS;
        else lex_.fail("expected WS or RS");
        expect_punct("@");
        a.thread = thread_ref();
        return a;
      }
      lex_.fail("expected ',' in a write/read-set pair");
    }
    Assertion a = imp();
    expect_punct(")");
    return a;
  }

  Assertion bracket() {
    expect_punct("[");
    auto [name, hat] = loc_name();
    Assertion a;
    std::string op;
    if (accept_punct("=")) op = "=";
    else if (accept_punct("~")) op = "~";
    else if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "S") {
      lex_.take();
      expect_punct("=");
      op = "S=";
    } else {
      lex_.fail("expected '=', '~' or 'S=' in a value assertion");
    }
    a.val = int_lit();
    expect_punct("]");
    expect_punct("@");
    a.thread = thread_ref();
    if (hat) {
      a.tx_loc = p_.sym.find_tx_loc(name);
      if (a.tx_loc < 0) lex_.fail("unknown transactional location '" + name + "'");
      if (op == "=") a.kind = Assertion::Kind::TxDefinite;
      else if (op == "~") a.kind = Assertion::Kind::TxPossible;
      else lex_.fail("S= applies to client locations");
    } else {
      a.loc = p_.sym.find_client_loc(name);
      if (a.loc < 0) lex_.fail("unknown client location '" + name + "'");
      if (op == "=") a.kind = Assertion::Kind::ClientDefinite;
      else if (op == "~") a.kind = Assertion::Kind::ClientPossible;
      else a.kind = Assertion::Kind::CommitDefinite;
    }
    return a;
  }

  Assertion conditional() {
    expect_punct("<");
    auto [name, hat] = loc_name();
    expect_punct("=");
    Val u = int_lit();
    expect_punct(">");
    expect_punct("[");
    auto [target, target_hat] = loc_name();
    if (target_hat) lex_.fail("conditional targets are client locations");
    expect_punct("=");
    Val v = int_lit();
    expect_punct("]");
    expect_punct("@");
    Assertion a;
    a.thread = thread_ref();
    a.cond_val = u;
    a.val = v;
    a.loc = p_.sym.find_client_loc(target);
    if (a.loc < 0) lex_.fail("unknown client location '" + target + "'");
    if (hat) {
      a.kind = Assertion::Kind::TxConditional;
      a.cond_loc = p_.sym.find_tx_loc(name);
      if (a.cond_loc < 0) lex_.fail("unknown transactional location '" + name + "'");
    } else {
      a.kind = Assertion::Kind::ClientConditional;
      a.cond_loc = p_.sym.find_client_loc(name);
      if (a.cond_loc < 0) lex_.fail("unknown client location '" + name + "'");
    }
    return a;
  }

  Assertion idx_cmp() {
    Assertion a;
    a.kind = Assertion::Kind::IdxCmp;
    a.idx_a = idx_term();
    Token op = lex_.take();
    if (op.text == "==") a.cmp_op = 0;
    else if (op.text == "!=") a.cmp_op = 1;
    else if (op.text == "<") a.cmp_op = 2;
    else if (op.text == "<=") a.cmp_op = 3;
    else throw ParseError(op.line, op.col, "expected an index comparison");
    a.idx_b = idx_term();
    return a;
  }

  Assertion reg_pred() {
    Assertion a;
    a.kind = Assertion::Kind::RegPred;
    BoolExpr e;
    e.a = reg_expr();
    if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "in") {
      lex_.take();
      e.kind = BoolExpr::Kind::InSet;
      expect_punct("{");
      while (lex_.peek().kind == Token::Kind::Int) {
        e.set.push_back(int_lit());
        accept_punct(",");
      }
      expect_punct("}");
    } else {
      Token op = lex_.take();
      if (op.text == "==") e.kind = BoolExpr::Kind::Eq;
      else if (op.text == "!=") e.kind = BoolExpr::Kind::Ne;
      else if (op.text == "<") e.kind = BoolExpr::Kind::Lt;
      else if (op.text == "<=") e.kind = BoolExpr::Kind::Le;
      else throw ParseError(op.line, op.col, "expected a comparison");
      e.b = reg_expr();
    }
    a.reg_pred = std::move(e);
    return a;
  }

  Expr reg_expr() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Int) return Expr::literal(lex_.take().value);
    std::string name = ident("register");
    int r = p_.sym.find_reg(name);
    if (r < 0) lex_.fail("unknown register '" + name + "'");
    return Expr::regref(r);
  }

  IdxTerm idx_term() {
    IdxTerm t;
    const Token& tok = lex_.peek();
    if (tok.kind == Token::Kind::Int) {
      t.kind = IdxTerm::Kind::Lit;
      t.lit = static_cast<int>(lex_.take().value);
      return t;
    }
    std::string name = ident("index term");
    if (name == "memlen") {
      // memlen-1 style terms fold into an offset carried in `lit`.
      t.kind = IdxTerm::Kind::MemLen;
      if (accept_punct("-")) {
        t.lit = -static_cast<int>(int_lit());
      } else if (lex_.peek().kind == Token::Kind::Int && lex_.peek().value < 0) {
        t.lit = static_cast<int>(lex_.take().value);
      }
      return t;
    }
    for (int i = static_cast<int>(idx_vars_.size()) - 1; i >= 0; --i) {
      if (idx_vars_[i] == name) {
        t.kind = IdxTerm::Kind::Var;
        t.var = i;
        return t;
      }
    }
    lex_.fail("unknown index term '" + name + "'");
  }

  std::pair<std::string, bool> loc_name() {
    std::string n = ident("location");
    bool hat = accept_punct("^");
    return {n, hat};
  }

  ThreadId thread_ref() {
    std::string n = ident("thread");
    int t = p_.sym.find_thread(n);
    if (t < 0) lex_.fail("unknown thread '" + n + "'");
    return t;
  }

  int txloc_ref() {
    auto [n, hat] = loc_name();
    int x = p_.sym.find_tx_loc(n);
    if (x < 0) lex_.fail("unknown transactional location '" + n + "'");
    return x;
  }

  LocId clientloc_ref() {
    std::string n = ident("client location");
    int x = p_.sym.find_client_loc(n);
    if (x < 0) lex_.fail("unknown client location '" + n + "'");
    return x;
  }

  Val int_lit() {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Int) throw ParseError(t.line, t.col, "expected an integer");
    return t.value;
  }

  std::string ident(const std::string& what) {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Ident) throw ParseError(t.line, t.col, "expected " + what);
    return t.text;
  }

  void expect_punct(const std::string& pn) {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Punct || t.text != pn)
      throw ParseError(t.line, t.col, "expected '" + pn + "', found '" + t.text + "'");
  }

  bool accept_punct(const std::string& pn) {
    if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == pn) {
      lex_.take();
      return true;
    }
    return false;
  }

  Assertion node(Assertion::Kind k, Assertion l, Assertion r) {
    Assertion a;
    a.kind = k;
    a.kids.push_back(std::make_shared<Assertion>(std::move(l)));
    a.kids.push_back(std::make_shared<Assertion>(std::move(r)));
    return a;
  }

  Lexer lex_;
  const LitmusProgram& p_;
  std::vector<std::string> idx_vars_;
};

LitmusProgram lower_file(const SourceFile& file, const std::vector<std::string>& reg_pool,
                         std::vector<std::vector<std::string>>* raw_asserts) {
  Lowerer low(file, reg_pool);
  LitmusProgram p = low.lower();
  if (raw_asserts) *raw_asserts = std::move(low.asserts_);
  return p;
}

}  // namespace

LitmusProgram parse_litmus(const std::string& text) {
  ProgramParser pp(text, false);
  SourceFile file = pp.parse();
  return lower_file(file, pp.reg_pool_, nullptr);
}

AnnotatedProgram parse_outline(const std::string& text) {
  ProgramParser pp(text, true);
  SourceFile file = pp.parse();
  AnnotatedProgram out;
  std::vector<std::vector<std::string>> raw;
  out.program = lower_file(file, pp.reg_pool_, &raw);

  auto parse_or_true = [&](const std::string& s) {
    if (s.empty()) return assert_true();
    return parse_assertion(s, out.program);
  };
  out.outline.init = parse_or_true(file.init_assert);
  out.outline.fin = parse_or_true(file.fin_assert);
  out.outline.ann.resize(out.program.num_threads());
  for (ThreadId t = 0; t < out.program.num_threads(); ++t) {
    out.outline.ann[t].resize(out.program.threads[t].terminal() + 1);
    for (size_t l = 0; l < raw[t].size(); ++l) out.outline.ann[t][l] = parse_or_true(raw[t][l]);
    for (size_t l = raw[t].size(); l < out.outline.ann[t].size(); ++l)
      out.outline.ann[t][l] = assert_true();
  }
  return out;
}

Assertion parse_assertion(const std::string& text, const LitmusProgram& program) {
  AssertParser ap(text, program);
  Assertion a = ap.parse();
  a.text = text;
  return a;
}

BoolExpr parse_predicate(const std::string& text, const LitmusProgram& program) {
  // Reuse the assertion machinery for plain register predicates by parsing
  // through a dedicated program-scoped parser: predicates share the litmus
  // grammar, so a tiny adapter suffices.
  Lexer lex(text);
  struct PredParser {
    Lexer& lex;
    const LitmusProgram& p;

    BoolExpr parse() {
      BoolExpr e = imp();
      if (lex.peek().kind != Token::Kind::End) lex.fail("trailing input in predicate");
      return e;
    }

    BoolExpr imp() {
      BoolExpr l = disj();
      if (punct("=>")) {
        BoolExpr r = imp();
        BoolExpr e;
        e.kind = BoolExpr::Kind::Imp;
        e.l = std::make_shared<BoolExpr>(std::move(l));
        e.r = std::make_shared<BoolExpr>(std::move(r));
        return e;
      }
      return l;
    }
    BoolExpr disj() {
      BoolExpr e = conj();
      while (punct("\\/")) {
        BoolExpr r = conj();
        BoolExpr n;
        n.kind = BoolExpr::Kind::Or;
        n.l = std::make_shared<BoolExpr>(std::move(e));
        n.r = std::make_shared<BoolExpr>(std::move(r));
        e = std::move(n);
      }
      return e;
    }
    BoolExpr conj() {
      BoolExpr e = unary();
      while (punct("/\\")) {
        BoolExpr r = unary();
        BoolExpr n;
        n.kind = BoolExpr::Kind::And;
        n.l = std::make_shared<BoolExpr>(std::move(e));
        n.r = std::make_shared<BoolExpr>(std::move(r));
        e = std::move(n);
      }
      return e;
    }
    BoolExpr unary() {
      if (punct("!")) {
        BoolExpr e;
        e.kind = BoolExpr::Kind::Not;
        e.l = std::make_shared<BoolExpr>(unary());
        return e;
      }
      if (punct("(")) {
        BoolExpr e = imp();
        expect(")");
        return e;
      }
      return atom();
    }
    BoolExpr atom() {
      if (lex.peek().kind == Token::Kind::Ident && lex.peek().text == "true") {
        lex.take();
        return BoolExpr{};
      }
      BoolExpr e;
      e.a = expr();
      if (lex.peek().kind == Token::Kind::Ident && lex.peek().text == "in") {
        lex.take();
        e.kind = BoolExpr::Kind::InSet;
        expect("{");
        while (lex.peek().kind == Token::Kind::Int) {
          e.set.push_back(lex.take().value);
          punct(",");
        }
        expect("}");
        return e;
      }
      Token op = lex.take();
      if (op.text == "==") e.kind = BoolExpr::Kind::Eq;
      else if (op.text == "!=") e.kind = BoolExpr::Kind::Ne;
      else if (op.text == "<") e.kind = BoolExpr::Kind::Lt;
      else if (op.text == "<=") e.kind = BoolExpr::Kind::Le;
      else throw ParseError(op.line, op.col, "expected a comparison");
      e.b = expr();
      return e;
    }
    Expr expr() {
      Expr e = prim();
      while (lex.peek().kind == Token::Kind::Punct &&
             (lex.peek().text == "+" || lex.peek().text == "-")) {
        bool add = lex.take().text == "+";
        Expr r = prim();
        Expr n;
        n.kind = add ? Expr::Kind::Add : Expr::Kind::Sub;
        n.lhs = std::make_shared<Expr>(std::move(e));
        n.rhs = std::make_shared<Expr>(std::move(r));
        e = std::move(n);
      }
      return e;
    }
    Expr prim() {
      Token t = lex.take();
      if (t.kind == Token::Kind::Int) return Expr::literal(t.value);
      if (t.kind == Token::Kind::Ident) {
        int r = p.sym.find_reg(t.text);
        if (r < 0) throw ParseError(t.line, t.col, "unknown register '" + t.text + "'");
        return Expr::regref(r);
      }
      throw ParseError(t.line, t.col, "expected a value or register");
    }
    bool punct(const std::string& s) {
      if (lex.peek().kind == Token::Kind::Punct && lex.peek().text == s) {
        lex.take();
        return true;
      }
      return false;
    }
    void expect(const std::string& s) {
      Token t = lex.take();
      if (t.kind != Token::Kind::Punct || t.text != s)
        throw ParseError(t.line, t.col, "expected '" + s + "'");
    }
  } parser{lex, program};
  return parser.parse();
}

}  // namespace ratm
