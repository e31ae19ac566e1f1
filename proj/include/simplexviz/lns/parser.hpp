#pragma once

// Recursive-descent parser for LNS.
//
//   program   := statement*
//   statement := varDecl | tryCatch | call ";"
//   varDecl   := "var" binding ("," binding)* ";"
//   binding   := Ident "=" arg
//   tryCatch  := "try" "{" call ";" "}" "catch" "(" Ident ")" "{" "}"
//   call      := Ident "(" (arg ("," arg)*)? ")"
//   arg       := Number | String | array | Ident | Ident "[" Number "]"
//   array     := "[" (arg ("," arg)*)? "]"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "simplexviz/lns/lexer.hpp"

namespace simplexviz::lns {

struct Value;
using Array = std::vector<Value>;

struct VarRef {
  std::string name;
  friend bool operator==(const VarRef&, const VarRef&) = default;
};

struct IndexedRef {
  std::string name;
  std::size_t index = 0;
  friend bool operator==(const IndexedRef&, const IndexedRef&) = default;
};

/// Argument or binding value. Evaluated values never hold references.
struct Value {
  std::variant<double, std::string, Array, VarRef, IndexedRef> data;
  Position position;

  [[nodiscard]] bool is_number() const { return std::holds_alternative<double>(data); }
  [[nodiscard]] bool is_text() const { return std::holds_alternative<std::string>(data); }
  [[nodiscard]] bool is_array() const { return std::holds_alternative<Array>(data); }

  // Positions are provenance, not content.
  friend bool operator==(const Value& a, const Value& b) { return a.data == b.data; }
};

inline Value number(double v) { return {v, {}}; }
inline Value text(std::string s) { return {std::move(s), {}}; }
inline Value array(Array items) { return {std::move(items), {}}; }
inline Value ref(std::string name) { return {VarRef{std::move(name)}, {}}; }

struct Call {
  std::string name;
  std::vector<Value> args;
  Position position;
  friend bool operator==(const Call& a, const Call& b) { return a.name == b.name && a.args == b.args; }
};

struct Binding {
  std::string name;
  Value value;
  Position position;
  friend bool operator==(const Binding& a, const Binding& b) { return a.name == b.name && a.value == b.value; }
};

struct VarDecl {
  std::vector<Binding> bindings;
  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct TryCatch {
  Call call;
  std::string exception_name = "ex";
  friend bool operator==(const TryCatch&, const TryCatch&) = default;
};

using Statement = std::variant<Call, VarDecl, TryCatch>;

struct Script {
  std::vector<Statement> statements;

  template <class T>
  [[nodiscard]] std::size_t count() const {
    std::size_t n = 0;
    for (const Statement& s : statements) n += std::holds_alternative<T>(s) ? 1 : 0;
    return n;
  }

  friend bool operator==(const Script&, const Script&) = default;
};

namespace detail {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  Script run() {
    Script script;
    while (!at_end()) script.statements.push_back(statement());
    return script;
  }

 private:
  [[nodiscard]] bool at_end() const { return index_ >= tokens_.size(); }
  [[nodiscard]] const Token* peek() const { return at_end() ? nullptr : &tokens_[index_]; }

  [[nodiscard]] bool check(TokenKind kind, std::string_view lexeme = {}) const {
    const Token* t = peek();
    return t && t->kind == kind && (lexeme.empty() || t->lexeme == lexeme);
  }
  [[nodiscard]] bool check_punct(char c) const { return check(TokenKind::Punct, std::string_view(&c, 1)); }

  [[noreturn]] void fail(const std::string& expected) const {
    if (const Token* t = peek()) {
      const std::string found = t->kind == TokenKind::String ? "\"" + t->lexeme + "\"" : "'" + t->lexeme + "'";
      throw SyntaxError("expected " + expected + " but found " + found, t->position);
    }
    const Position end = tokens_.empty() ? Position{} : tokens_.back().position;
    throw SyntaxError("expected " + expected + " but reached end of input", end);
  }

  const Token& expect(TokenKind kind, std::string_view lexeme, const std::string& what) {
    if (!check(kind, lexeme)) fail(what);
    return tokens_[index_++];
  }
  const Token& expect_punct(char c) { return expect(TokenKind::Punct, std::string_view(&c, 1), std::string("'") + c + "'"); }
  const Token& expect_ident() { return expect(TokenKind::Ident, {}, "identifier"); }

  Statement statement() {
    if (check(TokenKind::Keyword, "var")) return var_decl();
    if (check(TokenKind::Keyword, "try")) return try_catch();
    if (check(TokenKind::Ident)) {
      Call c = call();
      expect_punct(';');
      return c;
    }
    fail("statement");
  }

  VarDecl var_decl() {
    ++index_;
    VarDecl decl;
    do {
      const Token& name = expect_ident();
      expect_punct('=');
      Value v = arg();
      decl.bindings.push_back({name.lexeme, std::move(v), name.position});
    } while (accept_punct(','));
    expect_punct(';');
    return decl;
  }

  TryCatch try_catch() {
    ++index_;
    expect_punct('{');
    TryCatch tc;
    tc.call = call();
    expect_punct(';');
    expect_punct('}');
    expect(TokenKind::Keyword, "catch", "'catch'");
    expect_punct('(');
    tc.exception_name = expect_ident().lexeme;
    expect_punct(')');
    expect_punct('{');
    expect_punct('}');
    return tc;
  }

  Call call() {
    const Token& name = expect_ident();
    Call c{name.lexeme, {}, name.position};
    expect_punct('(');
    if (!check_punct(')')) {
      do {
        c.args.push_back(arg());
      } while (accept_punct(','));
    }
    expect_punct(')');
    return c;
  }

  Value arg() {
    const Token* t = peek();
    if (!t) fail("value");
    switch (t->kind) {
      case TokenKind::Number:
        ++index_;
        return {number_value(*t), t->position};
      case TokenKind::String:
        ++index_;
        return {t->lexeme, t->position};
      case TokenKind::Ident: {
        ++index_;
        if (accept_punct('[')) {
          const Token& idx = expect(TokenKind::Number, {}, "array index");
          const double v = number_value(idx);
          if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) {
            throw SyntaxError("array index must be a non-negative integer", idx.position);
          }
          expect_punct(']');
          return {IndexedRef{t->lexeme, static_cast<std::size_t>(v)}, t->position};
        }
        return {VarRef{t->lexeme}, t->position};
      }
      case TokenKind::Punct:
        if (t->lexeme == "[") return array_literal();
        break;
      case TokenKind::Keyword:
        break;
    }
    fail("value");
  }

  Value array_literal() {
    const Token& open = expect_punct('[');
    Array items;
    if (!check_punct(']')) {
      do {
        items.push_back(arg());
      } while (accept_punct(','));
    }
    expect_punct(']');
    return {std::move(items), open.position};
  }

  bool accept_punct(char c) {
    if (!check_punct(c)) return false;
    ++index_;
    return true;
  }

  const std::vector<Token>& tokens_;
  std::size_t index_ = 0;
};

}  // namespace detail

inline Script parse(const std::vector<Token>& tokens) { return detail::Parser(tokens).run(); }

inline Script parse(std::string_view source) { return parse(tokenize(source)); }

}  // namespace simplexviz::lns
