#pragma once

// Tokenizer for LNS scene listings.

#include <cctype>
#include <charconv>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace simplexviz::lns {

struct Position {
  int line = 1;
  int column = 1;

  friend constexpr auto operator<=>(const Position&, const Position&) = default;
};

inline std::string to_string(Position pos) { return std::to_string(pos.line) + ":" + std::to_string(pos.column); }

/// Any tokenize/parse/evaluate failure. what() is prefixed with line:col when known.
class LnsError : public std::runtime_error {
 public:
  LnsError(const std::string& message, Position pos)
      : std::runtime_error(to_string(pos) + ": " + message), position_(pos), message_(message), has_position_(true) {}
  explicit LnsError(const std::string& message) : std::runtime_error(message), message_(message) {}

  [[nodiscard]] Position position() const noexcept { return position_; }
  [[nodiscard]] bool has_position() const noexcept { return has_position_; }
  [[nodiscard]] const std::string& message() const noexcept { return message_; }

 private:
  Position position_;
  std::string message_;
  bool has_position_ = false;
};

class SyntaxError : public LnsError {
 public:
  using LnsError::LnsError;
};

enum class TokenKind { Ident, Number, String, Punct, Keyword };

struct Token {
  TokenKind kind = TokenKind::Ident;
  std::string lexeme;  // string tokens hold the unquoted text
  Position position;

  friend bool operator==(const Token&, const Token&) = default;
};

inline std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::Punct: return "punctuation";
    case TokenKind::Keyword: return "keyword";
  }
  return "token";
}

inline bool is_keyword(std::string_view word) { return word == "var" || word == "try" || word == "catch"; }

namespace detail {

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
inline bool is_ident_char(char c) { return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_punct(char c) {
  return c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',' || c == ';' || c == '=';
}

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      if (at_end()) break;
      const Position start = pos_;
      const char c = peek();
      if (is_punct(c)) {
        advance();
        out.push_back({TokenKind::Punct, std::string(1, c), start});
      } else if (c == '"') {
        out.push_back({TokenKind::String, read_string(start), start});
      } else if (is_digit(c) || c == '.' || ((c == '-' || c == '+') && starts_number(1))) {
        out.push_back({TokenKind::Number, read_number(start), start});
      } else if (is_ident_start(c)) {
        std::string word;
        while (!at_end() && is_ident_char(peek())) word += advance();
        const auto kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Ident;
        out.push_back({kind, std::move(word), start});
      } else {
        throw SyntaxError(std::string("illegal character '") + c + "'", start);
      }
    }
    return out;
  }

 private:
  [[nodiscard]] bool at_end() const { return index_ >= src_.size(); }
  [[nodiscard]] char peek(std::size_t ahead = 0) const {
    return index_ + ahead < src_.size() ? src_[index_ + ahead] : '\0';
  }

  char advance() {
    const char c = src_[index_++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return c;
  }

  [[nodiscard]] bool starts_number(std::size_t ahead) const {
    const char c = peek(ahead);
    return is_digit(c) || (c == '.' && is_digit(peek(ahead + 1)));
  }

  void skip_blank() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (static_cast<unsigned char>(c) == 0xEF && static_cast<unsigned char>(peek(1)) == 0xBB &&
                 static_cast<unsigned char>(peek(2)) == 0xBF && index_ == 0) {
        index_ += 3;  // UTF-8 byte order mark
      } else {
        break;
      }
    }
  }

  std::string read_string(Position start) {
    advance();  // opening quote
    std::string text;
    while (true) {
      if (at_end() || peek() == '\n') throw SyntaxError("unterminated string", start);
      const char c = advance();
      if (c == '"') break;
      text += c;
    }
    return text;
  }

  std::string read_number(Position start) {
    std::string text;
    if (peek() == '-' || peek() == '+') text += advance();
    while (is_digit(peek())) text += advance();
    if (peek() == '.') {
      text += advance();
      while (is_digit(peek())) text += advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (is_digit(peek(1)) || ((peek(1) == '-' || peek(1) == '+') && is_digit(peek(2))))) {
      text += advance();
      if (peek() == '-' || peek() == '+') text += advance();
      while (is_digit(peek())) text += advance();
    }
    if (is_ident_start(peek())) throw SyntaxError("malformed number '" + text + peek() + "'", start);
    return text;
  }

  std::string_view src_;
  std::size_t index_ = 0;
  Position pos_;
};

}  // namespace detail

/// Splits LNS source into tokens. Whitespace and // comments are dropped.
inline std::vector<Token> tokenize(std::string_view source) { return detail::Lexer(source).run(); }

/// Numeric value of a Number token.
inline double number_value(const Token& token) {
  std::string_view text = token.lexeme;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw SyntaxError("malformed number '" + token.lexeme + "'", token.position);
  }
  return value;
}

}  // namespace simplexviz::lns
