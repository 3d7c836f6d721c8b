#pragma once

// Textual dialect for extended regular expressions.
//
//   expr  := inter ('|' inter)*
//   inter := cat ('&' cat)*
//   cat   := post+
//   post  := atom ('*' | '+' | '?' | '{' INT ',' (INT | 'inf') '}')*
//   atom  := SYMBOL | QUOTED | '(' expr ')' | '()' | '%empty%'
//
// Binary operators are left-associative. `()` is epsilon and `%empty%` is
// the empty language. Whitespace between tokens is ignored.

#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dretk/regex.hpp"

namespace dretk {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t offset, std::set<std::string> expected, const std::string& found)
      : std::runtime_error(describe(offset, expected, found)),
        offset_(offset),
        expected_(std::move(expected)) {}

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
  [[nodiscard]] const std::set<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string describe(std::size_t offset, const std::set<std::string>& expected,
                              const std::string& found) {
    std::string msg = "syntax error at offset " + std::to_string(offset) + ": found " + found +
                      ", expected one of {";
    bool first = true;
    for (const auto& e : expected) {
      if (!first) msg += ", ";
      msg += e;
      first = false;
    }
    return msg + "}";
  }

  std::size_t offset_;
  std::set<std::string> expected_;
};

class BoundError : public std::runtime_error {
 public:
  BoundError(std::size_t offset, const std::string& what)
      : std::runtime_error("bound error at offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

namespace detail {

inline bool is_symbol_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

inline bool is_symbol_char(unsigned char c) {
  return is_symbol_start(c) || (c >= '0' && c <= '9') || c == '.' || c == ':' || c == '-';
}

inline bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Regex parse() {
    skip_ws();
    Regex r = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail({"'|'", "'&'", "'*'", "'+'", "'?'", "'{'", "symbol", "'('", "end of input"});
    return r;
  }

 private:
  Regex parse_expr() {
    Regex acc = parse_inter();
    while (peek() == '|') {
      ++pos_;
      skip_ws();
      acc = Regex::alt(acc, parse_inter());
    }
    return acc;
  }

  Regex parse_inter() {
    Regex acc = parse_cat();
    while (peek() == '&') {
      ++pos_;
      skip_ws();
      acc = Regex::interleave(acc, parse_cat());
    }
    return acc;
  }

  Regex parse_cat() {
    Regex acc = parse_post();
    while (starts_atom()) acc = Regex::cat(acc, parse_post());
    return acc;
  }

  Regex parse_post() {
    Regex acc = parse_atom();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        acc = Regex::star(acc);
      } else if (c == '+') {
        ++pos_;
        acc = Regex::plus(acc);
      } else if (c == '?') {
        ++pos_;
        acc = Regex::optional(acc);
      } else if (c == '{') {
        const std::size_t open = pos_;
        ++pos_;
        skip_ws();
        const std::uint32_t lo = parse_int(false);
        skip_ws();
        expect(',');
        skip_ws();
        const std::uint32_t hi = parse_int(true);
        skip_ws();
        expect('}');
        if (hi == 0) throw BoundError(open, "upper bound must be at least 1");
        if (lo > hi) throw BoundError(open, "lower bound exceeds upper bound");
        acc = Regex::count(acc, lo, hi);
      } else {
        break;
      }
      skip_ws();
    }
    return acc;
  }

  Regex parse_atom() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        skip_ws();
        return Regex::epsilon();
      }
      Regex inner = parse_expr();
      expect(')');
      skip_ws();
      return inner;
    }
    if (c == '%') {
      constexpr std::string_view kEmpty = "%empty%";
      if (text_.substr(pos_, kEmpty.size()) != kEmpty) fail({"'%empty%'"});
      pos_ += kEmpty.size();
      skip_ws();
      return Regex::empty();
    }
    if (c == '"') return parse_quoted();
    if (pos_ < text_.size() && is_symbol_start(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_symbol_char(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      Regex s = Regex::symbol(std::string(text_.substr(start, pos_ - start)));
      skip_ws();
      return s;
    }
    fail({"symbol", "quoted symbol", "'('", "'()'", "'%empty%'"});
  }

  Regex parse_quoted() {
    const std::size_t start = pos_;
    ++pos_;
    std::string name;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        ++pos_;
        if (pos_ >= text_.size()) break;
      }
      name.push_back(text_[pos_++]);
    }
    if (pos_ >= text_.size()) fail({"'\"'"});
    ++pos_;
    if (name.empty()) throw SyntaxError(start, {"non-empty quoted symbol"}, "'\"\"'");
    skip_ws();
    return Regex::symbol(std::move(name));
  }

  std::uint32_t parse_int(bool allow_inf) {
    if (allow_inf && text_.substr(pos_, 3) == "inf" &&
        (pos_ + 3 >= text_.size() || !is_symbol_char(static_cast<unsigned char>(text_[pos_ + 3])))) {
      pos_ += 3;
      return CountBounds::kUnbounded;
    }
    if (pos_ >= text_.size() || text_[pos_] < '0' || text_[pos_] > '9')
      fail(allow_inf ? std::set<std::string>{"integer", "'inf'"} : std::set<std::string>{"integer"});
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (v >= CountBounds::kUnbounded) throw BoundError(start, "bound too large");
      ++pos_;
    }
    return static_cast<std::uint32_t>(v);
  }

  bool starts_atom() const {
    const char c = peek();
    return c == '(' || c == '"' || c == '%' ||
           (pos_ < text_.size() && is_symbol_start(static_cast<unsigned char>(c)));
  }

  void expect(char c) {
    if (peek() != c) fail({std::string("'") + c + "'"});
    ++pos_;
  }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    std::string found = pos_ >= text_.size() ? "end of input"
                                              : std::string("'") + text_[pos_] + "'";
    throw SyntaxError(pos_, std::move(expected), found);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && is_space(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Binding strength used to decide where parentheses are needed.
inline int precedence(Kind k) {
  switch (k) {
    case Kind::Union: return 1;
    case Kind::Interleave: return 2;
    case Kind::Concat: return 3;
    case Kind::Star:
    case Kind::Plus:
    case Kind::Optional:
    case Kind::Count: return 4;
    default: return 5;
  }
}

inline bool bare_symbol(const std::string& name) {
  if (name.empty() || !is_symbol_start(static_cast<unsigned char>(name[0]))) return false;
  for (unsigned char c : name)
    if (!is_symbol_char(c)) return false;
  return true;
}

inline void render_into(const Regex& r, std::string& out);

inline void render_operand(const Regex& r, int min_prec, std::string& out) {
  if (precedence(r.kind()) < min_prec) {
    out.push_back('(');
    render_into(r, out);
    out.push_back(')');
  } else {
    render_into(r, out);
  }
}

inline void append_joined(std::string& out, const std::string& piece) {
  if (!out.empty() && !piece.empty() && is_symbol_char(static_cast<unsigned char>(out.back())) &&
      is_symbol_char(static_cast<unsigned char>(piece.front())))
    out.push_back(' ');
  out += piece;
}

inline void render_into(const Regex& r, std::string& out) {
  switch (r.kind()) {
    case Kind::Empty: out += "%empty%"; return;
    case Kind::Epsilon: out += "()"; return;
    case Kind::Symbol:
      if (bare_symbol(r.name())) {
        out += r.name();
      } else {
        out.push_back('"');
        for (char c : r.name()) {
          if (c == '"' || c == '\\') out.push_back('\\');
          out.push_back(c);
        }
        out.push_back('"');
      }
      return;
    case Kind::Union:
    case Kind::Interleave: {
      const int p = precedence(r.kind());
      render_operand(r.left(), p, out);
      out.push_back(r.is(Kind::Union) ? '|' : '&');
      render_operand(r.right(), p + 1, out);
      return;
    }
    case Kind::Concat: {
      std::string lhs, rhs;
      render_operand(r.left(), 3, lhs);
      render_operand(r.right(), 4, rhs);
      out += lhs;
      append_joined(out, rhs);
      return;
    }
    case Kind::Star:
    case Kind::Plus:
    case Kind::Optional:
    case Kind::Count:
      render_operand(r.child(), 4, out);
      if (r.is(Kind::Star)) out.push_back('*');
      else if (r.is(Kind::Plus)) out.push_back('+');
      else if (r.is(Kind::Optional)) out.push_back('?');
      else {
        out += "{" + std::to_string(r.bounds().min) + ",";
        out += r.bounds().unbounded() ? std::string("inf") : std::to_string(r.bounds().max);
        out += "}";
      }
      return;
  }
}

}  // namespace detail

inline Regex parse_regex(std::string_view text) { return detail::Parser(text).parse(); }

// Canonical text: minimal parentheses, no whitespace except between two
// adjacent bare symbols.
inline std::string render(const Regex& r) {
  std::string out;
  detail::render_into(r, out);
  return out;
}

}  // namespace dretk
