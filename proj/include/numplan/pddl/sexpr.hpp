#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "numplan/error.hpp"

namespace numplan::pddl {

/// A parsed S-expression. Atoms are lowercased (PDDL symbols are
/// case-insensitive).
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  SourcePos pos;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  std::size_t size() const { return items.size(); }
  const SExpr& operator[](std::size_t i) const { return items[i]; }

  /// True for `(head ...)` where head is the given keyword.
  bool has_head(std::string_view head) const { return is_list && !items.empty() && items[0].is_atom(head); }
};

[[noreturn]] inline void syntax_error(const std::string& msg, SourcePos pos) {
  throw Error(ErrorKind::SyntaxError, msg, {}, pos);
}

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  /// Reads exactly one top-level expression; trailing non-comment text is an
  /// error.
  SExpr read_single() {
    skip_space();
    if (at_end()) syntax_error("empty input", here());
    SExpr e = read();
    skip_space();
    if (!at_end()) syntax_error("unexpected text after the closing parenthesis", here());
    return e;
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }
  SourcePos here() const { return {line_, col_}; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (!at_end()) {
      const char c = text_[i_];
      if (c == ';') {
        while (!at_end() && text_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.pos = here();
    const char c = text_[i_];
    if (c == ')') syntax_error("unexpected ')'", e.pos);
    if (c == '(') {
      advance();
      e.is_list = true;
      for (;;) {
        skip_space();
        if (at_end()) syntax_error("unbalanced '(': missing ')'", e.pos);
        if (text_[i_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    while (!at_end()) {
      const char ch = text_[i_];
      if (ch == '(' || ch == ')' || ch == ';' || std::isspace(static_cast<unsigned char>(ch))) break;
      e.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline SExpr read_sexpr(std::string_view text) { return SExprReader(text).read_single(); }

}  // namespace numplan::pddl
