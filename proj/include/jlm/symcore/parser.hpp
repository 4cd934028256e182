#pragma once

// Recursive-descent parser for the expression grammar.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := rational | name | func '(' expr ')' | '(' expr ')'
//
// A rational literal `p/q` is a single token when the digits and the slash are
// adjacent, except directly after '^': x^2/6 is x^2 divided by 6, and a
// fractional exponent needs parentheses, x^(1/2). The reserved names are t, x
// and xdot.

#include <cctype>
#include <string>
#include <vector>

#include "jlm/symcore/expr.hpp"

namespace jlm {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UndeclaredSymbol : public std::runtime_error {
 public:
  explicit UndeclaredSymbol(const std::string& name)
      : std::runtime_error("undeclared symbol '" + name + "'"), name_(name) {}
  const std::string& symbol() const { return name_; }

 private:
  std::string name_;
};

namespace detail {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& params) : s_(text), params_(params) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    Expr acc = term();
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero_literal()) throw ParseError("division by zero", at);
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr b = primary();
    if (accept('^')) {
      std::size_t at = pos_;
      exponent_ = true;
      Expr e = unary();
      try {
        return jlm::pow(b, e);
      } catch (const SymbolicError& err) {
        throw ParseError(err.what(), at);
      }
    }
    return b;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    bool fuse = !exponent_;
    exponent_ = false;
    if (std::isdigit(static_cast<unsigned char>(c))) return number(fuse);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number(bool fuse) {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string num = s_.substr(start, pos_ - start);
    if (pos_ < s_.size() && s_[pos_] == '.') throw ParseError("decimal literals are not allowed", pos_);
    if (fuse && pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      std::size_t dstart = ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      mpz_class den(s_.substr(dstart, pos_ - dstart));
      if (den == 0) throw ParseError("division by zero", dstart);
      Rational q(mpz_class(num), den);
      q.canonicalize();
      return Expr(q);
    }
    return Expr(Rational(mpz_class(num)));
  }

  Expr name() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    std::string id = s_.substr(start, pos_ - start);
    static const std::vector<std::pair<std::string, int>> funcs = {
        {"exp", 0}, {"log", 1}, {"sin", 2}, {"cos", 3}, {"atan", 4}, {"sqrt", 5}};
    for (const auto& [fname, code] : funcs) {
      if (id != fname) continue;
      skip();
      if (pos_ >= s_.size() || s_[pos_] != '(') throw ParseError("function '" + id + "' requires '('", pos_);
      ++pos_;
      Expr a = expr();
      expect(')');
      try {
        switch (code) {
          case 0: return jlm::exp(a);
          case 1: return jlm::log(a);
          case 2: return jlm::sin(a);
          case 3: return jlm::cos(a);
          case 4: return jlm::atan(a);
          default: return jlm::sqrt(a);
        }
      } catch (const SymbolicError& err) {
        throw ParseError(err.what(), start);
      }
    }
    if (id == names::t || id == names::x || id == names::v) return Expr::symbol(id);
    for (const auto& p : params_) {
      if (p == id) return Expr::symbol(id);
    }
    throw UndeclaredSymbol(id);
  }

  const std::string& s_;
  const std::vector<std::string>& params_;
  std::size_t pos_ = 0;
  bool exponent_ = false;
};

}  // namespace detail

/// Parses `text`; every free name other than t, x, xdot must be in `params`.
inline Expr parse(const std::string& text, const std::vector<std::string>& params = {}) {
  return detail::Parser(text, params).run();
}

}  // namespace jlm
