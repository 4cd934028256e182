#pragma once

// Renders expressions in the infix grammar accepted by parse().

#include <sstream>
#include <string>

#include "jlm/symcore/expr.hpp"

namespace jlm {

namespace detail {

enum Prec : int { kAdd = 1, kMul = 2, kPow = 3, kAtom = 4 };

std::string render(const Expr& e, int context);

inline std::string rational_text(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string wrap(const std::string& s, int own, int context) {
  return own < context ? "(" + s + ")" : s;
}

inline std::string render_product(const Rational& coeff, const std::vector<Expr>& factors, int context) {
  std::vector<std::string> num, den;
  Rational c = abs(coeff);
  for (const auto& f : factors) {
    if (f.is_pow() && sgn(f.exponent()) < 0) {
      den.push_back(render(make_pow(f.base(), -f.exponent()), kPow));
    } else {
      num.push_back(render(f, kMul));
    }
  }
  std::string out;
  if (c.get_num() != 1 || num.empty()) out = c.get_num().get_str();
  for (const auto& s : num) {
    if (!out.empty()) out += "*";
    out += s;
  }
  if (c.get_den() != 1) den.insert(den.begin(), c.get_den().get_str());
  if (!den.empty()) {
    out += "/";
    if (den.size() == 1) {
      out += den.front();
    } else {
      out += "(";
      for (std::size_t i = 0; i < den.size(); ++i) {
        if (i) out += "*";
        out += den[i];
      }
      out += ")";
    }
  }
  if (sgn(coeff) < 0) out = "-" + out;
  return wrap(out, kMul, context);
}

inline std::string render(const Expr& e, int context) {
  switch (e.kind()) {
    case ExprKind::Const: {
      const Rational& q = e.value();
      int own = (sgn(q) < 0 || q.get_den() != 1) ? kMul : kAtom;
      return wrap(rational_text(q), own, context);
    }
    case ExprKind::Symbol:
      return e.name();
    case ExprKind::Func:
      return std::string(fn_name(e.fn())) + "(" + render(e.arg(), 0) + ")";
    case ExprKind::Pow: {
      const Rational& r = e.exponent();
      if (sgn(r) < 0) return render_product(Rational(1), {e}, context);
      std::string b = render(e.base(), kAtom);
      std::string ex = r.get_den() == 1 ? rational_text(r) : "(" + rational_text(r) + ")";
      return wrap(b + "^" + ex, kPow, context);
    }
    case ExprKind::Mul: {
      auto [c, rest] = split_coefficient(e);
      std::vector<Expr> fs;
      if (rest.is_mul()) fs = rest.args(); else fs = {rest};
      return render_product(c, fs, context);
    }
    case ExprKind::Add: {
      std::string out;
      bool first = true;
      for (const auto& t : e.args()) {
        auto [c, rest] = split_coefficient(t);
        if (first) {
          out += render(t, kAdd);
        } else if (sgn(c) < 0) {
          out += "-" + render(make_mul({Expr(Rational(-c)), rest}), kMul);
        } else {
          out += "+" + render(t, kAdd);
        }
        first = false;
      }
      return wrap(out, kAdd, context);
    }
  }
  return "?";
}

}  // namespace detail

inline std::string to_string(const Expr& e) { return detail::render(e, 0); }

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

}  // namespace jlm
