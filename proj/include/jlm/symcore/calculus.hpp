#pragma once

#include <map>
#include <string>

#include "jlm/symcore/expr.hpp"

namespace jlm {

/// Partial derivative with t, x, xdot (and parameters) mutually independent.
inline Expr diff(const Expr& e, const std::string& s) {
  switch (e.kind()) {
    case ExprKind::Const:
      return Expr(0);
    case ExprKind::Symbol:
      return Expr(e.name() == s ? 1 : 0);
    case ExprKind::Add: {
      std::vector<Expr> ts;
      ts.reserve(e.args().size());
      for (const auto& a : e.args()) ts.push_back(diff(a, s));
      return make_add(std::move(ts));
    }
    case ExprKind::Mul: {
      const auto& fs = e.args();
      std::vector<Expr> ts;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (!depends_on(fs[i], s)) continue;
        std::vector<Expr> p;
        p.reserve(fs.size());
        for (std::size_t j = 0; j < fs.size(); ++j) p.push_back(i == j ? diff(fs[j], s) : fs[j]);
        ts.push_back(make_mul(std::move(p)));
      }
      return make_add(std::move(ts));
    }
    case ExprKind::Pow: {
      const Expr& b = e.base();
      if (!depends_on(b, s)) return Expr(0);
      const Rational& r = e.exponent();
      return make_mul({Expr(r), make_pow(b, r - 1), diff(b, s)});
    }
    case ExprKind::Func: {
      const Expr& a = e.arg();
      if (!depends_on(a, s)) return Expr(0);
      Expr da = diff(a, s);
      switch (e.fn()) {
        case Fn::Exp: return e * da;
        case Fn::Log: return da / a;
        case Fn::Sin: return cos(a) * da;
        case Fn::Cos: return -(sin(a) * da);
        case Fn::Atan: return da / (Expr(1) + a * a);
      }
    }
  }
  return Expr(0);
}

using Bindings = std::map<std::string, Expr>;

/// Simultaneous substitution of symbols.
inline Expr subst(const Expr& e, const Bindings& b) {
  switch (e.kind()) {
    case ExprKind::Const:
      return e;
    case ExprKind::Symbol: {
      auto it = b.find(e.name());
      return it == b.end() ? e : it->second;
    }
    case ExprKind::Add:
    case ExprKind::Mul: {
      std::vector<Expr> as;
      as.reserve(e.args().size());
      for (const auto& a : e.args()) as.push_back(subst(a, b));
      return e.is_add() ? make_add(std::move(as)) : make_mul(std::move(as));
    }
    case ExprKind::Pow:
      return make_pow(subst(e.base(), b), e.exponent());
    case ExprKind::Func:
      return make_func(e.fn(), subst(e.arg(), b));
  }
  return e;
}

/// Flow derivative D_t = d/dt + xdot d/dx + F d/dxdot.
inline Expr total_derivative(const Expr& e, const Expr& F) {
  return diff(e, names::t) + V() * diff(e, names::x) + F * diff(e, names::v);
}

/// First-order total derivative d/dt + xdot d/dx of a function of (t, x).
inline Expr point_derivative(const Expr& e) { return diff(e, names::t) + V() * diff(e, names::x); }

}  // namespace jlm
