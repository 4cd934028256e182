#pragma once

// Heuristic antiderivatives. Every answer is differentiated back and
// zero-tested before it is returned, so a miss is NoPattern, never a wrong
// result. Integration constants are zero.
//
// Catalog: linearity over sums; power rule for s^n and (a s + b)^r;
// u-substitution q^r q'(s); log rule q'/q; atan rule c/(A s^2 + B s + C);
// rational functions whose denominator is a perfect power of a polynomial
// linear in s (Taylor expansion of the numerator about the root).

#include <optional>
#include <string>

#include "jlm/symcore/calculus.hpp"
#include "jlm/symcore/zero.hpp"

namespace jlm {

struct Antiderivative {
  std::optional<Expr> value;
  std::string reason;  // set when no catalog entry applied

  explicit operator bool() const { return value.has_value(); }
  const Expr& operator*() const { return *value; }
};

namespace detail {

class Integrator {
 public:
  explicit Integrator(std::string s) : s_(std::move(s)) { var_ = alg_.symbol_var(s_); }

  std::optional<Expr> run(const Expr& e) {
    if (!depends_on(e, s_)) return e * Expr::symbol(s_);
    if (e.is_add()) {
      std::vector<Expr> parts;
      bool ok = true;
      for (const auto& t : e.args()) {
        auto r = term(t);
        if (!r) {
          ok = false;
          break;
        }
        parts.push_back(*r);
      }
      if (ok) return make_add(std::move(parts));
      return rational(e);
    }
    return term(e);
  }

 private:
  bool var_depends(std::size_t i) const {
    if (i == var_) return true;
    const Kernel* k = alg_.kernel_of(i);
    if (!k) return false;
    if (k->kind == KernelKind::Radical) return poly_depends(k->base);
    return poly_depends(k->arg.num) || poly_depends(k->arg.den);
  }
  bool poly_depends(const Poly& p) const {
    for (std::size_t i = 0; i < alg_.vars().size(); ++i) {
      if (p.uses(i) && var_depends(i)) return true;
    }
    return false;
  }
  // Only s itself may carry the s-dependence (no kernel of s).
  bool plain_in_s(const RatFun& r) const {
    for (std::size_t i = 0; i < alg_.vars().size(); ++i) {
      if (i == var_) continue;
      if ((r.num.uses(i) || r.den.uses(i)) && var_depends(i)) return false;
    }
    return true;
  }

  // base = a*s + b with s-free a, b
  std::optional<std::pair<Expr, Expr>> linear(const Expr& base) {
    RatFun r = alg_.from_expr(base);
    if (!plain_in_s(r) || r.den.uses(var_) || r.num.degree(var_) != 1) return std::nullopt;
    Expr den = alg_.poly_to_expr(r.den);
    return std::make_pair(alg_.poly_to_expr(r.num.coeff(var_, 1)) / den, alg_.poly_to_expr(r.num.coeff(var_, 0)) / den);
  }

  bool s_free(const Expr& e) {
    if (!depends_on(e, s_)) return true;
    RatFun r = alg_.from_expr(e);
    return !poly_depends(r.num) && !poly_depends(r.den);
  }

  static Expr power_rule(const Expr& q, const Rational& r) {
    if (r == -1) return log(q);
    return make_pow(q, r + 1) / Expr(r + 1);
  }

  std::optional<Expr> term(const Expr& e) {
    if (!depends_on(e, s_)) return e * Expr::symbol(s_);
    std::vector<Expr> coeff, dep;
    if (e.is_mul()) {
      for (const auto& f : e.args()) (depends_on(f, s_) ? dep : coeff).push_back(f);
    } else {
      dep.push_back(e);
    }
    Expr c = make_mul(coeff);
    if (dep.size() == 1) {
      const Expr& f = dep.front();
      auto [base, r] = split_power(f);
      if (auto lin = linear(base)) return c * power_rule(base, r) / lin->first;
      if (f.is_func(Fn::Exp)) {
        if (auto lin = linear(f.arg())) return c * f / lin->first;
      }
    }
    if (dep.size() == 2) {
      for (int k = 0; k < 2; ++k) {
        auto [base, r] = split_power(dep[static_cast<std::size_t>(k)]);
        if (r == 1) continue;
        Expr other = dep[static_cast<std::size_t>(1 - k)];
        Expr dq = diff(base, s_);
        if (dq.is_zero_literal()) continue;
        Expr ratio = other / dq;
        if (s_free(ratio)) return c * simplify(ratio) * power_rule(base, r);
      }
    }
    return rational(e);
  }

  std::optional<Expr> rational(const Expr& e) {
    RatFun r;
    try {
      r = alg_.from_expr(e);
    } catch (const SymbolicError&) {
      return std::nullopt;
    }
    if (!plain_in_s(r)) return log_derivative(e);
    // split den = content (s-free) * d(s)
    Poly content = r.den.uses(var_) ? detail::content_in(r.den, var_) : r.den;
    Poly d = detail::exact(r.den, content);
    Expr scale = Expr(1) / alg_.poly_to_expr(content);
    if (!d.uses(var_)) return scale * integrate_poly(r.num);

    // perfect power d = q^m via the squarefree part
    Poly dd = derivative(d);
    Poly g = gcd(d, dd);
    Poly q = detail::exact(d, g);
    int m = d.degree(var_) / std::max(1, q.degree(var_));
    if (q.pow(static_cast<unsigned>(m)).primitive() != d.primitive()) return log_derivative(e);
    Rational fix = d.lc() / q.pow(static_cast<unsigned>(m)).lc();
    scale = scale / Expr(fix);
    Expr qe = alg_.poly_to_expr(q);

    if (q.degree(var_) == 1) {
      // Taylor expansion of num about the root of q = a s + b
      Expr a = alg_.poly_to_expr(q.coeff(var_, 1)), b = alg_.poly_to_expr(q.coeff(var_, 0));
      Expr root = -(b / a);
      Expr numj = alg_.poly_to_expr(r.num);
      std::vector<Expr> parts;
      Rational fact(1);
      Expr apow(1);
      for (int j = 0; j <= r.num.degree(var_); ++j) {
        if (j > 0) {
          numj = diff(numj, s_);
          fact *= j;
          apow = apow * a;
        }
        Expr cj = subst(numj, {{s_, root}}) / (Expr(fact) * apow);
        parts.push_back(cj * power_rule(qe, Rational(j - m)) / a);
      }
      return scale * make_add(std::move(parts));
    }
    // u-substitution: num = k q'
    Poly dq = derivative(q);
    if (RatFun k = alg_.normalize(r.num, dq); !k.num.uses(var_) && !k.den.uses(var_)) {
      return scale * alg_.to_expr(k) * power_rule(qe, Rational(-m));
    }
    if (m == 1 && q.degree(var_) == 2 && r.num.degree(var_) <= 1) return atan_rule(r.num, q, scale);
    return log_derivative(e);
  }

  // num/(A s^2 + B s + C): split num = p q' + rest, rest s-free.
  std::optional<Expr> atan_rule(const Poly& num, const Poly& q, const Expr& scale) {
    Expr A = alg_.poly_to_expr(q.coeff(var_, 2)), B = alg_.poly_to_expr(q.coeff(var_, 1)),
         C = alg_.poly_to_expr(q.coeff(var_, 0));
    Expr n1 = alg_.poly_to_expr(num.coeff(var_, 1)), n0 = alg_.poly_to_expr(num.coeff(var_, 0));
    Expr qe = alg_.poly_to_expr(q);
    Expr p = n1 / (Expr(2) * A);
    Expr rest = n0 - p * B;
    Expr disc = simplify(Expr(4) * A * C - B * B);
    if (disc.is_const() && sgn(disc.value()) <= 0) return std::nullopt;
    Expr root = sqrt(disc);
    Expr s = Expr::symbol(s_);
    Expr out = p * log(qe) + Expr(2) * rest / root * atan((Expr(2) * A * s + B) / root);
    return scale * out;
  }

  // last resort: e = c * q'/q
  std::optional<Expr> log_derivative(const Expr& e) {
    if (!e.is_mul() && !e.is_pow()) return std::nullopt;
    std::vector<Expr> fs = e.is_mul() ? e.args() : std::vector<Expr>{e};
    for (std::size_t k = 0; k < fs.size(); ++k) {
      auto [base, r] = split_power(fs[k]);
      if (r != -1 || !depends_on(base, s_)) continue;
      std::vector<Expr> rest;
      for (std::size_t j = 0; j < fs.size(); ++j) {
        if (j != k) rest.push_back(fs[j]);
      }
      Expr ratio = make_mul(rest) / diff(base, s_);
      if (s_free(ratio)) return simplify(ratio) * log(base);
    }
    return std::nullopt;
  }

  Poly derivative(const Poly& p) const {
    std::vector<Poly::Term> ts;
    for (const auto& t : p.terms()) {
      int e = t.m[var_];
      if (e == 0) continue;
      Monomial m = t.m;
      m[var_] = static_cast<std::int16_t>(e - 1);
      ts.push_back({m, t.c * e});
    }
    return Poly::from_terms(std::move(ts));
  }

  Expr integrate_poly(const Poly& p) const {
    std::vector<Poly::Term> ts;
    for (const auto& t : p.terms()) {
      Monomial m = t.m;
      int e = m[var_] + 1;
      m[var_] = static_cast<std::int16_t>(e);
      ts.push_back({m, t.c / e});
    }
    return alg_.poly_to_expr(Poly::from_terms(std::move(ts)));
  }

  std::string s_;
  Algebra alg_;
  std::size_t var_ = 0;
};

}  // namespace detail

/// Antiderivative of `e` in `s`, checked by differentiation.
inline Antiderivative antiderivative(const Expr& e, const std::string& s) {
  std::optional<Expr> r;
  try {
    r = detail::Integrator(s).run(e);
  } catch (const SymbolicError& err) {
    return {std::nullopt, std::string("no pattern: ") + err.what()};
  }
  if (!r) return {std::nullopt, "no pattern for " + to_string(e)};
  Expr out = *r;
  auto check = is_zero(diff(out, s) - e);
  if (!check.zero()) return {std::nullopt, "candidate failed the derivative check for " + to_string(e)};
  Expr tidy = simplify(out);
  if (node_count(tidy) < node_count(out)) out = tidy;
  return {out, {}};
}

}  // namespace jlm
