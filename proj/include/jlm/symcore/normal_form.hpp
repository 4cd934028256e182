#pragma once

// Rational normal forms: an expression becomes num/den, two polynomials over
// the symbols and a list of kernels (exp, log, sin, cos, atan, radicals) that
// are treated as independent indeterminates. Radical kernels carry the
// relation K^q = base, applied on every operation.
//
// Rewrites applied during conversion:
//   exp(log q) -> q, log(exp p) -> p, exp(a + b) -> exp(a) exp(b),
//   exp(c log q) -> q^c, log of syntactically positive products splits,
//   (p^(1/q))^q -> p.
// Symbols and radical bases are taken on their positive domain.

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jlm/symcore/expr.hpp"
#include "jlm/symcore/poly.hpp"

namespace jlm {

struct RatFun {
  Poly num;
  Poly den = Poly::constant(1);

  bool is_zero() const { return num.is_zero(); }
  bool is_constant() const { return num.is_constant() && den.is_constant(); }
  friend bool operator==(const RatFun& a, const RatFun& b) { return a.num == b.num && a.den == b.den; }
};

enum class KernelKind { Exp, Log, Sin, Cos, Atan, Radical };

struct Kernel {
  KernelKind kind;
  RatFun arg;  // Exp/Log/Sin/Cos/Atan
  Poly base;   // Radical: base^(1/q)
  int q = 1;
};

class Algebra {
 public:
  struct Var {
    std::string name;
    int kernel = -1;  // index into kernels(), or -1 for a symbol
  };

  Algebra() {
    for (const auto& n : {names::t, names::x, names::v, names::a}) symbol_var(n);
  }

  std::size_t symbol_var(const std::string& name) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].kernel < 0 && vars_[i].name == name) return i;
    }
    return push_var({name, -1});
  }
  std::optional<std::size_t> find_symbol(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].kernel < 0 && vars_[i].name == name) return i;
    }
    return std::nullopt;
  }

  const std::vector<Var>& vars() const { return vars_; }
  const std::vector<Kernel>& kernels() const { return kernels_; }
  bool is_symbol(std::size_t var) const { return vars_[var].kernel < 0; }
  bool is_parameter(std::size_t var) const { return is_symbol(var) && !is_reserved(vars_[var].name); }
  const Kernel* kernel_of(std::size_t var) const {
    return vars_[var].kernel < 0 ? nullptr : &kernels_[static_cast<std::size_t>(vars_[var].kernel)];
  }
  bool has_radicals() const { return !radicals_.empty(); }

  // ---- arithmetic --------------------------------------------------------

  RatFun constant(const Rational& c) const { return {Poly::constant(c), Poly::constant(1)}; }
  RatFun var(std::size_t i) const { return {Poly::variable(i), Poly::constant(1)}; }

  RatFun normalize(Poly num, Poly den) const {
    if (den.is_zero()) throw SymbolicError("division by zero");
    if (num.is_zero()) return {Poly(), Poly::constant(1)};
    if (has_radicals()) {
      num = reduce(num);
      den = reduce(den);
      rationalize(num, den);
    }
    if (!den.is_constant() && !num.is_constant()) {
      Poly g = gcd(num, den);
      if (!g.is_constant()) {
        num = detail::exact(num, g);
        den = detail::exact(den, g);
      }
    }
    Rational c = den.content();
    if (sgn(den.lc()) < 0) c = -c;
    if (c != 1) {
      Rational inv = Rational(1) / c;
      num = num.scaled(inv);
      den = den.scaled(inv);
    }
    return {std::move(num), std::move(den)};
  }

  RatFun add(const RatFun& a, const RatFun& b) const {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den == b.den) return normalize(a.num + b.num, a.den);
    if (a.den.is_constant() || b.den.is_constant()) {
      return normalize(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    Poly g = gcd(a.den, b.den);
    Poly da = detail::exact(a.den, g), db = detail::exact(b.den, g);
    return normalize(a.num * db + b.num * da, a.den * db);
  }
  RatFun neg(const RatFun& a) const { return {-a.num, a.den}; }
  RatFun sub(const RatFun& a, const RatFun& b) const { return add(a, neg(b)); }

  RatFun mul(const RatFun& a, const RatFun& b) const {
    if (a.is_zero() || b.is_zero()) return {};
    if (has_radicals()) return normalize(a.num * b.num, a.den * b.den);
    Poly g1 = gcd(a.num, b.den), g2 = gcd(b.num, a.den);
    Poly an = g1.is_constant() ? a.num : detail::exact(a.num, g1);
    Poly bd = g1.is_constant() ? b.den : detail::exact(b.den, g1);
    Poly bn = g2.is_constant() ? b.num : detail::exact(b.num, g2);
    Poly ad = g2.is_constant() ? a.den : detail::exact(a.den, g2);
    Poly num = an * bn, den = ad * bd;
    Rational c = den.content();
    if (sgn(den.lc()) < 0) c = -c;
    if (c != 1) {
      Rational inv = Rational(1) / c;
      num = num.scaled(inv);
      den = den.scaled(inv);
    }
    return {std::move(num), std::move(den)};
  }
  RatFun inv(const RatFun& a) const {
    if (a.is_zero()) throw SymbolicError("division by zero");
    return normalize(a.den, a.num);
  }
  RatFun div(const RatFun& a, const RatFun& b) const { return mul(a, inv(b)); }
  RatFun pow_int(const RatFun& a, long n) const {
    if (n == 0) return constant(1);
    RatFun b = n < 0 ? inv(a) : a;
    unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
    if (e == 1) return b;
    if (has_radicals()) return normalize(b.num.pow(static_cast<unsigned>(e)), b.den.pow(static_cast<unsigned>(e)));
    return {b.num.pow(static_cast<unsigned>(e)), b.den.pow(static_cast<unsigned>(e))};
  }

  // ---- conversion --------------------------------------------------------

  RatFun from_expr(const Expr& e) {
    auto it = memo_.find(e.raw());
    if (it != memo_.end()) return it->second.second;
    RatFun r = convert(e);
    memo_.emplace(e.raw(), std::make_pair(e, r));
    return r;
  }

  Expr poly_to_expr(const Poly& p) const {
    std::vector<Expr> terms;
    terms.reserve(p.size());
    for (const auto& t : p.terms()) {
      std::vector<Expr> fs{Expr(t.c)};
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (t.m[i] != 0) fs.push_back(make_pow(var_expr(i), Rational(t.m[i])));
      }
      terms.push_back(make_mul(std::move(fs)));
    }
    return make_add(std::move(terms));
  }

  Expr to_expr(const RatFun& r) const {
    if (r.num.is_zero()) return Expr(0);
    Rational cn = r.num.content(), cd = r.den.content();
    Poly n = r.num.scaled(Rational(1) / cn);
    Poly d = r.den.scaled(Rational(1) / cd);
    if (sgn(n.lc()) < 0) {
      n = -n;
      cn = -cn;
    }
    std::vector<Expr> fs{Expr(cn / cd)};
    // monomial content is rendered as a separate factor
    Monomial mn = n.min_monomial(), md = d.min_monomial();
    fs.push_back(poly_to_expr(Poly::monomial(mn, Rational(1))));
    fs.push_back(poly_to_expr(n.divided_by_monomial(mn)));
    if (!md.is_one()) fs.push_back(make_pow(poly_to_expr(Poly::monomial(md, Rational(1))), Rational(-1)));
    Poly rest = d.divided_by_monomial(md);
    if (!rest.is_constant()) fs.push_back(make_pow(poly_to_expr(rest), Rational(-1)));
    else fs.push_back(Expr(Rational(1) / rest.constant_value()));
    return make_mul(std::move(fs));
  }

  Expr var_expr(std::size_t i) const {
    const Var& v = vars_[i];
    if (v.kernel < 0) return Expr::symbol(v.name);
    const Kernel& k = kernels_[static_cast<std::size_t>(v.kernel)];
    switch (k.kind) {
      case KernelKind::Exp: return make_func(Fn::Exp, to_expr(k.arg));
      case KernelKind::Log: return make_func(Fn::Log, to_expr(k.arg));
      case KernelKind::Sin: return make_func(Fn::Sin, to_expr(k.arg));
      case KernelKind::Cos: return make_func(Fn::Cos, to_expr(k.arg));
      case KernelKind::Atan: return make_func(Fn::Atan, to_expr(k.arg));
      case KernelKind::Radical: return make_pow(poly_to_expr(k.base), Rational(1, k.q));
    }
    return Expr(0);
  }

  /// Applies every radical relation K^q = base.
  Poly reduce(const Poly& p) const {
    Poly r = p;
    for (auto it = radicals_.rbegin(); it != radicals_.rend(); ++it) {
      const Kernel& k = kernels_[static_cast<std::size_t>(vars_[*it].kernel)];
      r = r.reduce_power(*it, k.q, k.base);
    }
    return r;
  }

 private:
  std::size_t push_var(Var v) {
    if (vars_.size() >= kMaxVars) throw std::length_error("too many indeterminates in one normal form");
    vars_.push_back(std::move(v));
    return vars_.size() - 1;
  }

  std::size_t kernel_var(Kernel k) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].kernel < 0) continue;
      const Kernel& o = kernels_[static_cast<std::size_t>(vars_[i].kernel)];
      if (o.kind != k.kind) continue;
      if (k.kind == KernelKind::Radical) {
        if (o.q == k.q && o.base == k.base) return i;
      } else if (o.arg == k.arg) {
        return i;
      }
    }
    bool radical = k.kind == KernelKind::Radical;
    kernels_.push_back(std::move(k));
    std::size_t idx = push_var({"", static_cast<int>(kernels_.size() - 1)});
    if (radical) radicals_.push_back(idx);
    return idx;
  }

  // Multiplies num and den by a conjugate so that den loses its radical kernels.
  void rationalize(Poly& num, Poly& den) const {
    for (int pass = 0; pass < 8; ++pass) {
      bool changed = false;
      for (auto it = radicals_.rbegin(); it != radicals_.rend(); ++it) {
        std::size_t k = *it;
        if (!den.uses(k)) continue;
        const Kernel& ker = kernels_[static_cast<std::size_t>(vars_[k].kernel)];
        int q = ker.q;
        auto cs = den.coeffs(k);
        std::vector<int> present;
        for (std::size_t j = 0; j < cs.size(); ++j) {
          if (!cs[j].is_zero()) present.push_back(static_cast<int>(j));
        }
        Poly factor;
        if (present.size() == 1) {
          factor = Poly::variable(k, q - present[0]);
        } else if (present.size() == 2 && present[0] == 0 && present[1] == 1) {
          // den = d0 + d1 K; multiply by sum_i d0^(q-1-i) (-d1 K)^i
          const Poly& d0 = cs[0];
          Poly md1k = -(cs[1] * Poly::variable(k));
          Poly term = Poly::constant(1);
          std::vector<Poly> d0pow{Poly::constant(1)};
          for (int i = 1; i < q; ++i) d0pow.push_back(d0pow.back() * d0);
          for (int i = 0; i < q; ++i) {
            factor += d0pow[static_cast<std::size_t>(q - 1 - i)] * term;
            term = term * md1k;
          }
        } else {
          continue;
        }
        num = reduce(num * factor);
        den = reduce(den * factor);
        changed = true;
      }
      if (!changed) return;
    }
  }

  RatFun convert(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Const:
        return constant(e.value());
      case ExprKind::Symbol:
        return var(symbol_var(e.name()));
      case ExprKind::Add: {
        RatFun acc;
        // group by denominator first to avoid repeated gcd work
        std::vector<RatFun> parts;
        for (const auto& a : e.args()) parts.push_back(from_expr(a));
        std::vector<RatFun> merged;
        for (auto& p : parts) {
          bool done = false;
          for (auto& m : merged) {
            if (m.den == p.den) {
              m.num += p.num;
              done = true;
              break;
            }
          }
          if (!done) merged.push_back(std::move(p));
        }
        for (auto& m : merged) acc = add(acc, normalize(m.num, m.den));
        return acc;
      }
      case ExprKind::Mul: {
        RatFun acc = constant(1);
        for (const auto& a : e.args()) acc = mul(acc, from_expr(a));
        return acc;
      }
      case ExprKind::Pow: {
        RatFun b = from_expr(e.base());
        const Rational& r = e.exponent();
        if (r.get_den() == 1) return pow_int(b, r.get_num().get_si());
        return radical(b, r);
      }
      case ExprKind::Func:
        return function(e.fn(), e.arg());
    }
    return {};
  }

  // ---- radicals ------------------------------------------------------------

  static std::vector<std::pair<mpz_class, int>> factor_integer(mpz_class n) {
    std::vector<std::pair<mpz_class, int>> out;
    for (unsigned long p = 2; p < 100000 && n > 1; ++p) {
      if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        int e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
          mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
          ++e;
        }
        out.push_back({mpz_class(p), e});
      }
      if (mpz_class(p) * p > n) break;
    }
    if (n > 1) out.push_back({n, 1});
    return out;
  }

  RatFun radical_kernel_power(const Poly& base, int q, long j) {
    std::size_t k = kernel_var({KernelKind::Radical, {}, base, q});
    return pow_int(var(k), j);
  }

  // c^s for a positive integer c and 0 < s.
  RatFun radical_integer(const mpz_class& c, const Rational& s) {
    RatFun acc = constant(1);
    for (const auto& [p, e] : factor_integer(c)) {
      Rational ex = s * e;
      ex.canonicalize();
      mpz_class whole, rem;
      mpz_fdiv_qr(whole.get_mpz_t(), rem.get_mpz_t(), ex.get_num_mpz_t(), ex.get_den_mpz_t());
      mpz_class pw;
      mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), whole.get_ui());
      acc = mul(acc, constant(Rational(pw)));
      if (rem != 0) {
        acc = mul(acc, radical_kernel_power(Poly::constant(Rational(p)), static_cast<int>(ex.get_den().get_si()),
                                            rem.get_si()));
      }
    }
    return acc;
  }

  // P^s for a polynomial P and 0 < s < 1.
  RatFun radical_poly(const Poly& p, const Rational& s) {
    if (p.is_zero()) return {};
    if (p == Poly::constant(1)) return constant(1);
    Rational c = p.content();
    Poly prim = p.scaled(Rational(1) / c);
    RatFun acc = constant(1);
    if (c != 1) {
      acc = radical_integer(c.get_num(), s);
      if (c.get_den() != 1) {
        // c^(-s) with c = 1/d: d^(1-s) / d
        RatFun dpart = radical_integer(c.get_den(), Rational(1) - s);
        acc = mul(acc, div(dpart, constant(Rational(c.get_den()))));
      }
    }
    if (prim == Poly::constant(1)) return acc;
    if (prim.is_monomial() && prim.lc() == 1) {
      const Monomial& m = prim.lm();
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (m[i] == 0) continue;
        Rational ex = s * m[i];
        ex.canonicalize();
        mpz_class whole, rem;
        mpz_fdiv_qr(whole.get_mpz_t(), rem.get_mpz_t(), ex.get_num_mpz_t(), ex.get_den_mpz_t());
        acc = mul(acc, pow_int(var(i), whole.get_si()));
        if (rem != 0) {
          acc = mul(acc, radical_kernel_power(Poly::variable(i), static_cast<int>(ex.get_den().get_si()),
                                              rem.get_si()));
        }
      }
      return acc;
    }
    Rational sr = s;
    sr.canonicalize();
    return mul(acc, radical_kernel_power(prim, static_cast<int>(sr.get_den().get_si()), sr.get_num().get_si()));
  }

  RatFun radical(const RatFun& b, const Rational& r) {
    mpz_class whole, rem;
    mpz_fdiv_qr(whole.get_mpz_t(), rem.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    Rational f(rem, r.get_den());
    f.canonicalize();
    RatFun acc = pow_int(b, whole.get_si());
    // b^f = num^f * den^(1-f) / den
    acc = mul(acc, radical_poly(b.num, f));
    if (!b.den.is_constant() || b.den.constant_value() != 1) {
      acc = mul(acc, radical_poly(b.den, Rational(1) - f));
      acc = div(acc, RatFun{b.den, Poly::constant(1)});
    }
    return acc;
  }

  // ---- transcendental kernels ---------------------------------------------

  bool positive_var(std::size_t i) const {
    if (vars_[i].kernel < 0) return true;
    auto kind = kernels_[static_cast<std::size_t>(vars_[i].kernel)].kind;
    return kind == KernelKind::Exp || kind == KernelKind::Radical;
  }

  bool syntactically_positive(const Poly& p) const {
    for (const auto& t : p.terms()) {
      if (sgn(t.c) <= 0) return false;
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (t.m[i] != 0 && !positive_var(i)) return false;
      }
    }
    return true;
  }

  RatFun log_integer(const mpz_class& n) {
    RatFun acc;
    for (const auto& [p, e] : factor_integer(n)) {
      std::size_t k = kernel_var({KernelKind::Log, constant(Rational(p)), {}, 1});
      acc = add(acc, mul(constant(Rational(e)), var(k)));
    }
    return acc;
  }

  RatFun log_var(std::size_t i) {
    if (vars_[i].kernel >= 0) {
      const Kernel& k = kernels_[static_cast<std::size_t>(vars_[i].kernel)];
      if (k.kind == KernelKind::Exp) return k.arg;
      if (k.kind == KernelKind::Radical) {
        Poly base = k.base;
        int q = k.q;
        return div(log_poly(base), constant(Rational(q)));
      }
    }
    return var(kernel_var({KernelKind::Log, var(i), {}, 1}));
  }

  // log of a syntactically positive polynomial with unit content
  RatFun log_poly(const Poly& p) {
    Rational c = p.content();
    RatFun acc;
    if (c != 1) acc = sub(log_integer(c.get_num()), log_integer(c.get_den()));
    Poly prim = p.scaled(Rational(1) / c);
    if (prim == Poly::constant(1)) return acc;
    if (prim.is_monomial()) {
      Monomial m = prim.lm();
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (m[i] != 0) acc = add(acc, mul(constant(Rational(m[i])), log_var(i)));
      }
      return acc;
    }
    std::size_t k = kernel_var({KernelKind::Log, RatFun{prim, Poly::constant(1)}, {}, 1});
    return add(acc, var(k));
  }

  RatFun function(Fn f, const Expr& arg) {
    switch (f) {
      case Fn::Exp: return exp_of(arg);
      case Fn::Log: return log_of(arg);
      case Fn::Sin: return var(kernel_var({KernelKind::Sin, from_expr(arg), {}, 1}));
      case Fn::Cos: return var(kernel_var({KernelKind::Cos, from_expr(arg), {}, 1}));
      case Fn::Atan: return var(kernel_var({KernelKind::Atan, from_expr(arg), {}, 1}));
    }
    return {};
  }

  RatFun exp_of(const Expr& arg) {
    RatFun a = from_expr(arg);
    if (a.is_zero()) return constant(1);
    if (!a.den.is_constant()) return var(kernel_var({KernelKind::Exp, a, {}, 1}));
    Rational scale = Rational(1) / a.den.constant_value();
    RatFun acc = constant(1);
    for (const auto& t : a.num.terms()) {
      Rational c = t.c * scale;
      c.canonicalize();
      // single log kernel to the first power: exp(c log Q) = Q^c
      int single = -1;
      int count = 0;
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (t.m[i] != 0) {
          ++count;
          single = static_cast<int>(i);
        }
      }
      if (count == 1 && t.m[static_cast<std::size_t>(single)] == 1) {
        const Kernel* k = kernel_of(static_cast<std::size_t>(single));
        if (k && k->kind == KernelKind::Log) {
          RatFun q = k->arg;
          if (c.get_den() == 1) {
            acc = mul(acc, pow_int(q, c.get_num().get_si()));
          } else {
            acc = mul(acc, radical(q, c));
          }
          continue;
        }
      }
      RatFun kernel_arg{Poly::monomial(t.m, Rational(1, c.get_den())), Poly::constant(1)};
      std::size_t k = kernel_var({KernelKind::Exp, kernel_arg, {}, 1});
      acc = mul(acc, pow_int(var(k), c.get_num().get_si()));
    }
    return acc;
  }

  RatFun log_of(const Expr& arg) {
    if (arg.is_func(Fn::Exp)) return from_expr(arg.arg());
    RatFun a = from_expr(arg);
    if (a.is_zero()) throw SymbolicError("log of zero");
    if (a.num.is_constant() && a.den.is_constant()) {
      Rational c = a.num.constant_value() / a.den.constant_value();
      if (c == 1) return {};
      if (sgn(c) > 0) return sub(log_integer(c.get_num()), log_integer(c.get_den()));
    }
    Rational cn = a.num.content();
    Poly n = a.num.scaled(Rational(1) / cn);
    Rational c = cn / a.den.content();
    Poly d = a.den.scaled(Rational(1) / a.den.content());
    if (sgn(c) > 0 && syntactically_positive(n) && syntactically_positive(d)) {
      RatFun acc = sub(log_integer(c.get_num()), log_integer(c.get_den()));
      acc = add(acc, log_poly(n));
      return sub(acc, log_poly(d));
    }
    return var(kernel_var({KernelKind::Log, a, {}, 1}));
  }

  std::vector<Var> vars_;
  std::vector<Kernel> kernels_;
  std::vector<std::size_t> radicals_;
  std::unordered_map<const ExprNode*, std::pair<Expr, RatFun>> memo_;
};

/// Round trip through the rational normal form.
inline Expr simplify(const Expr& e) {
  Algebra alg;
  return alg.to_expr(alg.from_expr(e));
}

}  // namespace jlm
