#pragma once

// Immutable symbolic expression trees over t, x, xdot and declared parameters.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jlm {

using Rational = mpq_class;

namespace names {
inline const std::string t = "t";
inline const std::string x = "x";
inline const std::string v = "xdot";
inline const std::string a = "xddot";  // internal; never accepted by the parser
}  // namespace names

inline bool is_reserved(const std::string& s) {
  return s == names::t || s == names::x || s == names::v || s == names::a;
}

enum class ExprKind : std::uint8_t { Const, Symbol, Add, Mul, Pow, Func };
enum class Fn : std::uint8_t { Exp, Log, Sin, Cos, Atan };

inline const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Atan: return "atan";
  }
  return "?";
}

/// Raised when an expression is built with a literal division by zero.
class SymbolicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Expr;

struct ExprNode {
  ExprKind kind = ExprKind::Const;
  Rational value;  // Const value, or the exponent of a Pow
  std::string name;
  Fn fn = Fn::Exp;
  std::vector<Expr> args;
  std::size_t hash = 0;
};

class Expr {
 public:
  Expr();
  Expr(int n);  // NOLINT(google-explicit-constructor): literals read naturally
  explicit Expr(const Rational& q);

  static Expr symbol(const std::string& name);

  ExprKind kind() const { return node_->kind; }
  bool is_const() const { return kind() == ExprKind::Const; }
  bool is_symbol() const { return kind() == ExprKind::Symbol; }
  bool is_add() const { return kind() == ExprKind::Add; }
  bool is_mul() const { return kind() == ExprKind::Mul; }
  bool is_pow() const { return kind() == ExprKind::Pow; }
  bool is_func() const { return kind() == ExprKind::Func; }
  bool is_func(Fn f) const { return is_func() && node_->fn == f; }

  bool is_zero_literal() const { return is_const() && sgn(node_->value) == 0; }
  bool is_one_literal() const { return is_const() && node_->value == 1; }

  const Rational& value() const { return node_->value; }
  const Rational& exponent() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  Fn fn() const { return node_->fn; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& base() const { return node_->args.front(); }
  const Expr& arg() const { return node_->args.front(); }
  std::size_t hash() const { return node_->hash; }

  const ExprNode* raw() const { return node_.get(); }

  static Expr from_node(ExprNode n);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

// ---------------------------------------------------------------------------
// Structural ordering

int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

inline bool same(const Expr& a, const Expr& b) {
  return a.raw() == b.raw() || (a.hash() == b.hash() && compare(a, b) == 0);
}

namespace detail {

inline std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

inline std::size_t hash_rational(const Rational& q) {
  std::size_t h = std::hash<std::string>{}(q.get_str());
  return h;
}

inline void seal(ExprNode& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911ULL;
  switch (n.kind) {
    case ExprKind::Const: h = mix(h, hash_rational(n.value)); break;
    case ExprKind::Symbol: h = mix(h, std::hash<std::string>{}(n.name)); break;
    case ExprKind::Pow: h = mix(h, hash_rational(n.value)); break;
    case ExprKind::Func: h = mix(h, static_cast<std::size_t>(n.fn) + 17); break;
    default: break;
  }
  for (const auto& a : n.args) h = mix(h, a.hash());
  n.hash = h;
}

}  // namespace detail

inline Expr Expr::from_node(ExprNode n) {
  detail::seal(n);
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

inline Expr::Expr() : Expr(Rational(0)) {}
inline Expr::Expr(int n) : Expr(Rational(n)) {}
inline Expr::Expr(const Rational& q) {
  ExprNode n;
  n.kind = ExprKind::Const;
  n.value = q;
  n.value.canonicalize();
  detail::seal(n);
  node_ = std::make_shared<const ExprNode>(std::move(n));
}

inline Expr Expr::symbol(const std::string& name) {
  ExprNode n;
  n.kind = ExprKind::Symbol;
  n.name = name;
  return from_node(std::move(n));
}

inline int compare(const Expr& a, const Expr& b) {
  if (a.raw() == b.raw()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case ExprKind::Const: return cmp(a.value(), b.value()) < 0 ? -1 : (a.value() == b.value() ? 0 : 1);
    case ExprKind::Symbol: return a.name() < b.name() ? -1 : (a.name() == b.name() ? 0 : 1);
    case ExprKind::Pow: {
      int c = compare(a.base(), b.base());
      if (c != 0) return c;
      return a.exponent() < b.exponent() ? -1 : (a.exponent() == b.exponent() ? 0 : 1);
    }
    case ExprKind::Func:
      if (a.fn() != b.fn()) return a.fn() < b.fn() ? -1 : 1;
      return compare(a.arg(), b.arg());
    case ExprKind::Add:
    case ExprKind::Mul: {
      const auto& x = a.args();
      const auto& y = b.args();
      std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = compare(x[i], y[i]);
        if (c != 0) return c;
      }
      if (x.size() == y.size()) return 0;
      return x.size() < y.size() ? -1 : 1;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Normalizing constructors

Expr make_add(std::vector<Expr> terms);
Expr make_mul(std::vector<Expr> factors);
Expr make_pow(const Expr& base, const Rational& exponent);
Expr make_func(Fn f, const Expr& arg);

namespace detail {

// Exact rational root of q if q^(1/n) is rational.
inline bool rational_root(const Rational& q, unsigned long n, Rational& out) {
  if (sgn(q) < 0 && n % 2 == 0) return false;
  mpz_class num = abs(q.get_num());
  mpz_class den = q.get_den();
  mpz_class rn, rd;
  if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n)) return false;
  if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n)) return false;
  out = Rational(rn, rd);
  out.canonicalize();
  if (sgn(q) < 0) out = -out;
  return true;
}

inline Rational rational_pow(const Rational& b, long n) {
  Rational r(1);
  Rational base = b;
  bool inv = n < 0;
  unsigned long e = static_cast<unsigned long>(inv ? -n : n);
  mpz_class nn, dd;
  mpz_pow_ui(nn.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(dd.get_mpz_t(), base.get_den_mpz_t(), e);
  r = inv ? Rational(dd, nn) : Rational(nn, dd);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Split a product term into (rational coefficient, remaining factor).
inline std::pair<Rational, Expr> split_coefficient(const Expr& e) {
  if (e.is_const()) return {e.value(), Expr(1)};
  if (e.is_mul() && e.args().front().is_const()) {
    const auto& as = e.args();
    if (as.size() == 2) return {as[0].value(), as[1]};
    ExprNode n;
    n.kind = ExprKind::Mul;
    n.args.assign(as.begin() + 1, as.end());
    return {as[0].value(), Expr::from_node(std::move(n))};
  }
  return {Rational(1), e};
}

inline std::pair<Expr, Rational> split_power(const Expr& e) {
  if (e.is_pow()) return {e.base(), e.exponent()};
  return {e, Rational(1)};
}

}  // namespace detail

inline Expr make_add(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (auto& t : terms) {
    if (t.is_add()) {
      for (const auto& s : t.args()) flat.push_back(s);
    } else {
      flat.push_back(std::move(t));
    }
  }
  Rational constant(0);
  std::map<Expr, Rational, ExprLess> grouped;
  for (const auto& t : flat) {
    if (t.is_const()) {
      constant += t.value();
      continue;
    }
    auto [c, rest] = detail::split_coefficient(t);
    auto it = grouped.find(rest);
    if (it == grouped.end()) {
      grouped.emplace(rest, c);
    } else {
      it->second += c;
    }
  }
  std::vector<Expr> out;
  for (auto& [rest, c] : grouped) {
    if (sgn(c) == 0) continue;
    if (c == 1) {
      out.push_back(rest);
    } else {
      out.push_back(make_mul({Expr(c), rest}));
    }
  }
  if (sgn(constant) != 0) out.push_back(Expr(constant));
  if (out.empty()) return Expr(0);
  if (out.size() == 1) return out.front();
  ExprNode n;
  n.kind = ExprKind::Add;
  n.args = std::move(out);
  return Expr::from_node(std::move(n));
}

inline Expr make_mul(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  flat.reserve(factors.size());
  for (auto& f : factors) {
    if (f.is_mul()) {
      for (const auto& s : f.args()) flat.push_back(s);
    } else {
      flat.push_back(std::move(f));
    }
  }
  Rational coeff(1);
  std::map<Expr, Rational, ExprLess> powers;
  for (const auto& f : flat) {
    if (f.is_const()) {
      coeff *= f.value();
      continue;
    }
    auto [b, e] = detail::split_power(f);
    if (b.is_const()) {
      // constant radical such as 2^(1/2): keep as its own factor
      auto it = powers.find(b);
      if (it == powers.end()) powers.emplace(b, e); else it->second += e;
      continue;
    }
    auto it = powers.find(b);
    if (it == powers.end()) {
      powers.emplace(b, e);
    } else {
      it->second += e;
    }
  }
  if (sgn(coeff) == 0) return Expr(0);
  std::vector<Expr> out;
  for (auto& [b, e] : powers) {
    if (sgn(e) == 0) continue;
    Expr p = make_pow(b, e);
    if (p.is_const()) {
      coeff *= p.value();
    } else if (p.is_mul()) {
      for (const auto& s : p.args()) {
        if (s.is_const()) coeff *= s.value(); else out.push_back(s);
      }
    } else {
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), ExprLess{});
  if (out.empty()) return Expr(coeff);
  if (coeff == 1 && out.size() == 1) return out.front();
  if (coeff != 1) out.insert(out.begin(), Expr(coeff));
  ExprNode n;
  n.kind = ExprKind::Mul;
  n.args = std::move(out);
  return Expr::from_node(std::move(n));
}

inline Expr make_pow(const Expr& base, const Rational& exponent_in) {
  Rational exponent = exponent_in;
  exponent.canonicalize();
  if (sgn(exponent) == 0) return Expr(1);
  if (exponent == 1) return base;
  if (base.is_const()) {
    const Rational& b = base.value();
    if (sgn(b) == 0) {
      if (sgn(exponent) < 0) throw SymbolicError("division by zero");
      return Expr(0);
    }
    if (b == 1) return Expr(1);
    if (detail::is_integer(exponent)) return Expr(detail::rational_pow(b, exponent.get_num().get_si()));
    Rational root;
    if (detail::rational_root(b, exponent.get_den().get_ui(), root)) {
      return Expr(detail::rational_pow(root, exponent.get_num().get_si()));
    }
    // keep integer part outside the radical
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), exponent.get_num_mpz_t(), exponent.get_den_mpz_t());
    if (q != 0) {
      return make_mul({Expr(detail::rational_pow(b, q.get_si())),
                       make_pow(base, Rational(r, exponent.get_den()))});
    }
  }
  if (base.is_pow()) return make_pow(base.base(), base.exponent() * exponent);
  if (base.is_mul() && detail::is_integer(exponent)) {
    std::vector<Expr> fs;
    for (const auto& f : base.args()) fs.push_back(make_pow(f, exponent));
    return make_mul(std::move(fs));
  }
  if (base.is_func(Fn::Exp)) {
    return make_func(Fn::Exp, make_mul({Expr(exponent), base.arg()}));
  }
  ExprNode n;
  n.kind = ExprKind::Pow;
  n.value = exponent;
  n.args = {base};
  return Expr::from_node(std::move(n));
}

inline Expr make_func(Fn f, const Expr& a) {
  switch (f) {
    case Fn::Exp:
      if (a.is_zero_literal()) return Expr(1);
      if (a.is_func(Fn::Log)) return a.arg();
      break;
    case Fn::Log:
      if (a.is_one_literal()) return Expr(0);
      if (a.is_func(Fn::Exp)) return a.arg();
      if (a.is_const() && sgn(a.value()) <= 0) throw SymbolicError("log of non-positive constant");
      break;
    case Fn::Sin:
    case Fn::Atan:
      if (a.is_zero_literal()) return Expr(0);
      break;
    case Fn::Cos:
      if (a.is_zero_literal()) return Expr(1);
      break;
  }
  ExprNode n;
  n.kind = ExprKind::Func;
  n.fn = f;
  n.args = {a};
  return Expr::from_node(std::move(n));
}

// ---------------------------------------------------------------------------
// Arithmetic sugar

inline Expr operator+(const Expr& a, const Expr& b) { return make_add({a, b}); }
inline Expr operator-(const Expr& a) { return make_mul({Expr(-1), a}); }
inline Expr operator-(const Expr& a, const Expr& b) { return make_add({a, -b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return make_mul({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero_literal()) throw SymbolicError("division by zero");
  return make_mul({a, make_pow(b, Rational(-1))});
}
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

inline Expr pow(const Expr& b, const Rational& e) { return make_pow(b, e); }
inline Expr pow(const Expr& b, int e) { return make_pow(b, Rational(e)); }
/// General power; a non-constant exponent is rewritten as exp(e*log(b)).
inline Expr pow(const Expr& b, const Expr& e) {
  if (e.is_const()) return make_pow(b, e.value());
  return make_func(Fn::Exp, e * make_func(Fn::Log, b));
}
inline Expr sqrt(const Expr& e) { return make_pow(e, Rational(1, 2)); }
inline Expr exp(const Expr& e) { return make_func(Fn::Exp, e); }
inline Expr log(const Expr& e) { return make_func(Fn::Log, e); }
inline Expr sin(const Expr& e) { return make_func(Fn::Sin, e); }
inline Expr cos(const Expr& e) { return make_func(Fn::Cos, e); }
inline Expr atan(const Expr& e) { return make_func(Fn::Atan, e); }

inline Expr rational(long p, long q = 1) { return Expr(Rational(p, q)); }

inline const Expr& T() { static const Expr e = Expr::symbol(names::t); return e; }
inline const Expr& X() { static const Expr e = Expr::symbol(names::x); return e; }
inline const Expr& V() { static const Expr e = Expr::symbol(names::v); return e; }
inline const Expr& A() { static const Expr e = Expr::symbol(names::a); return e; }

// ---------------------------------------------------------------------------
// Queries

inline void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.is_symbol()) {
    out.insert(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_symbols(a, out);
}

inline std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> s;
  collect_symbols(e, s);
  return s;
}

inline bool depends_on(const Expr& e, const std::string& name) {
  if (e.is_symbol()) return e.name() == name;
  for (const auto& a : e.args()) {
    if (depends_on(a, name)) return true;
  }
  return false;
}

inline std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args()) n += node_count(a);
  return n;
}

}  // namespace jlm
