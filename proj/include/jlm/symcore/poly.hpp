#pragma once

// Sparse multivariate polynomials with exact rational coefficients.
//
// Terms are kept strictly descending in lexicographic order (variable 0 most
// significant), so the first term is the leading term.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace jlm {

using Rational = mpq_class;

inline constexpr std::size_t kMaxVars = 40;

struct Monomial {
  std::array<std::int16_t, kMaxVars> e{};

  std::int16_t& operator[](std::size_t i) { return e[i]; }
  std::int16_t operator[](std::size_t i) const { return e[i]; }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.e <=> b.e; }

  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (e[i] > o.e[i]) return false;
    }
    return true;
  }
  bool is_one() const {
    for (auto x : e) {
      if (x != 0) return false;
    }
    return true;
  }
  Monomial operator+(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::int16_t>(e[i] + o.e[i]);
    return r;
  }
  Monomial operator-(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::int16_t>(e[i] - o.e[i]);
    return r;
  }
  std::size_t hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : e) h = (h ^ static_cast<std::uint16_t>(x)) * 1099511628211ULL;
    return h;
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

namespace modp {

inline constexpr std::uint64_t kPrime = (1ULL << 61) - 1;

// The working modulus is per thread; callers that need a different field
// (e.g. one where a constant radicand is a square) install it with ScopedPrime.
inline std::uint64_t& modulus_slot() {
  thread_local std::uint64_t p = kPrime;
  return p;
}
inline std::uint64_t modulus() { return modulus_slot(); }

class ScopedPrime {
 public:
  explicit ScopedPrime(std::uint64_t p) : saved_(modulus_slot()) { modulus_slot() = p; }
  ~ScopedPrime() { modulus_slot() = saved_; }
  ScopedPrime(const ScopedPrime&) = delete;
  ScopedPrime& operator=(const ScopedPrime&) = delete;

 private:
  std::uint64_t saved_;
};

inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t p = modulus();
  std::uint64_t r = a + b;
  return r >= p ? r - p : r;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + modulus() - b; }
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t p = modulus();
  unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  if (p != kPrime) return static_cast<std::uint64_t>(r % p);
  std::uint64_t lo = static_cast<std::uint64_t>(r & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(r >> 61);
  std::uint64_t s = lo + hi;
  return s >= kPrime ? s - kPrime : s;
}
inline std::uint64_t pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}
inline std::uint64_t inv(std::uint64_t a) {
  if (a == 0) throw std::domain_error("modular inverse of zero");
  return pow(a, modulus() - 2);
}
inline std::uint64_t of(const mpz_class& z) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), modulus());
  return r.get_ui();
}
inline std::uint64_t of(const Rational& q) {
  std::uint64_t d = of(q.get_den());
  if (d == 0) throw std::domain_error("denominator vanishes modulo the prime");
  return mul(of(q.get_num()), inv(d));
}

}  // namespace modp

class Poly {
 public:
  struct Term {
    Monomial m;
    Rational c;
  };

  Poly() = default;

  static Poly constant(const Rational& c) {
    Poly p;
    if (sgn(c) != 0) p.terms_.push_back({Monomial{}, c});
    return p;
  }
  static Poly variable(std::size_t i, int power = 1) {
    Poly p;
    Monomial m;
    m[i] = static_cast<std::int16_t>(power);
    p.terms_.push_back({m, Rational(1)});
    return p;
  }
  static Poly monomial(const Monomial& m, const Rational& c) {
    Poly p;
    if (sgn(c) != 0) p.terms_.push_back({m, c});
    return p;
  }
  /// Builds from unsorted terms, merging duplicates.
  static Poly from_terms(std::vector<Term> ts) {
    std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) { return a.m > b.m; });
    Poly p;
    for (auto& t : ts) {
      if (!p.terms_.empty() && p.terms_.back().m == t.m) {
        p.terms_.back().c += t.c;
        if (sgn(p.terms_.back().c) == 0) p.terms_.pop_back();
      } else if (sgn(t.c) != 0) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
  Rational constant_value() const { return terms_.empty() ? Rational(0) : terms_[0].c; }
  const Rational& lc() const { return terms_.front().c; }
  const Monomial& lm() const { return terms_.front().m; }
  bool is_monomial() const { return terms_.size() == 1; }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].m != b.terms_[i].m || a.terms_[i].c != b.terms_[i].c) return false;
    }
    return true;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    if (a.is_constant()) return b.scaled(a.constant_value());
    if (b.is_constant()) return a.scaled(b.constant_value());
    if (a.size() == 1) return b.shifted(a.terms_[0].m).scaled(a.terms_[0].c);
    if (b.size() == 1) return a.shifted(b.terms_[0].m).scaled(b.terms_[0].c);
    std::map<Monomial, Rational, std::greater<>> acc;
    Rational tmp;
    for (const auto& x : a.terms_) {
      for (const auto& y : b.terms_) {
        tmp = x.c * y.c;
        auto [it, fresh] = acc.try_emplace(x.m + y.m, tmp);
        if (!fresh) it->second += tmp;
      }
    }
    Poly r;
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc) {
      if (sgn(c) != 0) r.terms_.push_back({m, c});
    }
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const Rational& c) const {
    if (sgn(c) == 0) return Poly();
    Poly r = *this;
    for (auto& t : r.terms_) t.c *= c;
    return r;
  }
  Poly shifted(const Monomial& m) const {
    Poly r = *this;
    for (auto& t : r.terms_) t.m = t.m + m;
    return r;
  }

  Poly pow(unsigned n) const {
    Poly r = Poly::constant(1);
    Poly b = *this;
    while (n) {
      if (n & 1) r = r * b;
      n >>= 1;
      if (n) b = b * b;
    }
    return r;
  }

  int degree(std::size_t var) const {
    int d = -1;
    for (const auto& t : terms_) d = std::max<int>(d, t.m[var]);
    return d;
  }
  int min_degree(std::size_t var) const {
    int d = 1 << 30;
    for (const auto& t : terms_) d = std::min<int>(d, t.m[var]);
    return terms_.empty() ? 0 : d;
  }
  bool uses(std::size_t var) const {
    for (const auto& t : terms_) {
      if (t.m[var] != 0) return true;
    }
    return false;
  }
  std::uint64_t var_mask() const {
    std::uint64_t mask = 0;
    for (const auto& t : terms_) {
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        if (t.m[i] != 0) mask |= (1ULL << i);
      }
    }
    return mask;
  }

  /// Coefficient of var^k, as a polynomial free of var.
  Poly coeff(std::size_t var, int k) const {
    Poly r;
    for (const auto& t : terms_) {
      if (t.m[var] == k) {
        Term c = t;
        c.m[var] = 0;
        r.terms_.push_back(std::move(c));
      }
    }
    return r;
  }
  std::vector<Poly> coeffs(std::size_t var) const {
    int d = degree(var);
    std::vector<Poly> out(static_cast<std::size_t>(std::max(d + 1, 0)));
    for (const auto& t : terms_) {
      Term c = t;
      c.m[var] = 0;
      out[static_cast<std::size_t>(t.m[var])].terms_.push_back(std::move(c));
    }
    return out;
  }
  Poly lead_coeff(std::size_t var) const { return coeff(var, degree(var)); }

  Monomial min_monomial() const {
    Monomial m;
    if (terms_.empty()) return m;
    m = terms_[0].m;
    for (const auto& t : terms_) {
      for (std::size_t i = 0; i < kMaxVars; ++i) m.e[i] = std::min(m.e[i], t.m.e[i]);
    }
    return m;
  }
  Poly divided_by_monomial(const Monomial& m) const {
    Poly r = *this;
    for (auto& t : r.terms_) t.m = t.m - m;
    return r;
  }

  /// Positive rational c with (*this)/c having coprime integer coefficients.
  Rational content() const {
    if (terms_.empty()) return Rational(1);
    mpz_class g = 0, l = 1;
    for (const auto& t : terms_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_num_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.get_den_mpz_t());
    }
    Rational c(abs(g), l);
    c.canonicalize();
    return c;
  }
  /// Integer-primitive with positive leading coefficient.
  Poly primitive() const {
    if (terms_.empty()) return Poly();
    Rational c = content();
    if (sgn(lc()) < 0) c = -c;
    Poly r = *this;
    for (auto& t : r.terms_) t.c /= c;
    return r;
  }

  std::optional<Poly> divide_exact(const Poly& b) const {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (is_zero()) return Poly();
    if (b.is_constant()) return scaled(Rational(1) / b.constant_value());
    Poly q, r = *this;
    const Monomial& blm = b.lm();
    const Rational& blc = b.lc();
    std::vector<Term> qt;
    while (!r.is_zero()) {
      const Term& lt = r.terms_.front();
      if (!blm.divides(lt.m)) return std::nullopt;
      Monomial mq = lt.m - blm;
      Rational cq = lt.c / blc;
      qt.push_back({mq, cq});
      r = r - b.shifted(mq).scaled(cq);
    }
    q.terms_ = std::move(qt);  // produced in descending order
    return q;
  }

  /// Replaces var^q by p repeatedly (algebraic relation var^q = p).
  Poly reduce_power(std::size_t var, int q, const Poly& p) const {
    bool needed = false;
    for (const auto& t : terms_) {
      if (t.m[var] >= q) needed = true;
    }
    if (!needed) return *this;
    std::vector<Term> keep;
    Poly extra;
    std::vector<Poly> ppow;
    for (const auto& t : terms_) {
      if (t.m[var] < q) {
        keep.push_back(t);
        continue;
      }
      int k = t.m[var] / q;
      Term rest = t;
      rest.m[var] = static_cast<std::int16_t>(t.m[var] % q);
      while (static_cast<int>(ppow.size()) < k) ppow.push_back(ppow.empty() ? p : ppow.back() * p);
      extra += ppow[static_cast<std::size_t>(k - 1)].shifted(rest.m).scaled(rest.c);
    }
    Poly r = Poly::from_terms(std::move(keep)) + extra;
    return r.reduce_power(var, q, p);
  }

  /// Substitutes polynomial values for variables (vars absent from the map are kept).
  Poly substitute(const std::map<std::size_t, Poly>& vals) const {
    Poly r;
    for (const auto& t : terms_) {
      Monomial keep = t.m;
      Poly f = Poly::constant(t.c);
      for (const auto& [var, val] : vals) {
        if (t.m[var] > 0) {
          f = f * val.pow(static_cast<unsigned>(t.m[var]));
          keep[var] = 0;
        }
      }
      r += f.shifted(keep);
    }
    return r;
  }

  template <class Real>
  Real evaluate(const std::vector<Real>& vals) const {
    Real sum = 0;
    for (const auto& t : terms_) {
      Real term = static_cast<Real>(t.c.get_d());
      for (std::size_t i = 0; i < kMaxVars && i < vals.size(); ++i) {
        for (int k = 0; k < t.m[i]; ++k) term *= vals[i];
      }
      sum += term;
    }
    return sum;
  }

  std::uint64_t evaluate_mod(const std::vector<std::uint64_t>& vals) const {
    std::uint64_t sum = 0;
    for (const auto& t : terms_) {
      std::uint64_t term = modp::of(t.c);
      for (std::size_t i = 0; i < kMaxVars && i < vals.size(); ++i) {
        if (t.m[i] > 0) term = modp::mul(term, modp::pow(vals[i], static_cast<std::uint64_t>(t.m[i])));
      }
      sum = modp::add(sum, term);
    }
    return sum;
  }

 private:
  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    Poly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].m > b.terms_[j].m)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].m > a.terms_[i].m) {
        Term t = b.terms_[j++];
        if (subtract) t.c = -t.c;
        r.terms_.push_back(std::move(t));
      } else {
        Rational c = subtract ? Rational(a.terms_[i].c - b.terms_[j].c) : Rational(a.terms_[i].c + b.terms_[j].c);
        if (sgn(c) != 0) r.terms_.push_back({a.terms_[i].m, c});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// GCD (primitive pseudo-remainder sequences, recursive contents)

Poly gcd(const Poly& a, const Poly& b);

namespace detail {

inline Poly content_in(const Poly& a, std::size_t var) {
  auto cs = a.coeffs(var);
  std::vector<Poly> nz;
  for (auto& c : cs) {
    if (!c.is_zero()) nz.push_back(std::move(c));
  }
  std::sort(nz.begin(), nz.end(), [](const Poly& x, const Poly& y) { return x.size() < y.size(); });
  Poly g = nz.front().primitive();
  for (std::size_t i = 1; i < nz.size(); ++i) {
    if (g.is_constant()) break;
    g = gcd(g, nz[i]);
  }
  return g;
}

inline Poly exact(const Poly& a, const Poly& b) {
  auto q = a.divide_exact(b);
  if (!q) throw std::logic_error("expected exact polynomial division");
  return *q;
}

inline Poly primitive_in(const Poly& a, std::size_t var) {
  Poly c = content_in(a, var);
  if (c.is_constant()) return a.primitive();
  return exact(a, c).primitive();
}

inline Poly pseudo_remainder(const Poly& a, const Poly& b, std::size_t var) {
  int n = b.degree(var);
  Poly lcb = b.coeff(var, n);
  Poly r = a;
  while (!r.is_zero()) {
    int d = r.degree(var);
    if (d < n) break;
    Poly lcr = r.coeff(var, d);
    Poly xb = b * lcr;
    if (d > n) xb = xb * Poly::variable(var, d - n);
    r = (r * lcb - xb).primitive();
  }
  return r;
}

inline Poly gcd_core(const Poly& a, const Poly& b) {
  if (a == b) return a;
  if (a.is_constant() || b.is_constant()) return Poly::constant(1);
  std::uint64_t ma = a.var_mask(), mb = b.var_mask();
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    std::uint64_t bit = 1ULL << i;
    if ((ma & bit) && !(mb & bit)) return gcd(content_in(a, i), b);
    if ((mb & bit) && !(ma & bit)) return gcd(a, content_in(b, i));
  }
  if (a.size() <= b.size()) {
    if (auto q = b.divide_exact(a)) return a;
  } else {
    if (auto q = a.divide_exact(b)) return b;
  }
  std::size_t var = 0;
  int best = 1 << 30;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (!(ma & (1ULL << i))) continue;
    int d = std::min(a.degree(i), b.degree(i));
    if (d < best) {
      best = d;
      var = i;
    }
  }
  Poly ca = content_in(a, var), cb = content_in(b, var);
  Poly c = gcd(ca, cb);
  Poly pa = ca.is_constant() ? a : exact(a, ca);
  Poly pb = cb.is_constant() ? b : exact(b, cb);
  if (pa.degree(var) < pb.degree(var)) std::swap(pa, pb);
  Poly g;
  for (;;) {
    Poly r = pseudo_remainder(pa, pb, var);
    if (r.is_zero()) {
      g = pb;
      break;
    }
    if (r.degree(var) == 0) {
      g = Poly::constant(1);
      break;
    }
    pa = std::move(pb);
    pb = primitive_in(r, var);
  }
  g = primitive_in(g, var);
  return (c * g).primitive();
}

}  // namespace detail

/// Greatest common divisor, integer-primitive with positive leading coefficient.
inline Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.primitive();
  if (b.is_zero()) return a.primitive();
  if (a.is_constant() || b.is_constant()) return Poly::constant(1);
  Monomial ma = a.min_monomial(), mb = b.min_monomial(), mg;
  for (std::size_t i = 0; i < kMaxVars; ++i) mg.e[i] = std::min(ma.e[i], mb.e[i]);
  Poly pa = a.divided_by_monomial(ma).primitive();
  Poly pb = b.divided_by_monomial(mb).primitive();
  Poly g = detail::gcd_core(pa, pb);
  return g.shifted(mg);
}

}  // namespace jlm
