#pragma once

// Zero testing: exact rational normal form first, numeric sampling second.

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "jlm/symcore/normal_form.hpp"
#include "jlm/symcore/printer.hpp"

namespace jlm {

/// Raised when numeric evaluation hits a near-zero denominator or leaves the
/// real domain (log of a non-positive value, fractional power of a negative).
class EvaluationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDenominatorFault = 1e-12;

namespace detail {

template <class Real>
struct Evaluator {
  const std::map<std::string, Real>& values;
  Real min_den = std::numeric_limits<Real>::infinity();

  Real denominator(Real d) {
    Real a = d < 0 ? -d : d;
    if (a < Real(kDenominatorFault)) throw EvaluationFault("denominator vanishes");
    if (a < min_den) min_den = a;
    return d;
  }

  Real operator()(const Expr& e) {
    using std::pow, std::exp, std::log, std::sin, std::cos, std::atan;
    switch (e.kind()) {
      case ExprKind::Const:
        return Real(e.value().get_num().get_d()) / Real(e.value().get_den().get_d());
      case ExprKind::Symbol: {
        auto it = values.find(e.name());
        if (it == values.end()) throw EvaluationFault("no value for symbol '" + e.name() + "'");
        return it->second;
      }
      case ExprKind::Add: {
        Real s = 0;
        for (const auto& a : e.args()) s += (*this)(a);
        return s;
      }
      case ExprKind::Mul: {
        Real p = 1;
        for (const auto& a : e.args()) p *= (*this)(a);
        return p;
      }
      case ExprKind::Pow: {
        Real b = (*this)(e.base());
        const Rational& r = e.exponent();
        if (sgn(r) < 0) denominator(b);
        if (r.get_den() == 1) {
          long n = r.get_num().get_si();
          Real out = 1, base = n < 0 ? Real(1) / b : b;
          for (unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n); k; k >>= 1) {
            if (k & 1) out *= base;
            base *= base;
          }
          return out;
        }
        if (b < 0) throw EvaluationFault("fractional power of a negative value");
        return pow(b, Real(r.get_num().get_d()) / Real(r.get_den().get_d()));
      }
      case ExprKind::Func: {
        Real a = (*this)(e.arg());
        switch (e.fn()) {
          case Fn::Exp: return exp(a);
          case Fn::Log:
            if (!(a > 0)) throw EvaluationFault("log of a non-positive value");
            return log(a);
          case Fn::Sin: return sin(a);
          case Fn::Cos: return cos(a);
          case Fn::Atan: return atan(a);
        }
      }
    }
    return 0;
  }
};

}  // namespace detail

/// Evaluates `e` with the given symbol values.
template <class Real = double>
Real eval_num(const Expr& e, const std::map<std::string, Real>& values) {
  detail::Evaluator<Real> ev{values};
  Real r = ev(e);
  if (!std::isfinite(static_cast<double>(r))) throw EvaluationFault("non-finite value");
  return r;
}

/// Same as eval_num, also reporting the smallest |denominator| met on the way.
template <class Real = double>
Real eval_num_tracked(const Expr& e, const std::map<std::string, Real>& values, Real& min_den) {
  detail::Evaluator<Real> ev{values};
  Real r = ev(e);
  if (!std::isfinite(static_cast<double>(r))) throw EvaluationFault("non-finite value");
  min_den = ev.min_den;
  return r;
}

struct ZeroVerdict {
  enum Kind { Zero, NonZero, Unknown };
  Kind kind = Unknown;
  std::string witness;  // sample point for NonZero, reason for Unknown

  bool zero() const { return kind == Zero; }
  bool nonzero() const { return kind == NonZero; }
};

inline const char* verdict_name(ZeroVerdict::Kind k) {
  switch (k) {
    case ZeroVerdict::Zero: return "zero";
    case ZeroVerdict::NonZero: return "nonzero";
    case ZeroVerdict::Unknown: return "unknown";
  }
  return "unknown";
}

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2024ULL;
inline constexpr int kSamplePoints = 16;
inline constexpr double kZeroTolerance = 1e-9;
inline constexpr double kConditioning = 1e-6;

/// Draws a sample point: every symbol gets a rational in [1/4, 5/2].
inline std::map<std::string, double> sample_point(const std::set<std::string>& symbols, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k(16, 160);
  std::map<std::string, double> pt;
  for (const auto& s : symbols) pt[s] = k(rng) / 64.0;
  return pt;
}

inline std::string describe_point(const std::map<std::string, double>& pt) {
  std::string out;
  for (const auto& [k, v] : pt) {
    if (!out.empty()) out += ", ";
    out += k + "=" + std::to_string(v);
  }
  return out;
}

/// Numeric half of the zero test, usable on its own.
inline ZeroVerdict sample_zero(const Expr& e, std::uint64_t seed = kDefaultSeed) {
  std::mt19937_64 rng(seed);
  auto symbols = free_symbols(e);
  int good = 0;
  for (int i = 0; i < kSamplePoints; ++i) {
    auto pt = sample_point(symbols, rng);
    try {
      double min_den = 0;
      double val = eval_num_tracked(e, pt, min_den);
      if (min_den <= kConditioning) continue;
      ++good;
      if (std::fabs(val) > kZeroTolerance) return {ZeroVerdict::NonZero, describe_point(pt)};
    } catch (const EvaluationFault&) {
    }
  }
  if (good == 0) return {ZeroVerdict::Unknown, "no well-conditioned sample point"};
  return {ZeroVerdict::Zero, {}};
}

/// Decides whether `e` vanishes identically. Only a normal form that reduces
/// to 0 proves Zero; sampling can prove NonZero; anything else is Unknown.
inline ZeroVerdict is_zero(const Expr& e, std::uint64_t seed = kDefaultSeed) {
  if (e.is_const()) {
    if (e.is_zero_literal()) return {ZeroVerdict::Zero, {}};
    return {ZeroVerdict::NonZero, "constant " + to_string(e)};
  }
  std::string reason = "normal form nonzero but every sample vanishes";
  try {
    Algebra alg;
    if (alg.from_expr(e).is_zero()) return {ZeroVerdict::Zero, {}};
  } catch (const std::exception& err) {
    reason = std::string("normalization failed: ") + err.what();
  }
  ZeroVerdict s = sample_zero(e, seed);
  if (s.kind == ZeroVerdict::Zero) return {ZeroVerdict::Unknown, reason};
  return s;
}

}  // namespace jlm
