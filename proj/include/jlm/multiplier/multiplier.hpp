#pragma once

// Jacobi last multipliers: M(t, x, xdot) with M_t + xdot M_x + F M_xdot + M F_xdot = 0.
// Routes: exp(phi) on the Jacobi class, u^(-1/alpha) on the Lienard class,
// 1/det of a symmetry pair, Jacobian of two first integrals, rescaling.

#include <stdexcept>
#include <string>
#include <vector>

#include "jlm/odemodel/integral.hpp"

namespace jlm {

enum class Route { FromPhi, FromAlpha, FromSymmetryPair, FromIntegralPair, Rescaled };

inline const char* route_name(Route r) {
  switch (r) {
    case Route::FromPhi: return "phi";
    case Route::FromAlpha: return "alpha";
    case Route::FromSymmetryPair: return "symmetry-pair";
    case Route::FromIntegralPair: return "integral-pair";
    case Route::Rescaled: return "rescaled";
  }
  return "?";
}

struct Multiplier {
  Expr M;
  Route route = Route::FromPhi;
  std::string source;  // alpha value, pair labels, parent description
  ZeroVerdict verified;
};

struct AlphaRoute {
  Expr alpha;
  Expr u;  // xdot + g/(alpha f)
};

struct AlphaRoots {
  Expr c;  // (g/f)' / f
  std::vector<Expr> roots;
  bool double_root = false;
  bool symbolic_discriminant = false;
};

/// Defining-equation residual; cross-checked against the divergence form.
inline ZeroVerdict verify_multiplier(const Expr& M, const SecondOrderODE& ode) {
  const Expr& F = ode.F;
  Expr flow = total_derivative(M, F) + M * diff(F, names::v);
  Expr divergence = diff(M, names::t) + diff(M * V(), names::x) + diff(M * F, names::v);
  if (is_zero(flow - divergence).nonzero()) {
    throw std::logic_error("multiplier residual and divergence form disagree");
  }
  return is_zero(flow);
}

inline Multiplier make_multiplier(const Expr& M, const SecondOrderODE& ode, Route route, std::string source) {
  return {M, route, std::move(source), verify_multiplier(M, ode)};
}

inline Multiplier jlm_from_phi(const JacobiForm& jf, const SecondOrderODE& ode) {
  return make_multiplier(simplify(exp(jf.phi)), ode, Route::FromPhi, "exp(" + to_string(jf.phi) + ")");
}

inline Outcome<AlphaRoots> alpha_roots(const LienardForm& lf) {
  using R = Outcome<AlphaRoots>;
  if (is_zero(lf.f).zero()) return R::fail("NoValidAlpha", "f vanishes identically");
  AlphaRoots out;
  out.c = simplify(diff(lf.g / lf.f, names::x) / lf.f);
  for (const auto& s : {names::t, names::x, names::v}) {
    if (!is_zero(diff(out.c, s)).zero()) return R::fail("NoValidAlpha", "(g/f)'/f depends on " + s);
  }
  Expr disc = simplify(Expr(1) - Expr(4) * out.c);
  std::vector<Expr> candidates;
  if (disc.is_const()) {
    const Rational& d = disc.value();
    if (sgn(d) == 0) {
      out.double_root = true;
      candidates.push_back(rational(1, 2));
    } else if (sgn(d) < 0) {
      return R::fail("NoValidAlpha", "complex roots: 1 - 4c = " + to_string(disc));
    } else {
      Expr root = sqrt(disc);
      candidates.push_back(simplify((Expr(1) - root) / Expr(2)));
      candidates.push_back(simplify((Expr(1) + root) / Expr(2)));
    }
  } else {
    out.symbolic_discriminant = true;
    Expr root = sqrt(disc);
    candidates.push_back((Expr(1) - root) / Expr(2));
    candidates.push_back((Expr(1) + root) / Expr(2));
  }
  for (const auto& a : candidates) {
    if (is_zero(a).zero() || is_zero(a - Expr(1)).zero()) continue;
    out.roots.push_back(a);
  }
  if (out.roots.empty()) return R::fail("NoValidAlpha", "every root is 0 or 1 (c = " + to_string(out.c) + ")");
  return R::ok(std::move(out));
}

inline std::pair<AlphaRoute, Multiplier> jlm_from_alpha(const LienardForm& lf, const Expr& alpha,
                                                        const SecondOrderODE& ode) {
  AlphaRoute ar{alpha, simplify(V() + lf.g / (alpha * lf.f))};
  Expr M = pow(ar.u, simplify(Expr(-1) / alpha));
  return {ar, make_multiplier(M, ode, Route::FromAlpha, "alpha=" + to_string(alpha))};
}

/// det of rows (1, xdot, F), row(s1), row(s2), in that order.
inline Expr pair_determinant(const SecondOrderODE& ode, const PointSymmetry& s1, const PointSymmetry& s2) {
  auto r1 = characteristic_row(s1), r2 = characteristic_row(s2);
  Expr d = (r1.xi * r2.eta - r1.eta * r2.xi) - V() * (r1.tau * r2.eta - r1.eta * r2.tau) +
           ode.F * (r1.tau * r2.xi - r1.xi * r2.tau);
  return simplify(d);
}

inline Outcome<Multiplier> jlm_from_pair(const SecondOrderODE& ode, const PointSymmetry& s1, const PointSymmetry& s2) {
  using R = Outcome<Multiplier>;
  Expr d = pair_determinant(ode, s1, s2);
  std::string labels = s1.label + "," + s2.label;
  if (is_zero(d).zero()) return R::fail("DegeneratePair", "determinant vanishes for (" + labels + ")");
  return R::ok(make_multiplier(simplify(Expr(1) / d), ode, Route::FromSymmetryPair, labels));
}

inline Outcome<Multiplier> jlm_from_integrals(const SecondOrderODE& ode, const FirstIntegral& I1,
                                              const FirstIntegral& I2) {
  using R = Outcome<Multiplier>;
  Expr M = simplify(diff(I1.I, names::x) * diff(I2.I, names::v) - diff(I1.I, names::v) * diff(I2.I, names::x));
  std::string labels = I1.label + "," + I2.label;
  if (is_zero(M).zero()) return R::fail("DegeneratePair", "integrals are functionally dependent (" + labels + ")");
  return R::ok(make_multiplier(M, ode, Route::FromIntegralPair, labels));
}

/// True when a/b is free of t, x and xdot.
inline bool constant_ratio(const Expr& a, const Expr& b) {
  Expr r = simplify(a / b);
  for (const auto& s : {names::t, names::x, names::v}) {
    if (!is_zero(diff(r, s)).zero()) return false;
  }
  return true;
}

inline Outcome<FirstIntegral> ratio_integral(const Multiplier& m1, const Multiplier& m2, const SecondOrderODE& ode) {
  using R = Outcome<FirstIntegral>;
  Expr w = simplify(m1.M / m2.M);
  bool constant = true;
  for (const auto& s : {names::t, names::x, names::v}) {
    if (!is_zero(diff(w, s)).zero()) constant = false;
  }
  if (constant) return R::fail("TrivialConstant", "ratio is " + to_string(w));
  return R::ok(make_integral(w, ode, IntegralOrigin::Ratio, "(" + m1.source + ")/(" + m2.source + ")"));
}

inline Multiplier rescale(const Multiplier& m, const FirstIntegral& I, const SecondOrderODE& ode) {
  return make_multiplier(simplify(m.M * I.I), ode, Route::Rescaled, "(" + m.source + ")*" + to_string(I.I));
}

struct PairEnumeration {
  std::vector<Multiplier> multipliers;
  std::vector<std::string> notes;  // degenerate or duplicate pairs
};

inline PairEnumeration enumerate_pairs(const SecondOrderODE& ode, const std::vector<PointSymmetry>& syms) {
  PairEnumeration out;
  for (std::size_t i = 0; i < syms.size(); ++i) {
    for (std::size_t j = i + 1; j < syms.size(); ++j) {
      auto m = jlm_from_pair(ode, syms[i], syms[j]);
      if (!m) {
        out.notes.push_back(m.detail);
        continue;
      }
      bool duplicate = false;
      for (const auto& seen : out.multipliers) {
        if (constant_ratio(m->M, seen.M)) {
          out.notes.push_back("pair (" + m->source + ") repeats (" + seen.source + ") up to a constant");
          duplicate = true;
          break;
        }
      }
      if (!duplicate) out.multipliers.push_back(*m);
    }
  }
  return out;
}

}  // namespace jlm
