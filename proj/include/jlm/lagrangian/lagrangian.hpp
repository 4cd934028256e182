#pragma once

// Lagrangians from multipliers: L = K + f3 + G_x xdot + G_t with K the double
// xdot-antiderivative of M and f3 fixed by the Euler-Lagrange equation.

#include <optional>
#include <stdexcept>
#include <string>

#include "jlm/multiplier/multiplier.hpp"

namespace jlm {

struct Lagrangian {
  Expr L;
  Expr kinetic;  // K
  Expr f3;
  std::optional<Expr> gauge;
  ZeroVerdict el_verified;
  std::string display;  // normalization constants dropped where applicable
};

inline Expr gauge_terms(const std::optional<Expr>& G) {
  if (!G) return Expr(0);
  return diff(*G, names::x) * V() + diff(*G, names::t);
}

/// Euler-Lagrange expression with xddot kept symbolic.
inline Expr el_expression(const Expr& L) {
  Expr Lv = diff(L, names::v);
  return diff(Lv, names::t) + V() * diff(Lv, names::x) + A() * diff(Lv, names::v) - diff(L, names::x);
}

/// Checks E - L_vv (xddot - F) == 0, i.e. E = M (xddot - F).
inline ZeroVerdict el_factorization(const Expr& L, const SecondOrderODE& ode) {
  Expr Lvv = diff(diff(L, names::v), names::v);
  return is_zero(el_expression(L) - Lvv * (A() - ode.F));
}

inline ZeroVerdict verify_el(const Expr& L, const SecondOrderODE& ode) {
  ZeroVerdict on_shell = is_zero(subst(el_expression(L), {{names::a, ode.F}}));
  if (on_shell.zero() && el_factorization(L, ode).nonzero()) {
    throw std::logic_error("Euler-Lagrange residual does not factor as M (xddot - F)");
  }
  return on_shell;
}

inline Expr hessian(const Expr& L) { return simplify(diff(diff(L, names::v), names::v)); }

inline Outcome<Lagrangian> build_lagrangian(const Multiplier& m, const SecondOrderODE& ode,
                                            const std::optional<Expr>& gauge = std::nullopt) {
  using R = Outcome<Lagrangian>;
  auto K1 = antiderivative(m.M, names::v);
  if (!K1) return R::fail("NoPattern", "first xdot-integration: " + K1.reason);
  auto K = antiderivative(*K1, names::v);
  if (!K) return R::fail("NoPattern", "second xdot-integration: " + K.reason);
  Expr Kv = diff(*K, names::v);
  Expr rest = simplify(diff(Kv, names::t) + V() * diff(Kv, names::x) - diff(*K, names::x) + m.M * ode.F);
  if (!is_zero(diff(rest, names::v)).zero()) {
    return R::fail("SolvabilityFailure", "gauge completion depends on xdot: " + to_string(rest));
  }
  Expr f3(0);
  if (!rest.is_zero_literal()) {
    auto a = antiderivative(rest, names::x);
    if (!a) return R::fail("NoPattern", "f3 = integral of " + to_string(rest) + " dx: " + a.reason);
    f3 = *a;
  }
  Lagrangian out;
  out.kinetic = *K;
  out.f3 = f3;
  out.gauge = gauge;
  out.L = *K + f3 + gauge_terms(gauge);
  out.display = to_string(out.L);
  out.el_verified = verify_el(out.L, ode);
  return R::ok(std::move(out));
}

/// Closed form for the Lienard class: u^(2-1/alpha) / ((1-1/alpha)(2-1/alpha)),
/// or -log(u) when alpha = 1/2.
inline Outcome<Lagrangian> lienard_lagrangian(const AlphaRoute& ar, const SecondOrderODE& ode,
                                              const std::optional<Expr>& gauge = std::nullopt) {
  using R = Outcome<Lagrangian>;
  if (is_zero(ar.alpha).zero()) return R::fail("InvalidAlpha", "alpha = 0 leaves u undefined");
  if (is_zero(ar.alpha - Expr(1)).zero()) return R::fail("InvalidAlpha", "alpha = 1 is excluded");
  Expr r = simplify(Expr(1) / ar.alpha);
  Lagrangian out;
  if (is_zero(r - Expr(2)).zero()) {
    out.kinetic = -log(ar.u);
    out.display = to_string(-log(ar.u));
  } else {
    Expr p = simplify(Expr(2) - r);
    out.kinetic = pow(ar.u, p) / simplify((Expr(1) - r) * p);
    out.display = to_string(pow(ar.u, p));
  }
  out.f3 = Expr(0);
  out.gauge = gauge;
  out.L = out.kinetic + gauge_terms(gauge);
  out.el_verified = verify_el(out.L, ode);
  return R::ok(std::move(out));
}

/// L1 and c*L2 differ by a total derivative (plus constant) for some constant c.
/// Returns the verdict for the best constant read off the Hessians.
inline ZeroVerdict lagrangians_equivalent(const Expr& L1, const Expr& L2) {
  Expr h1 = hessian(L1), h2 = hessian(L2);
  if (is_zero(h2).zero()) return is_zero(el_expression(L1));
  Expr c = simplify(h1 / h2);
  for (const auto& s : {names::t, names::x, names::v}) {
    if (is_zero(diff(c, s)).nonzero()) return {ZeroVerdict::NonZero, "Hessian ratio is not constant"};
  }
  return is_zero(el_expression(L1 - c * L2));
}

}  // namespace jlm
