#pragma once

// Second-order ODEs x'' = F(t, x, xdot), their recognizable structural forms,
// point symmetries and point transformations.

#include <string>
#include <vector>

#include "jlm/outcome.hpp"
#include "jlm/symcore/calculus.hpp"
#include "jlm/symcore/integrate.hpp"
#include "jlm/symcore/parser.hpp"
#include "jlm/symcore/zero.hpp"

namespace jlm {

struct SecondOrderODE {
  Expr F;
  std::string name;
  std::vector<std::string> params;

  static SecondOrderODE parse(const std::string& rhs, std::vector<std::string> params = {}, std::string name = {}) {
    return {jlm::parse(rhs, params), std::move(name), std::move(params)};
  }
};

/// x'' + f(x) x' + g(x) = 0
struct LienardForm {
  Expr f;
  Expr g;
};

/// x'' + phi_x x'^2 / 2 + phi_t x' + B = 0
struct JacobiForm {
  Expr phi;
  Expr B;
};

struct PointSymmetry {
  Expr tau;  // coefficient of d/dt
  Expr xi;   // coefficient of d/dx
  std::string label;
};

struct PointMap {
  Expr t_new;
  Expr x_new;
};

namespace detail {

inline bool vanishes(const Expr& e) { return is_zero(e).zero(); }

}  // namespace detail

inline Outcome<LienardForm> lienard_form(const SecondOrderODE& ode) {
  using R = Outcome<LienardForm>;
  Expr f = simplify(-diff(ode.F, names::v));
  if (!detail::vanishes(diff(f, names::v))) return R::fail("NotInClass", "f depends on xdot");
  if (!detail::vanishes(diff(f, names::t))) return R::fail("NotInClass", "f depends on t");
  Expr g = simplify(-ode.F - f * V());
  if (!detail::vanishes(diff(g, names::v))) return R::fail("NotInClass", "g depends on xdot");
  if (!detail::vanishes(diff(g, names::t))) return R::fail("NotInClass", "g depends on t");
  if (!detail::vanishes(ode.F + f * V() + g)) return R::fail("NotInClass", "re-substitution check failed");
  return R::ok({f, g});
}

inline Outcome<JacobiForm> jacobi_form(const SecondOrderODE& ode) {
  using R = Outcome<JacobiForm>;
  Expr negF = -ode.F;
  Expr d1 = diff(negF, names::v), d2 = diff(d1, names::v);
  if (!detail::vanishes(diff(d2, names::v))) return R::fail("NotInClass", "not quadratic in xdot");
  Expr a = simplify(d2 / Expr(2));
  Expr b = simplify(subst(d1, {{names::v, Expr(0)}}));
  auto phi_x = antiderivative(Expr(2) * a, names::x);
  if (!phi_x) return R::fail("NotInClass", "cannot integrate the xdot^2 coefficient: " + phi_x.reason);
  Expr psi_t = simplify(b - diff(*phi_x, names::t));
  if (!detail::vanishes(diff(psi_t, names::x))) return R::fail("NotInClass", "psi'(t) depends on x");
  auto psi = antiderivative(psi_t, names::t);
  if (!psi) return R::fail("NotInClass", "cannot integrate psi'(t): " + psi.reason);
  Expr phi = simplify(*phi_x + *psi);
  Expr B = simplify(negF - diff(phi, names::x) * V() * V() / Expr(2) - diff(phi, names::t) * V());
  if (!detail::vanishes(diff(B, names::v))) return R::fail("NotInClass", "B depends on xdot");
  if (!detail::vanishes(ode.F + diff(phi, names::x) * V() * V() / Expr(2) + diff(phi, names::t) * V() + B)) {
    return R::fail("NotInClass", "re-substitution check failed");
  }
  return R::ok({phi, B});
}

struct CharacteristicRow {
  Expr tau, xi, eta;
};

/// (tau, xi, D xi - xdot D tau) with D = d/dt + xdot d/dx.
inline CharacteristicRow characteristic_row(const PointSymmetry& s) {
  Expr eta = point_derivative(s.xi) - V() * point_derivative(s.tau);
  return {s.tau, s.xi, simplify(eta)};
}

/// Checks that the source flow, written in the new variables, satisfies the
/// target equation: d^2 x~/dt~^2 = F_dst(t~, x~, dx~/dt~).
inline Outcome<ZeroVerdict> point_transform_check(const SecondOrderODE& src, const PointMap& map,
                                                  const SecondOrderODE& dst) {
  using R = Outcome<ZeroVerdict>;
  Expr jac = diff(map.t_new, names::t) * diff(map.x_new, names::x) - diff(map.t_new, names::x) * diff(map.x_new, names::t);
  if (is_zero(jac).zero()) return R::fail("DegenerateMap", "Jacobian of the map vanishes identically");
  Expr Dt = point_derivative(map.t_new);
  if (is_zero(Dt).zero()) return R::fail("DegenerateMap", "D t~ vanishes identically");
  Expr p = simplify(point_derivative(map.x_new) / Dt);
  Expr pp = total_derivative(p, src.F) / Dt;
  Expr target = subst(dst.F, {{names::t, map.t_new}, {names::x, map.x_new}, {names::v, p}});
  return R::ok(is_zero(pp - target));
}

}  // namespace jlm
