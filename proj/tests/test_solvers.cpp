#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "jlm/noether/noether.hpp"
#include "jlm/numlab/numlab.hpp"

using namespace jlm;

namespace {

const std::vector<std::string> kLienardParams{"k", "lam"};

SecondOrderODE riccati() { return SecondOrderODE::parse("-3*x*xdot - x^3"); }
SecondOrderODE lienard() { return SecondOrderODE::parse("-k*x*xdot - k^2*x^3/9 - lam*x", kLienardParams); }
SecondOrderODE nonautonomous() { return SecondOrderODE::parse("-xdot^2/x + xdot/t"); }
SecondOrderODE mathews_lakshmanan() { return SecondOrderODE::parse("x*(-a + lam*xdot^2)/(lam*x^2 + 1)", {"a", "lam"}); }

PointSymmetry sym(const char* tau, const char* xi, const char* label) { return {parse(tau), parse(xi), label}; }

bool proportional(const Expr& a, const Expr& b) { return constant_ratio(a, b); }

// flow derivative evaluated numerically at random points: an oracle that does
// not share the normal form with is_zero
double max_flow_derivative(const Expr& I, const SecondOrderODE& ode, std::map<std::string, double> params = {},
                           double lo = 0.4, double hi = 1.3) {
  Expr d = total_derivative(I, ode.F);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(lo, hi);
  double worst = 0;
  for (int i = 0; i < 8; ++i) {
    auto b = params;
    b[names::t] = u(rng);
    b[names::x] = u(rng);
    b[names::v] = u(rng);
    worst = std::max(worst, std::fabs(eval_num<double>(d, b)));
  }
  return worst;
}

}  // namespace

TEST(OdeModel, LienardAndJacobiForms) {
  auto lf = lienard_form(lienard());
  ASSERT_TRUE(lf) << lf.detail;
  EXPECT_TRUE(is_zero(lf->f - parse("k*x", kLienardParams)).zero());
  EXPECT_TRUE(is_zero(lf->g - parse("k^2*x^3/9 + lam*x", kLienardParams)).zero());
  EXPECT_EQ(lienard_form(riccati()).code, "");
  EXPECT_EQ(lienard_form(nonautonomous()).code, "NotInClass");
  ASSERT_TRUE(jacobi_form(mathews_lakshmanan()));
  EXPECT_TRUE(jacobi_form(nonautonomous()));
}

TEST(OdeModel, ConservationCheckAgreesWithNumericOracle) {
  auto ode = nonautonomous();
  for (const char* s : {"x^2*(x^2 - 2*x*xdot*t + xdot^2*t^2)", "x^2*xdot*(-x + xdot*t)/(2*t)", "x^2*xdot^2/(2*t^2)",
                        "x*(x - xdot*t)", "x*xdot/t"}) {
    EXPECT_TRUE(conservation_check(parse(s), ode).zero()) << s;
    EXPECT_LT(max_flow_derivative(parse(s), ode), 1e-9) << s;
  }
  EXPECT_TRUE(conservation_check(parse("x*xdot"), ode).nonzero());
}

TEST(OdeModel, PointTransform) {
  // t~ = t, x~ = x e^t carries x'' = -2x' - x ... checked against the free particle
  auto damped = SecondOrderODE::parse("-2*xdot - x");
  auto free = SecondOrderODE::parse("0");
  auto r = point_transform_check(damped, {parse("t"), parse("x*exp(t)")}, free);
  ASSERT_TRUE(r);
  EXPECT_TRUE(r->zero());
  auto bad = point_transform_check(damped, {parse("t"), parse("x")}, free);
  ASSERT_TRUE(bad);
  EXPECT_TRUE(bad->nonzero());
  EXPECT_EQ(point_transform_check(damped, {parse("x"), parse("x")}, free).code, "DegenerateMap");
}

TEST(Multiplier, RiccatiSymmetryPairs) {
  auto ode = riccati();
  auto m56 = jlm_from_pair(ode, sym("x", "-x^3", "G5"), sym("1", "0", "G6"));
  ASSERT_TRUE(m56) << m56.detail;
  EXPECT_TRUE(is_zero(m56->M - parse("-(xdot + x^2)^(-3)")).zero()) << to_string(m56->M);
  EXPECT_TRUE(m56->verified.zero());

  PointSymmetry g9 = sym("x*t^3 - t^2", "-(x*t - 1)*(x^2*t^2 - 2*x*t + 2)", "G9");
  auto m19 = jlm_from_pair(ode, sym("t^3*(t*x - 2)", "-t*(x*t - 2)*(x^2*t^2 + 2 - 2*x*t)", "G1"), g9);
  ASSERT_TRUE(m19) << m19.detail;
  EXPECT_TRUE(proportional(m19->M, parse("-(t^2*x^2 + t^2*xdot - 2*t*x + 2)^(-3)")));

  EXPECT_EQ(jlm_from_pair(ode, sym("1", "0", "a"), sym("2", "0", "b")).code, "DegeneratePair");
}

TEST(Multiplier, AlphaRoutes) {
  auto lf = lienard_form(lienard());
  auto roots = alpha_roots(*lf);
  ASSERT_TRUE(roots) << roots.detail;
  ASSERT_EQ(roots->roots.size(), 2u);
  std::set<std::string> got{to_string(roots->roots[0]), to_string(roots->roots[1])};
  EXPECT_EQ(got, (std::set<std::string>{"1/3", "2/3"}));
  for (const auto& a : roots->roots) {
    auto [ar, m] = jlm_from_alpha(*lf, a, lienard());
    EXPECT_TRUE(m.verified.zero()) << to_string(a);
  }

  auto cd = lienard_form(SecondOrderODE::parse("-2*xdot - x"));
  auto r2 = alpha_roots(*cd);
  ASSERT_TRUE(r2);
  EXPECT_TRUE(r2->double_root);
  ASSERT_EQ(r2->roots.size(), 1u);
  EXPECT_EQ(to_string(r2->roots[0]), "1/2");
}

TEST(Multiplier, RatioIntegralIsConserved) {
  auto ode = riccati();
  auto m1 = make_multiplier(parse("-(xdot + x^2)^(-3)"), ode, Route::FromSymmetryPair, "G5,G6");
  auto m2 = make_multiplier(parse("-(t^2*x^2 + t^2*xdot - 2*t*x + 2)^(-3)"), ode, Route::FromSymmetryPair, "G1,G9");
  auto I = ratio_integral(m1, m2, ode);
  ASSERT_TRUE(I) << I.detail;
  EXPECT_TRUE(I->conserved.zero());
  EXPECT_LT(max_flow_derivative(I->I, ode), 1e-8);
  EXPECT_EQ(ratio_integral(m1, m1, ode).code, "TrivialConstant");
}

TEST(Lagrangian, BuildFromMultiplierRoundTrips) {
  struct Case {
    SecondOrderODE ode;
    const char* M;
  };
  std::vector<Case> cases{{riccati(), "-(xdot + x^2)^(-3)"},
                          {riccati(), "-(t^2*x^2 + t^2*xdot - 2*t*x + 2)^(-3)"},
                          {nonautonomous(), "x^2/t"},
                          {mathews_lakshmanan(), "1/(lam*x^2 + 1)"},
                          {SecondOrderODE::parse("-2*xdot - x"), "(xdot + x)^(-2)"}};
  for (const auto& c : cases) {
    auto m = make_multiplier(parse(c.M, c.ode.params), c.ode, Route::FromPhi, "test");
    ASSERT_TRUE(m.verified.zero()) << c.M;
    auto L = build_lagrangian(m, c.ode);
    ASSERT_TRUE(L) << c.M << ": " << L.detail;
    EXPECT_TRUE(is_zero(hessian(L->L) - m.M).zero()) << c.M;
    EXPECT_TRUE(el_factorization(L->L, c.ode).zero()) << c.M;
    EXPECT_TRUE(verify_el(L->L, c.ode).zero()) << c.M;
  }
}

TEST(Lagrangian, MathewsLakshmananDiffersByConstant) {
  auto ode = mathews_lakshmanan();
  auto m = make_multiplier(parse("1/(lam*x^2 + 1)", ode.params), ode, Route::FromPhi, "phi");
  auto L = build_lagrangian(m, ode);
  ASSERT_TRUE(L);
  Expr printed = parse("(xdot^2 - a*x^2)/(2*(lam*x^2 + 1))", ode.params);
  Expr diff_L = L->L - printed;
  EXPECT_TRUE(is_zero(el_expression(diff_L)).zero());
  EXPECT_TRUE(lagrangians_equivalent(L->L, printed).zero());
}

TEST(Lagrangian, LogBranchForDoubleRoot) {
  auto ode = SecondOrderODE::parse("-2*xdot - x");
  auto lf = lienard_form(ode);
  auto [ar, m] = jlm_from_alpha(*lf, rational(1, 2), ode);
  auto L = lienard_lagrangian(ar, ode);
  ASSERT_TRUE(L) << L.detail;
  EXPECT_TRUE(proportional(L->L, parse("log(xdot + x)")));
  EXPECT_TRUE(verify_el(L->L, ode).zero());
  EXPECT_EQ(lienard_lagrangian({Expr(1), parse("xdot")}, ode).code, "InvalidAlpha");
}

TEST(Noether, FreeParticleHasFiveSymmetries) {
  NoetherOptions o;
  o.degree = 2;
  auto s = noether_solve(parse("xdot^2/2"), SecondOrderODE::parse("0"), o);
  ASSERT_TRUE(s) << s.detail;
  EXPECT_EQ(s->dimension(), 5u);
  for (const auto& c : s->basis) EXPECT_TRUE(c.residual.zero());
}

TEST(Noether, RiccatiLagrangiansHaveFiveSymmetries) {
  auto ode = riccati();
  for (const char* L : {"-1/(2*(xdot + x^2))", "-1/(2*t^4*(x^2*t^2 + xdot*t^2 - 2*x*t + 2))"}) {
    auto s = noether_solve(parse(L), ode);
    ASSERT_TRUE(s) << s.detail;
    EXPECT_EQ(s->dimension(), 5u) << L;
    for (const auto& I : s->integrals) {
      EXPECT_TRUE(I.conserved.zero());
      EXPECT_LT(max_flow_derivative(I.I, ode), 1e-7) << to_string(I.I);
    }
    std::vector<Expr> basis;
    for (const auto& I : s->integrals) basis.push_back(I.I);
    Expr I3 = parse("(x^2 + 2*xdot)/(2*(x^2 + xdot)^2)");
    EXPECT_TRUE(functionally_dependent(I3, basis).zero());
  }
}

TEST(Noether, GaugeIsNeededForSomeNonautonomousIntegrals) {
  auto ode = nonautonomous();
  Expr L = parse("x^2*xdot^2/(2*t)");
  auto full = noether_solve(L, ode);
  NoetherOptions no_gauge;
  no_gauge.allow_gauge = false;
  auto restricted = noether_solve(L, ode, no_gauge);
  ASSERT_TRUE(full && restricted);
  EXPECT_EQ(full->dimension(), 5u);
  EXPECT_EQ(restricted->dimension(), 3u);
  auto span = [](const NoetherSolution& s) {
    std::vector<Expr> b;
    for (const auto& I : s.integrals) b.push_back(I.I);
    return b;
  };
  for (const char* fi : {"x^2*(x^2 - 2*x*xdot*t + xdot^2*t^2)", "x*(x - xdot*t)"}) {
    EXPECT_TRUE(span_coefficients(parse(fi), span(*full))) << fi;
    EXPECT_EQ(span_coefficients(parse(fi), span(*restricted)).code, "NotInSpan") << fi;
  }
}

TEST(Noether, MathewsLakshmananTimeTranslation) {
  auto ode = mathews_lakshmanan();
  Expr L = parse("(xdot^2 - a*x^2)/(2*(lam*x^2 + 1))", ode.params);
  auto s = noether_solve(L, ode);
  ASSERT_TRUE(s) << s.detail;
  ASSERT_EQ(s->dimension(), 1u);
  EXPECT_TRUE(proportional(s->integrals[0].I, parse("(a*x^2 + xdot^2)/(2*(lam*x^2 + 1))", ode.params)));
  auto E = energy_integral(L, ode);
  EXPECT_TRUE(E.conserved.zero());
}

TEST(Noether, LienardCountsDependOnTheAnsatz) {
  auto ode = lienard();
  Expr L1 = parse("1/(xdot + k*x^2/3 + 3*lam/k)", kLienardParams);
  Expr L2 = parse("sqrt(xdot + k*x^2/6 + 3*lam/(2*k))", kLienardParams);
  NoetherOptions poly;
  NoetherOptions with_exp;
  with_exp.exp_rates = {parse("sqrt(-lam)", kLienardParams)};
  with_exp.exp_span = 2;
  // k = 1, lam = -1, samples in [2, 3] keep both radicands positive
  std::map<std::string, double> pv{{"k", 1.0}, {"lam", -1.0}};
  auto p1 = noether_solve(L1, ode, poly);
  auto e1 = noether_solve(L1, ode, with_exp);
  auto e2 = noether_solve(L2, ode, with_exp);
  ASSERT_TRUE(p1 && e1 && e2) << e2.detail;
  EXPECT_EQ(p1->dimension(), 1u);
  EXPECT_EQ(e1->dimension(), 5u);
  EXPECT_EQ(e2->dimension(), 3u);
  for (const auto* s : {&*e1, &*e2}) {
    for (const auto& c : s->basis) EXPECT_TRUE(c.residual.zero());
    for (const auto& I : s->integrals) EXPECT_LT(max_flow_derivative(I.I, ode, pv, 2.0, 3.0), 1e-7) << to_string(I.I);
  }
}

TEST(Noether, RejectsUnsupportedShapes) {
  NoetherOptions o;
  o.degree = 9;
  EXPECT_EQ(noether_solve(parse("xdot^2/2"), SecondOrderODE::parse("0"), o).code, "UnsupportedShape");
  NoetherOptions r;
  r.exp_rates = {parse("x")};
  EXPECT_EQ(noether_solve(parse("xdot^2/2"), SecondOrderODE::parse("0"), r).code, "UnsupportedShape");
}

TEST(Noether, NonSymmetryIsRejected) {
  auto ode = SecondOrderODE::parse("-x");
  Expr L = parse("xdot^2/2 - x^2/2");
  EXPECT_TRUE(noether_integral(L, sym("1", "0", "dt"), Expr(0), ode));
  EXPECT_EQ(noether_integral(L, sym("0", "1", "dx"), Expr(0), ode).code, "NotASymmetry");
}

TEST(Numlab, Rk4IsFourthOrder) {
  auto osc = SecondOrderODE::parse("-x");
  const long double half_pi = std::numbers::pi_v<long double> / 2;
  auto tr = rk4(osc, {}, {0, 0, 1}, half_pi, 1e-3L);
  EXPECT_NEAR(static_cast<double>(tr.x.back()), 1.0, 1e-10);
  EXPECT_EQ(tr.t.back(), half_pi);
  // away from the peak of sin t the global error is cleanly O(h^4)
  long double e1 = std::fabs(rk4(osc, {}, {0, 0, 1}, 1, 1e-2L).x.back() - std::sin(1.0L));
  long double e2 = std::fabs(rk4(osc, {}, {0, 0, 1}, 1, 5e-3L).x.back() - std::sin(1.0L));
  EXPECT_GT(e1 / e2, 14.0L);
  EXPECT_LT(e1 / e2, 18.0L);
}

TEST(Numlab, DriftOfConservedAndControlQuantities) {
  auto ode = riccati();
  auto tr = rk4(ode, {}, {0, 1, 1}, 1, 1e-3L);
  ASSERT_TRUE(tr.complete());
  EXPECT_LT(drift(parse("(x^2 + 2*xdot)/(2*(x^2 + xdot)^2)"), tr), 1e-7L);
  EXPECT_GT(drift(parse("x*xdot"), tr), 1e-3L);
}

TEST(Numlab, FaultStopsIntegration) {
  auto tr = rk4(nonautonomous(), {}, {0, 1, 1}, 1, 1e-3L);
  EXPECT_FALSE(tr.complete());
  EXPECT_THROW(rk4(nonautonomous(), {}, {1, 1, 1}, 0.5L, 1e-3L), std::invalid_argument);
}
