#pragma once

// Noether point symmetries: invariance residual, conserved quantity, and a
// linear search over a Laurent ansatz in (t, x), optionally times exp(m r t)
// for declared rates r.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jlm/lagrangian/lagrangian.hpp"
#include "jlm/symcore/linsolve.hpp"

namespace jlm {

struct NoetherCandidate {
  PointSymmetry sym;
  Expr gauge_g;
  ZeroVerdict residual;
};

/// tau L_t + xi L_x + eta L_v + L D tau - D g, eta = D xi - v D tau.
inline Expr noether_residual_expr(const Expr& L, const PointSymmetry& s, const Expr& g) {
  Expr Dtau = point_derivative(s.tau);
  Expr eta = point_derivative(s.xi) - V() * Dtau;
  return s.tau * diff(L, names::t) + s.xi * diff(L, names::x) + eta * diff(L, names::v) + L * Dtau -
         point_derivative(g);
}

inline ZeroVerdict noether_residual(const Expr& L, const PointSymmetry& s, const Expr& g) {
  return is_zero(noether_residual_expr(L, s, g));
}

/// tau L + (xi - tau v) L_v - g; refused unless the residual is Zero.
inline Outcome<FirstIntegral> noether_integral(const Expr& L, const PointSymmetry& s, const Expr& g,
                                               const SecondOrderODE& ode) {
  using R = Outcome<FirstIntegral>;
  ZeroVerdict r = noether_residual(L, s, g);
  if (!r.zero()) {
    return R::fail("NotASymmetry", std::string("Noether residual is ") + verdict_name(r.kind) + ": " + r.witness);
  }
  Expr I = simplify(s.tau * L + (s.xi - s.tau * V()) * diff(L, names::v) - g);
  std::string label = "tau=" + to_string(s.tau) + ", xi=" + to_string(s.xi) + ", g=" + to_string(g);
  return R::ok(make_integral(I, ode, IntegralOrigin::Noether, label));
}

/// Time-translation integral of an autonomous Lagrangian: v L_v - L.
inline FirstIntegral energy_integral(const Expr& L, const SecondOrderODE& ode) {
  return make_integral(simplify(V() * diff(L, names::v) - L), ode, IntegralOrigin::Energy, "v*L_v - L");
}

/// The closed-form integral printed alongside the u^(2-1/alpha) Lagrangian,
/// u^(1-1/alpha) (alpha f v - f v - g) / (alpha^2 f^2), kept verbatim for auditing.
inline Expr printed_alpha_integral(const LienardForm& lf, const AlphaRoute& ar) {
  const Expr& a = ar.alpha;
  return pow(ar.u, Expr(1) - Expr(1) / a) * (a * lf.f * V() - lf.f * V() - lf.g) / (a * a * lf.f * lf.f);
}

struct NoetherOptions {
  int degree = 4;                 // box -degree <= i, j <= degree for t^i x^j
  bool allow_gauge = true;        // false: g = 0
  std::vector<Expr> exp_rates;    // parameter-only r: ansatz also carries exp(m r t)
  int exp_span = 1;               // |m| <= exp_span
  std::uint64_t seed = kDefaultSeed;
};

struct NoetherSolution {
  std::vector<NoetherCandidate> basis;
  std::vector<FirstIntegral> integrals;
  std::vector<std::string> assumptions;  // parameter pivots assumed nonzero
  std::size_t unknowns = 0;
  std::size_t dimension() const { return basis.size(); }
};

namespace detail {

struct AnsatzColumn {
  int kind;  // 0 tau, 1 xi, 2 g
  int i, j;
  std::vector<int> m;  // exponent of exp(r t) per rate
};

inline Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_constant()) return b;
  if (b.is_constant()) return a;
  return a * exact(b, gcd(a, b));
}

inline Expr ansatz_monomial(const AnsatzColumn& c, const std::vector<Expr>& rates) {
  Expr e(1);
  if (c.i) e = e * make_pow(T(), Rational(c.i));
  if (c.j) e = e * make_pow(X(), Rational(c.j));
  for (std::size_t r = 0; r < rates.size(); ++r) {
    if (c.m[r]) e = e * exp(Expr(c.m[r]) * rates[r] * T());
  }
  return e;
}

}  // namespace detail

inline Outcome<NoetherSolution> noether_solve(const Expr& L, const SecondOrderODE& ode, const NoetherOptions& opt = {}) {
  using R = Outcome<NoetherSolution>;
  if (opt.degree < 0 || opt.degree > 6) return R::fail("UnsupportedShape", "degree must be in [0, 6]");
  Algebra alg;
  std::size_t vt = alg.symbol_var(names::t), vx = alg.symbol_var(names::x), vv = alg.symbol_var(names::v);
  for (const auto& p : ode.params) alg.symbol_var(p);
  RatFun rl, rt, rx, rv;
  std::vector<RatFun> rates;
  std::vector<std::size_t> exp_vars;
  try {
    rl = alg.from_expr(L);
    rt = alg.from_expr(diff(L, names::t));
    rx = alg.from_expr(diff(L, names::x));
    rv = alg.from_expr(diff(L, names::v));
    for (const auto& r : opt.exp_rates) {
      rates.push_back(alg.from_expr(r));
      RatFun e = alg.from_expr(exp(r * T()));
      if (!e.den.is_constant() || !e.num.is_monomial() || e.num.size() != 1) {
        return R::fail("UnsupportedShape", "exp(" + to_string(r) + "*t) is not a single kernel");
      }
      const auto& mono = e.num.terms().front().m;
      std::optional<std::size_t> var;
      for (std::size_t i = 0; i < alg.vars().size(); ++i) {
        if (mono[i] == 1 && !var) var = i;
        else if (mono[i] != 0) var.reset(), i = alg.vars().size();
      }
      if (!var || !alg.kernel_of(*var)) {
        return R::fail("UnsupportedShape", "exp(" + to_string(r) + "*t) is not a single kernel");
      }
      exp_vars.push_back(*var);
    }
  } catch (const std::exception& e) {
    return R::fail("UnsupportedShape", std::string("normal form failed: ") + e.what());
  }
  auto mask = parameter_mask(alg);
  for (std::size_t r = 0; r < rates.size(); ++r) {
    bool ok = rates[r].den.is_constant();
    for (std::size_t i = 0; i < alg.vars().size(); ++i) {
      if (rates[r].num.uses(i) && !mask[i]) ok = false;
    }
    if (!ok) return R::fail("UnsupportedShape", "exp rate must be a parameter polynomial: " + to_string(opt.exp_rates[r]));
  }
  ModularPoint sampler(alg);
  if (!sampler.supported()) return R::fail("UnsupportedShape", "radicals of order > 2 in the Lagrangian");

  // common denominator Q; numerators of L, L_t, L_x, L_v over Q
  Poly Q = detail::lcm(detail::lcm(rl.den, rt.den), detail::lcm(rx.den, rv.den));
  auto over_Q = [&](const RatFun& f) { return alg.reduce(f.num * detail::exact(Q, f.den)); };
  Poly A = over_Q(rl), B = over_Q(rt), C = over_Q(rx), Vn = over_Q(rv);
  Poly tx = Poly::variable(vt) * Poly::variable(vx);
  Poly vtp = Poly::variable(vv) * Poly::variable(vt);
  Poly x1 = Poly::variable(vx);

  // per kind: column = base + i*(x mult) + j*(v t mult) + sum_r m_r*(r t x mult)
  struct KindPolys {
    Poly base, xm, vm;
    std::vector<Poly> rm;
  };
  std::vector<KindPolys> kinds(3);
  Poly mults[3] = {alg.reduce(A - Poly::variable(vv) * Vn), Vn, -Q};
  Poly bases[3] = {alg.reduce(tx * B), alg.reduce(tx * C), Poly()};
  for (int k = 0; k < 3; ++k) {
    kinds[k].base = bases[k];
    kinds[k].xm = alg.reduce(x1 * mults[k]);
    kinds[k].vm = alg.reduce(vtp * mults[k]);
    for (const auto& r : rates) {
      kinds[k].rm.push_back(alg.reduce(r.num.scaled(1 / r.den.constant_value()) * tx * mults[k]));
    }
  }

  std::vector<detail::AnsatzColumn> cols;
  std::vector<std::vector<int>> ms{{}};
  for (std::size_t r = 0; r < rates.size(); ++r) {
    std::vector<std::vector<int>> next;
    for (const auto& m : ms) {
      for (int e = -opt.exp_span; e <= opt.exp_span; ++e) {
        auto mm = m;
        mm.push_back(e);
        next.push_back(mm);
      }
    }
    ms = next;
  }
  int N = opt.degree;
  for (int kind = 0; kind < 3; ++kind) {
    if (kind == 2 && !opt.allow_gauge) continue;
    for (const auto& m : ms) {
      for (int i = -N; i <= N; ++i) {
        for (int j = -N; j <= N; ++j) {
          bool trivial = kind == 2 && i == 0 && j == 0 && std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
          if (!trivial) cols.push_back({kind, i, j, m});
        }
      }
    }
  }
  std::size_t nc = cols.size();

  // columns with different exp(m r t) factors never share a row unless the
  // Lagrangian itself carries those kernels: solve such blocks separately
  bool separable = true;
  for (const auto& k : kinds) {
    for (std::size_t e : exp_vars) {
      separable = separable && !k.base.uses(e) && !k.xm.uses(e) && !k.vm.uses(e);
      for (const auto& p : k.rm) separable = separable && !p.uses(e);
    }
  }
  std::map<std::vector<int>, std::vector<std::size_t>> blocks;
  for (std::size_t c = 0; c < nc; ++c) blocks[separable ? cols[c].m : std::vector<int>{}].push_back(c);

  std::mt19937_64 rng(opt.seed);
  // a constant radicand such as 3 may be a non-residue mod the default prime:
  // step down through primes until every radical has a value
  bool params_ok = false;
  std::optional<modp::ScopedPrime> field;
  std::uint64_t prime = modp::kPrime;
  for (int attempt = 0; attempt < 16 && !params_ok; ++attempt) {
    if (attempt) prime = modp::prime_below(prime);
    field.emplace(prime);
    for (int tries = 0; tries < 64 && !params_ok; ++tries) params_ok = sampler.draw_parameters(rng);
  }
  if (!params_ok) return R::fail("UnsupportedShape", "no parameter point with square radicands");
  auto lift = [](int n) { return n >= 0 ? static_cast<std::uint64_t>(n) : modp::modulus() - static_cast<std::uint64_t>(-n); };
  auto ipow = [](std::uint64_t b, int e) {
    return e >= 0 ? modp::pow(b, static_cast<std::uint64_t>(e)) : modp::pow(modp::inv(b), static_cast<std::uint64_t>(-e));
  };

  NoetherSolution out;
  out.unknowns = nc;
  std::vector<std::pair<std::vector<std::size_t>, std::vector<RatFun>>> found;  // support, coefficients
  for (const auto& [key, block] : blocks) {
    // modular pass: one row per random structural point
    std::size_t bc = block.size();
    std::vector<std::vector<std::uint64_t>> mrows;
    std::size_t attempts = 0;
    while (mrows.size() < bc + 12) {
      if (++attempts > 8 * (bc + 12)) return R::fail("UnsupportedShape", "cannot sample consistent radical values");
      auto pt = sampler.draw(rng);
      if (!pt) continue;
      const auto& P = *pt;
      struct Vals {
        std::uint64_t base, xm, vm;
        std::vector<std::uint64_t> rm;
      };
      Vals kv[3];
      for (int k = 0; k < 3; ++k) {
        kv[k].base = kinds[k].base.evaluate_mod(P);
        kv[k].xm = kinds[k].xm.evaluate_mod(P);
        kv[k].vm = kinds[k].vm.evaluate_mod(P);
        for (const auto& p : kinds[k].rm) kv[k].rm.push_back(p.evaluate_mod(P));
      }
      std::vector<std::uint64_t> row(bc);
      for (std::size_t b = 0; b < bc; ++b) {
        const auto& col = cols[block[b]];
        const auto& k = kv[col.kind];
        std::uint64_t val = modp::add(k.base, modp::add(modp::mul(lift(col.i), k.xm), modp::mul(lift(col.j), k.vm)));
        std::uint64_t mu = modp::mul(ipow(P[vt], col.i), ipow(P[vx], col.j));
        for (std::size_t r = 0; r < rates.size(); ++r) {
          val = modp::add(val, modp::mul(lift(col.m[r]), k.rm[r]));
          mu = modp::mul(mu, ipow(P[exp_vars[r]], col.m[r]));
        }
        row[b] = modp::mul(val, mu);
      }
      mrows.push_back(std::move(row));
    }
    auto mbasis = modp::nullspace(std::move(mrows), bc);
    if (mbasis.empty()) continue;
    std::vector<std::size_t> support;
    for (std::size_t b = 0; b < bc; ++b) {
      for (const auto& v : mbasis) {
        if (v[b]) {
          support.push_back(block[b]);
          break;
        }
      }
    }

    // exact pass on the support columns
    std::vector<Poly> polys;
    std::vector<Monomial> shifts;
    for (std::size_t c : support) {
      const auto& col = cols[c];
      const auto& k = kinds[col.kind];
      Poly p = k.base + k.xm.scaled(col.i) + k.vm.scaled(col.j);
      Monomial sh;
      sh[vt] = static_cast<std::int16_t>(col.i - 1);
      sh[vx] = static_cast<std::int16_t>(col.j - 1);
      for (std::size_t r = 0; r < rates.size(); ++r) {
        p += k.rm[r].scaled(col.m[r]);
        sh[exp_vars[r]] = static_cast<std::int16_t>(col.m[r]);
      }
      polys.push_back(std::move(p));
      shifts.push_back(sh);
    }
    auto rows = collect_rows(alg, polys, shifts);
    auto ex = exact_nullspace(alg, rows, support.size(), support.size() - mbasis.size());
    for (auto& a : ex.assumptions) {
      if (std::find(out.assumptions.begin(), out.assumptions.end(), a) == out.assumptions.end()) out.assumptions.push_back(a);
    }
    if (ex.basis.size() != mbasis.size()) {
      out.assumptions.push_back("exact nullspace has dimension " + std::to_string(ex.basis.size()) +
                                ", modular pass found " + std::to_string(mbasis.size()));
    }
    for (auto& v : ex.basis) found.emplace_back(support, std::move(v));
  }

  for (std::size_t b = 0; b < found.size(); ++b) {
    const auto& [support, vec] = found[b];
    Poly den = Poly::constant(1);
    for (const auto& e : vec) {
      if (!e.is_zero()) den = detail::lcm(den, e.den);
    }
    Expr parts[3] = {Expr(0), Expr(0), Expr(0)};
    for (std::size_t s = 0; s < support.size(); ++s) {
      if (vec[s].is_zero()) continue;
      RatFun coef = alg.mul(vec[s], {den, Poly::constant(1)});
      const auto& col = cols[support[s]];
      parts[col.kind] = parts[col.kind] + alg.to_expr(coef) * detail::ansatz_monomial(col, opt.exp_rates);
    }
    NoetherCandidate cand;
    cand.sym = {simplify(parts[0]), simplify(parts[1]), "N" + std::to_string(b + 1)};
    cand.gauge_g = simplify(parts[2]);
    cand.residual = noether_residual(L, cand.sym, cand.gauge_g);
    if (cand.residual.zero()) {
      FirstIntegral I = *noether_integral(L, cand.sym, cand.gauge_g, ode);
      I.label = cand.sym.label + ": " + I.label;
      out.integrals.push_back(std::move(I));
    }
    out.basis.push_back(std::move(cand));
  }
  return R::ok(std::move(out));
}

/// Constants c_1..c_n, c_0 with target = sum c_i basis_i + c_0, if they exist
/// (over the parameter field).
inline Outcome<std::vector<Expr>> span_coefficients(const Expr& target, const std::vector<Expr>& basis,
                                                    const std::vector<std::string>& params = {}) {
  using R = Outcome<std::vector<Expr>>;
  Algebra alg;
  for (const auto& p : params) alg.symbol_var(p);
  std::vector<RatFun> fs;
  try {
    for (const auto& b : basis) fs.push_back(alg.from_expr(b));
    fs.push_back(alg.constant(1));
    fs.push_back(alg.from_expr(target));
  } catch (const std::exception& e) {
    return R::fail("UnsupportedShape", e.what());
  }
  Poly D = Poly::constant(1);
  for (const auto& f : fs) D = detail::lcm(D, f.den);
  std::vector<Poly> cols;
  for (const auto& f : fs) cols.push_back(alg.reduce(f.num * detail::exact(D, f.den)));
  auto rows = collect_rows(alg, cols, std::vector<Monomial>(cols.size()));
  auto ns = exact_nullspace(alg, rows, cols.size());
  std::size_t tc = cols.size() - 1;
  for (const auto& v : ns.basis) {
    if (v[tc].is_zero()) continue;
    RatFun s = alg.neg(alg.inv(v[tc]));
    std::vector<Expr> out;
    for (std::size_t i = 0; i < tc; ++i) out.push_back(alg.to_expr(alg.mul(v[i], s)));
    return R::ok(std::move(out));
  }
  return R::fail("NotInSpan", "no constant combination of the basis and 1 reproduces " + to_string(target));
}

inline Expr gradient_det(const Expr& a, const Expr& b, const Expr& c) {
  auto g = [](const Expr& e) {
    return std::array<Expr, 3>{diff(e, names::t), diff(e, names::x), diff(e, names::v)};
  };
  auto A = g(a), B = g(b), C = g(c);
  return A[0] * (B[1] * C[2] - B[2] * C[1]) - A[1] * (B[0] * C[2] - B[2] * C[0]) + A[2] * (B[0] * C[1] - B[1] * C[0]);
}

/// Zero when target is functionally dependent on two independent members of
/// basis (3x3 gradient determinant in t, x, v vanishes).
inline ZeroVerdict functionally_dependent(const Expr& target, const std::vector<Expr>& basis) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      Expr a = basis[i], b = basis[j];
      Expr minors[3] = {diff(a, names::x) * diff(b, names::v) - diff(a, names::v) * diff(b, names::x),
                        diff(a, names::t) * diff(b, names::v) - diff(a, names::v) * diff(b, names::t),
                        diff(a, names::t) * diff(b, names::x) - diff(a, names::x) * diff(b, names::t)};
      bool independent = false;
      for (const auto& m : minors) independent = independent || is_zero(m).nonzero();
      if (independent) return is_zero(gradient_det(target, a, b));
    }
  }
  return {ZeroVerdict::Unknown, "basis has no functionally independent pair"};
}

}  // namespace jlm
