#pragma once

// Homogeneous linear systems: a fast pass modulo a prime finds the rank and
// the support of the nullspace, then an exact pass over Q(parameters) on the
// support columns produces the basis.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jlm/symcore/normal_form.hpp"
#include "jlm/symcore/printer.hpp"

namespace jlm {

namespace modp {

inline std::optional<std::uint64_t> sqrt(std::uint64_t a) {
  if (a == 0) return 0;
  // every modulus in use is 3 mod 4
  std::uint64_t r = pow(a, (modulus() + 1) / 4);
  if (mul(r, r) != a) return std::nullopt;
  return r;
}

/// Largest prime below p that is 3 mod 4 (so square roots are one power).
inline std::uint64_t prime_below(std::uint64_t p) {
  std::uint64_t q = p - 1;
  q -= (q + 1) % 4;
  for (;; q -= 4) {
    mpz_class z(static_cast<unsigned long>(q));
    if (mpz_probab_prime_p(z.get_mpz_t(), 30)) return q;
  }
}

/// Nullspace basis (reduced: one free column set to 1 per vector) of a dense
/// matrix over F_p. `rows` is consumed.
inline std::vector<std::vector<std::uint64_t>> nullspace(std::vector<std::vector<std::uint64_t>> rows,
                                                         std::size_t ncols) {
  std::vector<int> pivot_of_col(ncols, -1);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < ncols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    auto& pr = rows[rank];
    std::uint64_t inv_p = inv(pr[c]);
    for (std::size_t k = c; k < ncols; ++k) pr[k] = mul(pr[k], inv_p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      std::uint64_t f = rows[r][c];
      auto& rr = rows[r];
      for (std::size_t k = c; k < ncols; ++k) {
        if (pr[k]) rr[k] = sub(rr[k], mul(f, pr[k]));
      }
    }
    pivot_of_col[c] = static_cast<int>(rank);
    ++rank;
  }
  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (pivot_of_col[f] >= 0) continue;
    std::vector<std::uint64_t> v(ncols, 0);
    v[f] = 1;
    for (std::size_t c = 0; c < ncols; ++c) {
      if (pivot_of_col[c] >= 0) v[c] = sub(0, rows[static_cast<std::size_t>(pivot_of_col[c])][f]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace modp

/// Sparse row over Q(parameters): column -> entry.
using ExactRow = std::map<std::size_t, RatFun>;

struct ExactNullspace {
  std::vector<std::vector<RatFun>> basis;
  std::vector<std::string> assumptions;  // non-constant pivots assumed nonzero
};

/// Exact nullspace of the rows restricted to `ncols` columns. When
/// `target_rank` is given, elimination stops once that rank is reached (the
/// caller re-verifies every basis vector).
inline ExactNullspace exact_nullspace(const Algebra& alg, const std::vector<ExactRow>& rows, std::size_t ncols,
                                      std::optional<std::size_t> target_rank = std::nullopt) {
  std::vector<std::pair<std::size_t, ExactRow>> pivots;  // pivot column, row with unit pivot
  ExactNullspace out;
  for (const auto& input : rows) {
    if (target_rank && pivots.size() >= *target_rank) break;
    ExactRow row = input;
    for (const auto& [pc, prow] : pivots) {
      auto it = row.find(pc);
      if (it == row.end()) continue;
      RatFun f = it->second;
      for (const auto& [c, e] : prow) {
        RatFun nv = alg.sub(row.count(c) ? row[c] : RatFun{}, alg.mul(f, e));
        if (nv.is_zero()) row.erase(c); else row[c] = nv;
      }
    }
    if (row.empty()) continue;
    // prefer a constant pivot to avoid parameter assumptions
    std::size_t pc = row.begin()->first;
    for (const auto& [c, e] : row) {
      if (e.is_constant()) {
        pc = c;
        break;
      }
    }
    RatFun p = row[pc];
    if (!p.is_constant()) out.assumptions.push_back(to_string(alg.to_expr(p)) + " != 0");
    RatFun ip = alg.inv(p);
    for (auto& [c, e] : row) e = alg.mul(e, ip);
    // keep previous pivot rows reduced in the new pivot column
    for (auto& [qc, qrow] : pivots) {
      auto it = qrow.find(pc);
      if (it == qrow.end()) continue;
      RatFun f = it->second;
      for (const auto& [c, e] : row) {
        RatFun nv = alg.sub(qrow.count(c) ? qrow[c] : RatFun{}, alg.mul(f, e));
        if (nv.is_zero()) qrow.erase(c); else qrow[c] = nv;
      }
    }
    pivots.emplace_back(pc, std::move(row));
  }
  std::vector<int> pivot_row(ncols, -1);
  for (std::size_t i = 0; i < pivots.size(); ++i) pivot_row[pivots[i].first] = static_cast<int>(i);
  for (std::size_t f = 0; f < ncols; ++f) {
    if (pivot_row[f] >= 0) continue;
    std::vector<RatFun> v(ncols);
    v[f] = alg.constant(1);
    for (std::size_t c = 0; c < ncols; ++c) {
      if (pivot_row[c] < 0) continue;
      const auto& prow = pivots[static_cast<std::size_t>(pivot_row[c])].second;
      auto it = prow.find(f);
      if (it != prow.end()) v[c] = alg.neg(it->second);
    }
    out.basis.push_back(std::move(v));
  }
  return out;
}

/// Variables that belong to the coefficient field: declared parameters and
/// kernels built from parameters only.
inline std::vector<bool> parameter_mask(const Algebra& alg) {
  const auto& vars = alg.vars();
  std::vector<bool> mask(vars.size(), false);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (alg.is_symbol(i)) {
      mask[i] = alg.is_parameter(i);
      continue;
    }
    const Kernel* k = alg.kernel_of(i);
    auto only_params = [&](const Poly& p) {
      for (std::size_t j = 0; j < i; ++j) {
        if (p.uses(j) && !mask[j]) return false;
      }
      return true;
    };
    if (k->kind == KernelKind::Radical) {
      mask[i] = only_params(k->base);
    } else {
      mask[i] = only_params(k->arg.num) && only_params(k->arg.den);
    }
  }
  return mask;
}

/// Collects sum_col c_col * shift_col * poly_col = 0 as an identity in the
/// non-parameter variables. Returns one ExactRow per structural monomial.
inline std::vector<ExactRow> collect_rows(const Algebra& alg, const std::vector<Poly>& columns,
                                          const std::vector<Monomial>& shifts) {
  auto mask = parameter_mask(alg);
  std::size_t nv = alg.vars().size();
  std::map<Monomial, std::map<std::size_t, std::vector<Poly::Term>>> acc;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (const auto& t : columns[c].terms()) {
      Monomial structural, param;
      for (std::size_t i = 0; i < nv; ++i) (mask[i] ? param : structural)[i] = t.m[i];
      acc[structural + shifts[c]][c].push_back({param, t.c});
    }
  }
  std::vector<ExactRow> rows;
  rows.reserve(acc.size());
  for (auto& [mono, entries] : acc) {
    ExactRow row;
    for (auto& [c, terms] : entries) {
      Poly p = Poly::from_terms(std::move(terms));
      if (!p.is_zero()) row[c] = alg.normalize(p, Poly::constant(1));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  // short rows first: cheaper pivots
  std::stable_sort(rows.begin(), rows.end(), [](const ExactRow& a, const ExactRow& b) { return a.size() < b.size(); });
  return rows;
}

/// Assigns values mod p to every variable: parameters from `param_rng`,
/// structural variables from `rng`; square-root kernels are consistent with
/// their bases. Returns nullopt when a base is not a square (caller retries).
class ModularPoint {
 public:
  explicit ModularPoint(const Algebra& alg) : alg_(alg), mask_(parameter_mask(alg)) {}

  bool draw_parameters(std::mt19937_64& rng) {
    params_.assign(alg_.vars().size(), 0);
    return fill(rng, true, params_);
  }

  std::optional<std::vector<std::uint64_t>> draw(std::mt19937_64& rng) const {
    std::vector<std::uint64_t> vals = params_;
    if (!const_cast<ModularPoint*>(this)->fill(rng, false, vals)) return std::nullopt;
    return vals;
  }

  bool supported() const {
    for (std::size_t i = 0; i < alg_.vars().size(); ++i) {
      const Kernel* k = alg_.kernel_of(i);
      if (k && k->kind == KernelKind::Radical && k->q != 2) return false;
    }
    return true;
  }

 private:
  bool fill(std::mt19937_64& rng, bool parameters, std::vector<std::uint64_t>& vals) {
    std::uniform_int_distribution<std::uint64_t> dist(1, modp::modulus() - 1);
    for (std::size_t i = 0; i < alg_.vars().size(); ++i) {
      if (mask_[i] != parameters) continue;
      const Kernel* k = alg_.kernel_of(i);
      if (k && k->kind == KernelKind::Radical) {
        auto r = modp::sqrt(k->base.evaluate_mod(vals));
        if (!r) return false;
        vals[i] = *r;
      } else {
        vals[i] = dist(rng);
      }
    }
    return true;
  }

  const Algebra& alg_;
  std::vector<bool> mask_;
  std::vector<std::uint64_t> params_;
};

}  // namespace jlm
