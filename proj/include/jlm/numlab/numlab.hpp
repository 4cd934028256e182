#pragma once

// Numeric cross-checks: fixed-step RK4 on (x' = v, v' = F) and the relative
// drift of a candidate first integral along the samples. Arithmetic is in
// long double so that fourth-order convergence stays visible above rounding.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "jlm/odemodel/ode.hpp"

namespace jlm {

using NumReal = long double;
using ParamValues = std::map<std::string, NumReal>;

struct InitialState {
  NumReal t0 = 0, x0 = 0, v0 = 0;
};

struct Trajectory {
  std::vector<NumReal> t, x, v;
  NumReal h = 0;
  ParamValues params;
  std::string fault;  // non-empty when integration stopped early

  bool complete() const { return fault.empty(); }
  std::size_t size() const { return t.size(); }
};

namespace detail {

inline NumReal eval_at(const Expr& e, const ParamValues& params, NumReal t, NumReal x, NumReal v) {
  ParamValues b = params;
  b[names::t] = t;
  b[names::x] = x;
  b[names::v] = v;
  NumReal r = eval_num<NumReal>(e, b);
  if (!std::isfinite(r)) throw EvaluationFault("non-finite value");
  return r;
}

}  // namespace detail

inline Trajectory rk4(const SecondOrderODE& ode, const ParamValues& params, InitialState ic, NumReal t_end, NumReal h) {
  if (!(h > 0) || !(t_end > ic.t0)) throw std::invalid_argument("rk4: need h > 0 and t_end > t0");
  // the step is shrunk slightly so that a whole number of steps ends at t_end
  auto steps = static_cast<std::size_t>(std::max<long long>(1, std::llround((t_end - ic.t0) / h)));
  h = (t_end - ic.t0) / static_cast<NumReal>(steps);
  Trajectory tr;
  tr.h = h;
  tr.params = params;
  NumReal t = ic.t0, x = ic.x0, v = ic.v0;
  auto F = [&](NumReal tt, NumReal xx, NumReal vv) { return detail::eval_at(ode.F, params, tt, xx, vv); };
  tr.t.push_back(t);
  tr.x.push_back(x);
  tr.v.push_back(v);
  for (std::size_t n = 0; n < steps; ++n) {
    try {
      NumReal k1x = v, k1v = F(t, x, v);
      NumReal k2x = v + h / 2 * k1v, k2v = F(t + h / 2, x + h / 2 * k1x, v + h / 2 * k1v);
      NumReal k3x = v + h / 2 * k2v, k3v = F(t + h / 2, x + h / 2 * k2x, v + h / 2 * k2v);
      NumReal k4x = v + h * k3v, k4v = F(t + h, x + h * k3x, v + h * k3v);
      x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
      v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    } catch (const EvaluationFault& e) {
      tr.fault = "step " + std::to_string(n) + " at t = " + std::to_string(static_cast<double>(t)) + ": " + e.what();
      return tr;
    }
    t = n + 1 == steps ? t_end : ic.t0 + static_cast<NumReal>(n + 1) * h;
    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.v.push_back(v);
  }
  return tr;
}

/// max_i |I_i - I_0| / max(1, |I_0|); throws EvaluationFault.
inline NumReal drift(const Expr& I, const Trajectory& tr) {
  if (tr.size() == 0) return 0;
  NumReal I0 = detail::eval_at(I, tr.params, tr.t[0], tr.x[0], tr.v[0]);
  NumReal worst = 0;
  for (std::size_t i = 1; i < tr.size(); ++i) {
    worst = std::max(worst, std::fabs(detail::eval_at(I, tr.params, tr.t[i], tr.x[i], tr.v[i]) - I0));
  }
  return worst / std::max<NumReal>(1, std::fabs(I0));
}

}  // namespace jlm
