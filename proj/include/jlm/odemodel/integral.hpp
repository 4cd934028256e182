#pragma once

#include <string>

#include "jlm/odemodel/ode.hpp"

namespace jlm {

enum class IntegralOrigin { Noether, Ratio, Energy, UserSupplied };

inline const char* origin_name(IntegralOrigin o) {
  switch (o) {
    case IntegralOrigin::Noether: return "noether";
    case IntegralOrigin::Ratio: return "ratio";
    case IntegralOrigin::Energy: return "energy";
    case IntegralOrigin::UserSupplied: return "user";
  }
  return "user";
}

struct FirstIntegral {
  Expr I;
  IntegralOrigin origin = IntegralOrigin::UserSupplied;
  std::string label;  // symmetry/gauge or source description
  ZeroVerdict conserved;
};

/// Zero test of the flow derivative of I.
inline ZeroVerdict conservation_check(const Expr& I, const SecondOrderODE& ode) {
  return is_zero(total_derivative(I, ode.F));
}

inline FirstIntegral make_integral(const Expr& I, const SecondOrderODE& ode, IntegralOrigin origin,
                                   std::string label = {}) {
  return {I, origin, std::move(label), conservation_check(I, ode)};
}

}  // namespace jlm
