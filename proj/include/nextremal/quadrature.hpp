#pragma once

#include <functional>
#include <optional>

#include "nextremal/precision.hpp"

namespace nextremal {

/// How to map an integral with an infinite upper limit to a finite-decay
/// trapezoid sum.
enum class Substitution {
  /// x = a + exp(pi/2 sinh t).
  exp_sinh,
  /// x = exp(u) on (0, inf), then u = center + scale * sinh(pi/2 sinh t).
  /// Suited to log-normal-like integrands; requires a == 0.
  log,
};

struct QuadratureHint {
  Substitution substitution = Substitution::exp_sinh;
  double center = 0.0;
  double scale = 1.0;
};

struct QuadratureResult {
  Real value;
  Real error_estimate;
  int levels = 0;
  /// False when halving the step stopped reducing the difference below
  /// tail_tol * |value| before the level cap: the value is inconclusive.
  bool converged = false;
};

/// Double-exponential quadrature of f over [a, b]; b == nullopt means +inf.
QuadratureResult quadrature(const std::function<Real(const Real&)>& f, const Real& a,
                            const std::optional<Real>& b, const PrecisionContext& ctx,
                            const QuadratureHint& hint = {});

}  // namespace nextremal
