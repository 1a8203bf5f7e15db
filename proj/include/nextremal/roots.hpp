#pragma once

#include <functional>

#include "nextremal/precision.hpp"

namespace nextremal {

/// Root of f inside [lo, hi] by the Illinois variant of regula falsi with a
/// bisection step whenever the bracket fails to halve. Stops once the
/// bracket width is at most 2^(8-bits) * max(1, |x|) or f(x) == 0.
/// Throws InvalidBracketError unless f(lo) and f(hi) have opposite signs
/// (an exact zero at an endpoint is returned as is).
Real bracketed_root(const std::function<Real(const Real&)>& f, const Real& lo, const Real& hi,
                    const PrecisionContext& ctx);

}  // namespace nextremal
