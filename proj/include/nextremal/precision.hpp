#pragma once

#include <cstddef>

#include "nextremal/real.hpp"

namespace nextremal {

/// Working precision and truncation policy shared by every numerical routine.
///
/// `bits_ceiling` bounds the precision ladder: routines that detect loss of
/// accuracy retry at twice the precision until they reach it. `limit_tol` is
/// the acceptance threshold for limits that can only be reached by
/// extrapolation (algebraically convergent sums, ratio limits).
struct PrecisionContext {
  Bits bits = 256;
  std::size_t max_terms = 4096;
  double tail_tol = 1e-30;
  Bits bits_ceiling = 8192;
  double limit_tol = 1e-10;

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  PrecisionContext with_bits(Bits b) const {
    PrecisionContext c = *this;
    c.bits = b;
    if (c.bits_ceiling < b) c.bits_ceiling = b;
    return c;
  }

  /// tail_tol, but never tighter than what `bits` can resolve.
  Real tolerance() const;
};

}  // namespace nextremal
