#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "nextremal/complex.hpp"
#include "nextremal/precision.hpp"

namespace nextremal {

template <class T>
struct SummationResult {
  T value;
  std::size_t terms_used = 0;
  Real tail_bound;
  bool converged = false;
};

/// Sums term(0) + term(1) + ... with a geometric tail test.
///
/// The generator is called with strictly increasing indices starting at 0,
/// so stateful generators (term recurrences) are allowed. Once the last
/// three ratios between consecutive nonzero terms are all below some r < 1
/// the tail is bounded by |last|*r/(1-r). Three consecutive exact zeros end
/// the sum with tail 0. Never throws on non-convergence.
SummationResult<Real> sum_series(const std::function<Real(std::size_t)>& term,
                                 const PrecisionContext& ctx);
SummationResult<Complex> sum_series(const std::function<Complex(std::size_t)>& term,
                                    const PrecisionContext& ctx);

/// Extrapolated limit of a sequence with an error estimate.
struct LimitEstimate {
  Real value;
  Real error;
};

/// Polynomial extrapolation in h = 1/n to h = 0 (Neville scheme) for
/// sequences S_n = S + c1/n + c2/n^2 + ... The error is the difference
/// between the two highest tableau entries.
LimitEstimate richardson_limit(const std::vector<std::size_t>& ns, const std::vector<Real>& values);

/// Limit of partial sums, partial_sums[k] = sum of the first k terms.
/// Geometric tail when the last increments shrink by a factor < 0.9,
/// Richardson extrapolation in 1/n otherwise. error = +inf when neither
/// applies (too few sums).
LimitEstimate accelerated_limit(const std::vector<Real>& partial_sums);

}  // namespace nextremal
