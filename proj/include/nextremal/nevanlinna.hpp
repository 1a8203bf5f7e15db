#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nextremal/complex.hpp"
#include "nextremal/moments.hpp"
#include "nextremal/precision.hpp"

namespace nextremal {

class DiscreteMeasure;

/// A real number or +infinity (the parameter t of mu_t, or F(s)).
struct ExtReal {
  Real value;
  bool infinite = false;

  ExtReal() = default;
  ExtReal(Real v) : value(std::move(v)) {}  // implicit: every Real is a finite ExtReal
  static ExtReal infinity(Bits bits) {
    ExtReal e(Real::infinity(bits));
    e.infinite = true;
    return e;
  }
  std::string to_string(int digits = 0) const { return infinite ? "inf" : value.to_string(digits); }
};

/// A(z), B(z), C(z), D(z) from the series
///   A = z sum q_k(0) q_k(z),       B = -1 + z sum q_k(0) p_k(z),
///   C = 1 + z sum p_k(0) q_k(z),   D = z sum p_k(0) p_k(z),
/// truncated at the stored recurrence length.
template <class T>
struct NevanlinnaQuadruple {
  T A, B, C, D;
  std::size_t terms_used = 0;
  /// Shared bound on the omitted tail of all four series.
  Real tail_bound;
  /// |z| sum |term| bound: the size the rounding error is relative to.
  Real magnitude;
  /// |AD - BC - 1|.
  Real identity_residual;
  /// True when the tail came from 1/n extrapolation rather than a
  /// geometric bound.
  bool extrapolated = false;
};

/// Throws InconclusiveError when the tail neither decays geometrically nor
/// extrapolates (typically a determinate problem) or AD - BC = 1 fails.
template <class T>
NevanlinnaQuadruple<T> nevanlinna_eval(const RecurrenceCoefficients& rc, const T& z, const PrecisionContext& ctx);

enum class Verdict { determinate, indeterminate, inconclusive };
enum class StieltjesClass { det_s, indet_s, not_stieltjes, not_applicable };

std::string to_string(Verdict v);
std::string to_string(StieltjesClass c);

/// Ratio threshold and fitting window of the determinacy test.
inline constexpr double kRatioThreshold = 0.95;
inline constexpr std::size_t kClassifyWindow = 16;

struct DeterminacyVerdict {
  Verdict verdict = Verdict::inconclusive;
  /// Partial sums of t_n = p_n(0)^2 + q_n(0)^2 over the fitting window.
  std::vector<Real> window_partial_sums;
  /// exp(slope) of the least-squares fit of log(t_{n-1} + t_n) against n.
  double ratio = 0.0;
  /// -slope of the fit of log t_n against log n.
  double power_exponent = 0.0;
  /// |ln ratio - ln threshold| / |ln threshold|.
  double margin = 0.0;
  std::size_t terms = 0;
  StieltjesClass stieltjes = StieltjesClass::not_applicable;
  std::string note;
};

/// Determinacy from the decay of t_n: geometric decay (ratio < 0.95) or a
/// summable power law (exponent >= 1.5) means indeterminate; growth
/// (ratio >= 1) or a non-summable power law (exponent <= 1) means
/// determinate; anything else is inconclusive. Never throws.
DeterminacyVerdict classify(const RecurrenceCoefficients& rc, const PrecisionContext& ctx);

struct StieltjesClassification {
  /// Estimate of lim p_n(0)/q_n(0); zero for det(S).
  Real alpha;
  /// -1/alpha, or infinity when alpha == 0.
  ExtReal F;
  bool converged = false;
  Real error_bound;
};

StieltjesClassification friedrichs_parameter(const RecurrenceCoefficients& rc, const PrecisionContext& ctx);

struct SupportScan {
  std::vector<Real> zeros;
  /// Sign changes where |B + tD| was within its noise level.
  std::vector<std::pair<Real, Real>> inconclusive;
};

/// Real zeros of B + tD (of D for t = inf) in [lo, hi]. With a geometric
/// factor the positive and negative half-lines are sampled on geometric
/// grids; otherwise the grid puts 8 points between consecutive zeros of
/// p_N, N = rc.length().
SupportScan nextremal_support(const RecurrenceCoefficients& rc, const ExtReal& t, const Real& lo, const Real& hi,
                              const PrecisionContext& ctx, const std::optional<Real>& geometric_factor = {});

struct MassEstimate {
  Real mass;
  Real error;
  std::size_t terms = 0;
  bool extrapolated = false;
};

/// 1 / sum p_n(x0)^2. Throws DivergenceError when the terms do not decay
/// summably.
MassEstimate mass_at(const RecurrenceCoefficients& rc, const Real& x0, const PrecisionContext& ctx);

/// -B(x0)/D(x0), or infinity when D(x0) vanishes within its noise level.
/// Throws InconclusiveError when B(x0) vanishes too.
ExtReal parameter_of_point(const RecurrenceCoefficients& rc, const Real& x0, const PrecisionContext& ctx);

struct StieltjesCheck {
  /// sum m_i / (x_i - z)
  Complex measure_side;
  /// -(A + tC)/(B + tD), or -C/D for t = inf.
  Complex nevanlinna_side;
  Real residual;
  /// Truncation of both sides: series tail plus tail_mass_bound / |Im z|.
  Real tail_bound;
};

StieltjesCheck stieltjes_transform_check(const RecurrenceCoefficients& rc, const ExtReal& t, const Complex& z,
                                         const DiscreteMeasure& measure, const PrecisionContext& ctx);

}  // namespace nextremal
