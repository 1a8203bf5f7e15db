#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "nextremal/complex.hpp"
#include "nextremal/precision.hpp"

namespace nextremal {

enum class MomentSource { closed_form, from_measure, transformed };

std::string to_string(MomentSource source);

/// Produces s_0..s_{count-1} at the given precision. Lets the precision
/// ladder recompute inputs instead of padding rounded values with zeros.
using MomentGenerator = std::function<std::vector<Real>(std::size_t count, Bits bits)>;

class MomentSequence {
 public:
  MomentSequence(std::vector<Real> values, MomentSource source);
  MomentSequence(MomentGenerator generator, std::size_t count, Bits bits, MomentSource source);

  std::size_t size() const { return values_.size(); }
  const Real& operator[](std::size_t n) const { return values_.at(n); }
  const std::vector<Real>& values() const { return values_; }
  MomentSource source() const { return source_; }
  /// s_0 == 1 exactly.
  bool normalized() const { return !values_.empty() && values_.front() == 1; }
  bool regenerable() const { return static_cast<bool>(generator_); }
  const MomentGenerator& generator() const { return generator_; }

  /// The first `count` moments at `bits`: regenerated when a generator is
  /// attached, otherwise the stored values (throws LengthError if short).
  std::vector<Real> values_at(std::size_t count, Bits bits) const;

 private:
  std::vector<Real> values_;
  MomentSource source_;
  MomentGenerator generator_;
};

/// (s_n / s_0). Throws DomainError when s_0 <= 0.
MomentSequence normalize(const MomentSequence& s);

struct HankelCheck {
  bool positive_definite = false;
  Bits bits_used = 0;
  /// First pivot that was non-positive or below tolerance; m+1 if none.
  std::size_t failing_index = 0;
  /// log2 of the smallest pivot relative to its diagonal entry.
  double min_pivot_log2 = 0.0;
};

/// Cholesky test of the (m+1)x(m+1) Hankel matrix (s_{j+k}). A pivot below
/// 2^{-bits/2} of its diagonal entry triggers a retry at doubled precision.
/// Returns false for a non-positive pivot at the ceiling and throws
/// InconclusiveError when pivots stay positive but marginal.
HankelCheck hankel_positive_definite(const MomentSequence& s, std::size_t m, const PrecisionContext& ctx);

/// Jacobi parameters a_n > 0, b_n of the three-term recurrence
/// x p_n = a_n p_{n+1} + b_n p_n + a_{n-1} p_{n-1}.
class RecurrenceCoefficients {
 public:
  RecurrenceCoefficients(std::vector<Real> a, std::vector<Real> b, double lost_bits = 0.0);

  std::size_t length() const { return a_.size(); }
  const Real& a(std::size_t n) const { return a_[n]; }
  const Real& b(std::size_t n) const { return b_[n]; }
  const std::vector<Real>& a() const { return a_; }
  const std::vector<Real>& b() const { return b_; }
  Bits bits() const { return bits_; }
  /// Bits of accuracy the Hankel factorization is estimated to have cost.
  double lost_bits() const { return lost_bits_; }
  /// First `n` coefficients.
  RecurrenceCoefficients truncated(std::size_t n) const;

 private:
  std::vector<Real> a_, b_;
  Bits bits_;
  double lost_bits_;
};

/// Hankel-Cholesky recovery of a_0..a_{n_max}, b_0..b_{n_max} from
/// s_0..s_{2 n_max + 2}. Climbs the precision ladder until every pivot
/// clears 2^{-bits/2} and the estimated loss leaves ctx.bits/2 bits intact.
RecurrenceCoefficients recurrence_from_moments(const MomentSequence& s, std::size_t n_max,
                                               const PrecisionContext& ctx);

template <class T>
struct PolynomialPair {
  std::vector<T> p;
  std::vector<T> q;
};

/// p_0..p_N and q_0..q_N at z by forward recurrence (p_0 = 1, q_0 = 0,
/// q_1 = 1/a_0). Throws LengthError when N > rc.length().
template <class T>
PolynomialPair<T> eval_pq(const RecurrenceCoefficients& rc, const T& z, std::size_t N);

/// (Jc)_n = a_{n-1} c_{n-1} + b_n c_n + a_n c_{n+1}. Trailing zeros of c are
/// ignored; throws LengthError when c reaches index rc.length()-1.
std::vector<Real> jacobi_apply(const RecurrenceCoefficients& rc, const std::vector<Real>& c);

/// <J^n e_0, e_0> for n < count.
std::vector<Real> moments_from_recurrence(const RecurrenceCoefficients& rc, std::size_t count);

/// JSON array of decimal strings with enough digits to round-trip.
std::string moments_to_json(const MomentSequence& s);
MomentSequence moments_from_json(std::string_view text, Bits bits);

}  // namespace nextremal
