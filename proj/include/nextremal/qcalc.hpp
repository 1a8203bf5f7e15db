#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "nextremal/complex.hpp"
#include "nextremal/precision.hpp"
#include "nextremal/series.hpp"

namespace nextremal {

/// A base q with 0 < q < 1.
class QParameter {
 public:
  explicit QParameter(Real q);
  static QParameter parse(std::string_view text, Bits bits);

  const Real& value() const { return q_; }
  /// q widened (exactly) or rounded to `bits`.
  Real at(Bits bits) const { return q_.with_precision(bits); }
  /// log2(1/q) as a double, for sizing guard bits and term counts.
  double log2_inverse() const;

 private:
  Real q_;
};

/// Tag selecting the infinite product (z;q)_inf.
struct InfiniteOrder {};
inline constexpr InfiniteOrder infinite_order{};

/// (z;q)_n = prod_{k<n} (1 - z q^k).
Real qpochhammer(const Real& z, const QParameter& q, std::size_t n);
Complex qpochhammer(const Complex& z, const QParameter& q, std::size_t n);
/// Truncated once |z| q^k drops below 2^-bits of the working precision
/// (the precision of z).
Real qpochhammer(const Real& z, const QParameter& q, InfiniteOrder);
Complex qpochhammer(const Complex& z, const QParameter& q, InfiniteOrder);

/// Gaussian binomial [n over k]_q via prod_{j=1}^k (1-q^{n-k+j})/(1-q^j),
/// at the precision of q. Throws DomainError unless 0 <= k <= n.
Real gauss_binomial(long n, long k, const QParameter& q);

/// Ramanujan's entire function sum_k (-1)^k q^{k^2} x^k / (q;q)_k.
/// Internally adds guard bits for the cancellation at large |x|; the value
/// is returned at ctx.bits.
SummationResult<Real> ramanujan_phi(const Real& x, const QParameter& q, const PrecisionContext& ctx);

/// Bits lost to cancellation when summing the Phi series at |x|.
Bits phi_guard_bits(const Real& x, const QParameter& q);

/// The first zeros of Phi in increasing order.
struct PhiZeroTable {
  QParameter q;
  std::vector<Real> zeros;
  Bits bits = 0;

  std::size_t count() const { return zeros.size(); }
};

/// Scans a geometric grid with factor q^(-1/4) upward from (1-q)/q, below
/// which Phi has no zeros, and refines each sign change with
/// bracketed_root. Throws InconclusiveError if a zero cannot be found or
/// the separation xi_{n+1}/xi_n > q^-2 fails.
PhiZeroTable phi_zeros(const QParameter& q, std::size_t count, const PrecisionContext& ctx);

}  // namespace nextremal
