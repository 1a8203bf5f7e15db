#include "nextremal/qcalc.hpp"

#include <cmath>
#include <string>

#include "nextremal/errors.hpp"
#include "nextremal/roots.hpp"

namespace nextremal {

QParameter::QParameter(Real q) : q_(std::move(q)) {
  if (!(q_ > 0) || !(q_ < 1)) throw DomainError("q must lie in (0, 1), got " + q_.to_string(17));
}

QParameter QParameter::parse(std::string_view text, Bits bits) { return QParameter(Real::parse(text, bits)); }

double QParameter::log2_inverse() const { return -std::log2(q_.to_double()); }

namespace {

template <class T>
T finite_product(const T& z, const QParameter& q, std::size_t n) {
  const Bits bits = std::max(z.precision(), q.value().precision());
  const Real qb = q.at(bits);
  T prod = lift<T>(Real(1, bits));
  T zq = z;  // z q^k
  for (std::size_t k = 0; k < n; ++k) {
    prod *= lift<T>(Real(1, bits)) - zq;
    zq *= qb;
  }
  return prod;
}

template <class T>
T infinite_product(const T& z, const QParameter& q) {
  const Bits bits = std::max(z.precision(), q.value().precision());
  const Real qb = q.at(bits);
  const Real eps = ldexp(Real(1, bits), -static_cast<long>(bits));
  T prod = lift<T>(Real(1, bits));
  T zq = z;
  // Once |z q^k| < eps every remaining factor rounds to 1 and the
  // remaining product differs from 1 by less than about 2 eps.
  while (!(abs(zq) < eps)) {
    prod *= lift<T>(Real(1, bits)) - zq;
    zq *= qb;
  }
  return prod;
}

}  // namespace

Real qpochhammer(const Real& z, const QParameter& q, std::size_t n) { return finite_product(z, q, n); }
Complex qpochhammer(const Complex& z, const QParameter& q, std::size_t n) { return finite_product(z, q, n); }
Real qpochhammer(const Real& z, const QParameter& q, InfiniteOrder) { return infinite_product(z, q); }
Complex qpochhammer(const Complex& z, const QParameter& q, InfiniteOrder) { return infinite_product(z, q); }

Real gauss_binomial(long n, long k, const QParameter& q) {
  if (k < 0 || k > n) {
    throw DomainError("gauss_binomial needs 0 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  const Real& qv = q.value();
  const Bits bits = qv.precision();
  if (2 * k > n) k = n - k;
  Real result(1, bits);
  for (long j = 1; j <= k; ++j) {
    result *= (1 - pow(qv, n - k + j)) / (1 - pow(qv, j));
  }
  return result;
}

Bits phi_guard_bits(const Real& x, const QParameter& q) {
  double lx = std::log2(std::fabs(x.to_double()));
  if (!(lx > 0) || !std::isfinite(lx)) return 16;
  // The largest term is about 2^{(log2|x|)^2 / (4 log2(1/q))} / (q;q)_inf.
  double peak = lx * lx / (4.0 * q.log2_inverse());
  return static_cast<Bits>(std::ceil(peak)) + 24;
}

SummationResult<Real> ramanujan_phi(const Real& x, const QParameter& q, const PrecisionContext& ctx) {
  const Bits work = ctx.bits + phi_guard_bits(x, q);
  const Real xw = x.with_precision(work);
  const Real qw = q.at(work);
  Real term(1, work);
  Real q_prev(1, work);  // q^{k-1}
  Real q_k(1, work);     // q^k
  auto next = [&](std::size_t k) -> Real {
    if (k > 0) {
      q_prev = q_k;
      q_k *= qw;
      term *= -xw;
      term *= q_prev * q_k;
      term /= 1 - q_k;
    }
    return term;
  };
  SummationResult<Real> wide = sum_series(next, ctx.with_bits(work));
  SummationResult<Real> out;
  out.value = wide.value.with_precision(ctx.bits);
  out.tail_bound = wide.tail_bound.with_precision(ctx.bits);
  out.terms_used = wide.terms_used;
  out.converged = wide.converged;
  return out;
}

PhiZeroTable phi_zeros(const QParameter& q, std::size_t count, const PrecisionContext& ctx) {
  if (count < 1) throw DomainError("phi_zeros needs count >= 1");
  const Bits bits = ctx.bits;
  const Real qb = q.at(bits);
  // Near a zero only an absolute tolerance at working precision pins the
  // sign of Phi; a coarser tail_tol would cap the accuracy of the zeros.
  PrecisionContext sum_ctx = ctx;
  sum_ctx.tail_tol = 1e-300;
  auto phi = [&](const Real& x) { return ramanujan_phi(x, q, sum_ctx).value; };

  const Real step = pow(qb, Real(-0.25, bits));
  Real x = (1 - qb) / qb;
  Real fx = phi(x);
  PhiZeroTable table{q, {}, bits};

  // The zeros grow by at least q^-2 each, i.e. 8 grid steps, so the number
  // of steps needed is dominated by the distance to the first zero.
  const std::size_t max_steps = 64 * (count + 4) + 4096;
  std::size_t steps = 0;
  while (table.zeros.size() < count) {
    if (++steps > max_steps) {
      throw InconclusiveError("phi_zeros: no sign change after " + std::to_string(max_steps) +
                              " grid steps; found " + std::to_string(table.zeros.size()) + " of " +
                              std::to_string(count) + " zeros, last grid point " + x.to_string(12));
    }
    Real x2 = x * step;
    Real f2 = phi(x2);
    if (f2.is_zero()) {
      table.zeros.push_back(x2);
      x2 *= step;
      f2 = phi(x2);
    } else if (fx.sign() != f2.sign()) {
      table.zeros.push_back(bracketed_root(phi, x, x2, ctx));
    }
    x = std::move(x2);
    fx = std::move(f2);
  }

  const Real min_ratio = 1 / (qb * qb);
  for (std::size_t i = 1; i < table.zeros.size(); ++i) {
    if (!(table.zeros[i] / table.zeros[i - 1] > min_ratio)) {
      throw InconclusiveError("phi_zeros: separation xi_{n+1}/xi_n > q^-2 fails at n=" + std::to_string(i));
    }
  }
  return table;
}

}  // namespace nextremal
