#include "nextremal/series.hpp"

#include <array>

namespace nextremal {

namespace {

Real magnitude(const Real& x) { return abs(x); }
Real magnitude(const Complex& z) { return abs(z); }

template <class T>
SummationResult<T> sum_impl(const std::function<T(std::size_t)>& term, const PrecisionContext& ctx) {
  const Real tol = ctx.tolerance();
  SummationResult<T> out;
  out.value = lift<T>(Real::zero(ctx.bits));
  out.tail_bound = Real::infinity(ctx.bits);

  // Magnitudes of the last four nonzero terms, oldest first.
  std::array<Real, 4> recent;
  std::size_t nonzero_seen = 0;
  std::size_t zero_run = 0;
  std::size_t last_nonzero = 0;

  for (std::size_t k = 0; k < ctx.max_terms; ++k) {
    T t = term(k);
    Real mag = magnitude(t);
    if (mag.is_zero()) {
      if (++zero_run >= 3 && nonzero_seen > 0) {
        out.terms_used = last_nonzero + 1;
        out.tail_bound = Real::zero(ctx.bits);
        out.converged = true;
        return out;
      }
      continue;
    }
    zero_run = 0;
    last_nonzero = k;
    out.value += t;
    out.terms_used = k + 1;
    for (std::size_t i = 0; i + 1 < recent.size(); ++i) recent[i] = std::move(recent[i + 1]);
    recent.back() = mag;
    if (++nonzero_seen < recent.size()) continue;

    Real r = recent[1] / recent[0];
    bool geometric = r < 1;
    for (std::size_t i = 2; i < recent.size() && geometric; ++i) {
      Real ri = recent[i] / recent[i - 1];
      if (!(ri < 1)) geometric = false;
      if (ri > r) r = std::move(ri);
    }
    if (!geometric) continue;
    Real tail = recent.back() * r / (1 - r);
    out.tail_bound = tail;
    Real scale = magnitude(out.value);
    bool small_value = scale <= tol;
    if ((small_value && tail <= tol) || (!small_value && tail <= tol * scale)) {
      out.converged = true;
      return out;
    }
  }
  if (nonzero_seen == 0) {
    // Every generated term vanished: the sum is exactly zero.
    out.tail_bound = Real::zero(ctx.bits);
    out.converged = zero_run >= 3;
  }
  return out;
}

}  // namespace

SummationResult<Real> sum_series(const std::function<Real(std::size_t)>& term,
                                 const PrecisionContext& ctx) {
  return sum_impl<Real>(term, ctx);
}

SummationResult<Complex> sum_series(const std::function<Complex(std::size_t)>& term,
                                    const PrecisionContext& ctx) {
  return sum_impl<Complex>(term, ctx);
}

LimitEstimate richardson_limit(const std::vector<std::size_t>& ns, const std::vector<Real>& values) {
  const std::size_t m = values.size();
  if (m == 0 || ns.size() != m) return {Real(), Real::infinity(64)};
  const Bits bits = values.front().precision();
  std::vector<Real> h;
  h.reserve(m);
  for (std::size_t n : ns) h.push_back(Real(1, bits) / Real(n, bits));
  std::vector<Real> col = values;
  Real previous = col.back();
  // After pass `level`, col[i] is the interpolant through points i..i+level
  // evaluated at h = 0.
  for (std::size_t level = 1; level < m; ++level) {
    previous = col[0];
    for (std::size_t i = 0; i + level < m; ++i) {
      col[i] = (h[i] * col[i + 1] - h[i + level] * col[i]) / (h[i] - h[i + level]);
    }
  }
  Real error = m > 1 ? abs(col[0] - previous) : Real::infinity(bits);
  return {col[0], error};
}

LimitEstimate accelerated_limit(const std::vector<Real>& partial_sums) {
  const std::size_t L = partial_sums.size();
  const Bits bits = L ? partial_sums.back().precision() : 64;
  if (L < 5) return {L ? partial_sums.back() : Real::zero(bits), Real::infinity(bits)};

  // Geometric tail on the last three ratios of increments.
  std::array<Real, 4> inc;
  for (std::size_t i = 0; i < 4; ++i) inc[i] = abs(partial_sums[L - 4 + i] - partial_sums[L - 5 + i]);
  bool geometric = !inc[0].is_zero();
  Real r = Real::zero(bits);
  for (std::size_t i = 1; i < 4 && geometric; ++i) {
    if (inc[i - 1].is_zero()) {
      geometric = false;
      break;
    }
    Real ri = inc[i] / inc[i - 1];
    if (!(ri < 0.9)) geometric = false;
    if (ri > r) r = ri;
  }
  if (geometric) {
    Real tail = inc[3] * r / (1 - r);
    return {partial_sums.back(), tail};
  }

  // Algebraic convergence: extrapolate in 1/n on an evenly spaced subsequence.
  if (L < 24) return {partial_sums.back(), Real::infinity(bits)};
  const std::size_t last = L - 1;
  const std::size_t step = std::max<std::size_t>(1, last / 15);
  std::vector<std::size_t> ns;
  std::vector<Real> vals;
  for (std::size_t i = 0; i <= 10 && i * step <= last / 3 * 2; ++i) {
    std::size_t n = last - i * step;
    ns.insert(ns.begin(), n);
    vals.insert(vals.begin(), partial_sums[n]);
  }
  return richardson_limit(ns, vals);
}

}  // namespace nextremal
