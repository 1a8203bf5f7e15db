#include "nextremal/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nextremal/errors.hpp"
#include "nextremal/measures.hpp"
#include "nextremal/roots.hpp"
#include "nextremal/series.hpp"

namespace nextremal {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::determinate:
      return "determinate";
    case Verdict::indeterminate:
      return "indeterminate";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::string to_string(StieltjesClass c) {
  switch (c) {
    case StieltjesClass::det_s:
      return "det(S)";
    case StieltjesClass::indet_s:
      return "indet(S)";
    case StieltjesClass::not_stieltjes:
      return "not-stieltjes";
    case StieltjesClass::not_applicable:
      return "n/a";
  }
  return "unknown";
}

namespace {

Real magnitude(const Real& x) { return abs(x); }
Real magnitude(const Complex& z) { return abs(z); }
Real norm2(const Real& x) { return x * x; }
Real norm2(const Complex& z) { return z.re * z.re + z.im * z.im; }

double log2_of(const Real& x) {
  if (x.is_zero()) return -std::numeric_limits<double>::infinity();
  return log2(abs(x)).to_double();
}

// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

// Geometric bound on sum_{k >= L} m_k from the last four magnitudes, or
// nullopt when they do not shrink by a factor below 0.9.
std::optional<Real> geometric_tail(const std::vector<Real>& mags) {
  const std::size_t L = mags.size();
  if (L < 4) return std::nullopt;
  Real r = Real::zero(mags.back().precision());
  for (std::size_t i = L - 3; i < L; ++i) {
    if (mags[i - 1].is_zero()) return std::nullopt;
    Real ri = mags[i] / mags[i - 1];
    if (!(ri < 0.9)) return std::nullopt;
    if (ri > r) r = ri;
  }
  return mags.back() * r / (1 - r);
}

template <class T>
T extrapolate_component(const std::vector<T>& partial, Real& error);

template <>
Real extrapolate_component<Real>(const std::vector<Real>& partial, Real& error) {
  LimitEstimate est = accelerated_limit(partial);
  error = est.error;
  return est.value;
}

template <>
Complex extrapolate_component<Complex>(const std::vector<Complex>& partial, Real& error) {
  std::vector<Real> re, im;
  re.reserve(partial.size());
  im.reserve(partial.size());
  for (const Complex& z : partial) {
    re.push_back(z.re);
    im.push_back(z.im);
  }
  LimitEstimate a = accelerated_limit(re);
  LimitEstimate b = accelerated_limit(im);
  error = hypot(a.error, b.error);
  return Complex(a.value, b.value);
}

// Values of p_n(0), q_n(0) for n = 0..N.
PolynomialPair<Real> at_origin(const RecurrenceCoefficients& rc, std::size_t N) {
  return eval_pq(rc, Real::zero(rc.bits()), N);
}

}  // namespace

template <class T>
NevanlinnaQuadruple<T> nevanlinna_eval(const RecurrenceCoefficients& rc, const T& z, const PrecisionContext& ctx) {
  const std::size_t L = rc.length();
  const Bits bits = rc.bits();
  const auto origin = at_origin(rc, L);
  const auto here = eval_pq(rc, z, L);

  const T zero = lift<T>(Real::zero(bits));
  T sa = zero, sb = zero, sc = zero, sd = zero;
  std::vector<T> pa{zero}, pb{zero}, pc{zero}, pd{zero};
  std::vector<Real> mags;
  mags.reserve(L + 1);
  Real total = Real::zero(bits);
  for (std::size_t k = 0; k <= L; ++k) {
    sa += here.q[k] * origin.q[k];
    sb += here.p[k] * origin.q[k];
    sc += here.q[k] * origin.p[k];
    sd += here.p[k] * origin.p[k];
    pa.push_back(sa);
    pb.push_back(sb);
    pc.push_back(sc);
    pd.push_back(sd);
    Real m = sqrt((origin.p[k] * origin.p[k] + origin.q[k] * origin.q[k]) * (norm2(here.p[k]) + norm2(here.q[k])));
    total += m;
    mags.push_back(std::move(m));
  }

  const Real zabs = magnitude(z);
  NevanlinnaQuadruple<T> out;
  out.terms_used = L + 1;
  out.magnitude = zabs * total + 1;
  if (auto tail = geometric_tail(mags)) {
    out.tail_bound = zabs * *tail;
  } else {
    // Algebraic decay: extrapolate each series in 1/n.
    Real ea, eb, ec, ed;
    sa = extrapolate_component(pa, ea);
    sb = extrapolate_component(pb, eb);
    sc = extrapolate_component(pc, ec);
    sd = extrapolate_component(pd, ed);
    Real worst = max(max(ea, eb), max(ec, ed));
    if (!worst.is_finite() || worst > Real(ctx.limit_tol, bits) * (1 + magnitude(sd) + magnitude(sa))) {
      throw InconclusiveError(
          "nevanlinna_eval: series tail neither decays geometrically nor extrapolates; the problem may be determinate");
    }
    out.tail_bound = zabs * worst;
    out.extrapolated = true;
  }
  out.A = z * sa;
  out.B = z * sb - lift<T>(Real(1, bits));
  out.C = z * sc + lift<T>(Real(1, bits));
  out.D = z * sd;
  out.identity_residual = magnitude(out.A * out.D - out.B * out.C - lift<T>(Real(1, bits)));

  Real scale = 1 + max(max(magnitude(out.A), magnitude(out.B)), max(magnitude(out.C), magnitude(out.D)));
  Real allowed = 16 * out.tail_bound * scale + ldexp(out.magnitude * scale, -static_cast<long>(bits) / 2);
  if (out.identity_residual > allowed) {
    throw InconclusiveError("nevanlinna_eval: |AD - BC - 1| = " + out.identity_residual.to_string(6) +
                            " exceeds its tolerance " + allowed.to_string(6));
  }
  return out;
}

template NevanlinnaQuadruple<Real> nevanlinna_eval<Real>(const RecurrenceCoefficients&, const Real&,
                                                         const PrecisionContext&);
template NevanlinnaQuadruple<Complex> nevanlinna_eval<Complex>(const RecurrenceCoefficients&, const Complex&,
                                                               const PrecisionContext&);

DeterminacyVerdict classify(const RecurrenceCoefficients& rc, const PrecisionContext& ctx) {
  DeterminacyVerdict out;
  const std::size_t L = rc.length();
  out.terms = L + 1;
  if (L < 32) {
    out.note = "recurrence too short for the ratio test (" + std::to_string(L) + " < 32 coefficients)";
    return out;
  }
  const auto origin = at_origin(rc, L);
  std::vector<Real> t;
  t.reserve(L + 1);
  for (std::size_t n = 0; n <= L; ++n) t.push_back(origin.p[n] * origin.p[n] + origin.q[n] * origin.q[n]);

  const std::size_t first = L + 1 - kClassifyWindow;
  Real partial = Real::zero(rc.bits());
  for (std::size_t n = 0; n < first; ++n) partial += t[n];
  // Fit t_{n-1} + t_n: symmetric problems have p_n(0) or q_n(0) vanishing on
  // alternate n, which makes t_n itself oscillate by orders of magnitude.
  std::vector<double> ns, logn, logt;
  for (std::size_t n = first; n <= L; ++n) {
    partial += t[n];
    out.window_partial_sums.push_back(partial);
    ns.push_back(static_cast<double>(n));
    logn.push_back(std::log(static_cast<double>(n)));
    logt.push_back(log2_of(t[n - 1] + t[n]) * std::log(2.0));
  }
  const double slope = fit_slope(ns, logt);
  out.ratio = std::exp(slope);
  out.power_exponent = -fit_slope(logn, logt);
  const double log_theta = std::log(kRatioThreshold);
  out.margin = std::fabs(slope - log_theta) / std::fabs(log_theta);

  if (out.ratio < kRatioThreshold) {
    out.verdict = Verdict::indeterminate;
  } else if (out.power_exponent >= 1.5) {
    out.verdict = Verdict::indeterminate;
    out.note = "summable power-law decay";
  } else if (out.ratio >= 1.0 || out.power_exponent <= 1.0) {
    out.verdict = Verdict::determinate;
  } else {
    out.note = "decay between the geometric and power-law thresholds";
    return out;
  }

  bool alternating = true;
  for (std::size_t n = 0; n <= L && alternating; ++n) {
    if (origin.p[n].sign() * (n % 2 == 0 ? 1 : -1) <= 0) alternating = false;
  }
  if (!alternating) {
    out.stieltjes = StieltjesClass::not_stieltjes;
  } else if (out.verdict == Verdict::determinate) {
    out.stieltjes = StieltjesClass::det_s;
  } else {
    StieltjesClassification sc = friedrichs_parameter(rc, ctx);
    if (!sc.converged) {
      out.note = "Friedrichs parameter did not settle";
    } else {
      out.stieltjes = sc.F.infinite ? StieltjesClass::det_s : StieltjesClass::indet_s;
    }
  }
  return out;
}

StieltjesClassification friedrichs_parameter(const RecurrenceCoefficients& rc, const PrecisionContext& ctx) {
  const std::size_t L = rc.length();
  const Bits bits = rc.bits();
  StieltjesClassification out;
  out.alpha = Real::zero(bits);
  out.error_bound = Real::infinity(bits);
  out.F = ExtReal::infinity(bits);
  if (L < 8) return out;
  const auto origin = at_origin(rc, L);
  std::vector<Real> alpha;  // alpha[n-1] = p_n(0)/q_n(0)
  alpha.reserve(L);
  for (std::size_t n = 1; n <= L; ++n) alpha.push_back(origin.p[n] / origin.q[n]);

  const Real tol(ctx.limit_tol, bits);
  // alpha_n -> 0 geometrically: det(S).
  const std::size_t window = std::min<std::size_t>(kClassifyWindow, alpha.size());
  std::vector<double> ns, logs;
  for (std::size_t i = alpha.size() - window; i < alpha.size(); ++i) {
    ns.push_back(static_cast<double>(i));
    logs.push_back(log2_of(alpha[i]) * std::log(2.0));
  }
  const double alpha_ratio = std::exp(fit_slope(ns, logs));
  if (alpha_ratio < kRatioThreshold) {
    out.error_bound = abs(alpha.back()) * Real(alpha_ratio / (1 - alpha_ratio), bits);
    // Settled when both halves of the window decay geometrically on their own.
    const std::size_t half = window / 2;
    const std::vector<double> n1(ns.begin(), ns.begin() + half), l1(logs.begin(), logs.begin() + half);
    const std::vector<double> n2(ns.begin() + half, ns.end()), l2(logs.begin() + half, logs.end());
    const bool stable = half >= 4 && std::exp(fit_slope(n1, l1)) < kRatioThreshold &&
                        std::exp(fit_slope(n2, l2)) < kRatioThreshold;
    out.converged = out.error_bound <= tol || stable;
    return out;
  }

  // A nonzero limit, settled geometrically or extrapolated in 1/n.
  std::vector<Real> partial{Real::zero(bits)};
  for (const Real& a : alpha) partial.push_back(a);
  // partial[k] = alpha_{k}: shaped like partial sums of the increments.
  LimitEstimate est = accelerated_limit(partial);
  out.alpha = est.value;
  out.error_bound = est.error;
  // An algebraic approach to 0: det(S).
  if (est.error.is_finite() && est.error <= tol && abs(est.value) <= est.error + tol) {
    out.alpha = Real::zero(bits);
    out.converged = true;
    return out;
  }
  out.converged = est.error.is_finite() && est.error <= tol * max(Real(1, bits), abs(est.value)) && out.alpha < 0;
  if (out.alpha < 0) out.F = ExtReal(-1 / out.alpha);
  return out;
}

namespace {

// B + tD (or D for t = inf) at real x, with the size of its noise floor.
struct RealTarget {
  Real value;
  Real noise;
};

RealTarget support_function(const RecurrenceCoefficients& rc, const ExtReal& t, const Real& x,
                            const PrecisionContext& ctx) {
  NevanlinnaQuadruple<Real> nq = nevanlinna_eval(rc, x.with_precision(rc.bits()), ctx);
  const long eff_bits = std::min<long>(static_cast<long>(rc.bits() - rc.lost_bits()), static_cast<long>(x.precision()));
  Real floor = nq.tail_bound + ldexp(nq.magnitude, -eff_bits / 2);
  if (t.infinite) return {nq.D, floor};
  Real tt = t.value.with_precision(rc.bits());
  return {nq.B + tt * nq.D, floor * (1 + abs(tt))};
}

// Number of zeros of p_N below x (Sturm count on the N x N Jacobi matrix).
std::size_t zeros_below(const std::vector<Real>& a, const std::vector<Real>& b, std::size_t N, const Real& x) {
  std::size_t count = 0;
  Real d = b[0] - x;
  const Real tiny = ldexp(Real(1, x.precision()), -static_cast<long>(x.precision()) * 2);
  for (std::size_t k = 0; k < N; ++k) {
    if (k > 0) d = b[k] - x - a[k - 1] * a[k - 1] / d;
    if (d.is_zero()) d = tiny;
    if (d.sign() < 0) ++count;
  }
  return count;
}

std::vector<Real> pn_zeros_in(const RecurrenceCoefficients& rc, const Real& lo, const Real& hi) {
  const Bits bits = std::min<Bits>(rc.bits(), 128);
  const std::size_t N = rc.length();
  std::vector<Real> a, b;
  for (std::size_t i = 0; i < N; ++i) {
    a.push_back(rc.a(i).with_precision(bits));
    b.push_back(rc.b(i).with_precision(bits));
  }
  const Real l = lo.with_precision(bits), h = hi.with_precision(bits);
  const std::size_t c_lo = zeros_below(a, b, N, l), c_hi = zeros_below(a, b, N, h);
  std::vector<Real> out;
  for (std::size_t i = c_lo; i < c_hi; ++i) {
    // The (i+1)-th zero: smallest x with more than i zeros below.
    Real x0 = l, x1 = h;
    for (int it = 0; it < 60; ++it) {
      Real m = ldexp(x0 + x1, -1);
      if (zeros_below(a, b, N, m) > i) x1 = m; else x0 = m;
    }
    out.push_back(ldexp(x0 + x1, -1));
  }
  return out;
}

std::vector<Real> geometric_grid(const Real& lo, const Real& hi, const Real& factor) {
  std::vector<Real> grid;
  const Real extent = max(abs(lo), abs(hi));
  const Real inner = ldexp(extent, -40);
  if (hi > 0) {
    Real x = lo > 0 ? lo : inner;
    for (; x < hi; x *= factor) grid.push_back(x);
    grid.push_back(hi);
  }
  if (lo < 0) {
    std::vector<Real> neg;
    Real x = hi < 0 ? hi : -inner;
    for (; x > lo; x *= factor) neg.push_back(x);
    neg.push_back(lo);
    std::reverse(neg.begin(), neg.end());
    grid.insert(grid.begin(), neg.begin(), neg.end());
  }
  return grid;
}

std::vector<Real> gap_grid(const RecurrenceCoefficients& rc, const Real& lo, const Real& hi) {
  std::vector<Real> breaks{lo};
  for (Real& z : pn_zeros_in(rc, lo, hi)) breaks.push_back(z);
  breaks.push_back(hi);
  std::vector<Real> grid;
  if (breaks.size() == 2) {
    for (int i = 0; i < 64; ++i) grid.push_back(lo + (hi - lo) * i / 64);
  } else {
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
      // Segments at the window edge borrow the spacing of their neighbour.
      Real width = breaks[s + 1] - breaks[s];
      if (s == 0 && breaks.size() > 3) width = breaks[2] - breaks[1];
      if (s + 2 == breaks.size() && breaks.size() > 3) width = breaks[s] - breaks[s - 1];
      Real step = width / 8;
      for (Real x = breaks[s]; x < breaks[s + 1]; x += step) grid.push_back(x);
    }
  }
  grid.push_back(hi);
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

SupportScan nextremal_support(const RecurrenceCoefficients& rc, const ExtReal& t, const Real& lo, const Real& hi,
                              const PrecisionContext& ctx, const std::optional<Real>& geometric_factor) {
  if (!(lo < hi)) throw DomainError("nextremal_support needs lo < hi");
  SupportScan out;
  std::vector<Real> grid = geometric_factor ? geometric_grid(lo, hi, *geometric_factor) : gap_grid(rc, lo, hi);
  if (lo <= 0 && hi >= 0) {
    // B(0) = -1, D(0) = 0: the origin carries mass only for t = inf.
    if (t.infinite) out.zeros.push_back(Real::zero(ctx.bits));
    std::vector<Real> pos, neg;
    for (Real& x : grid) {
      if (x.is_zero()) continue;
      (x.sign() > 0 ? pos : neg).push_back(std::move(x));
    }
    grid = std::move(neg);
    grid.insert(grid.end(), pos.begin(), pos.end());
  }

  auto f = [&](const Real& x) { return support_function(rc, t, x, ctx).value.with_precision(ctx.bits); };
  std::vector<RealTarget> values;
  values.reserve(grid.size());
  for (const Real& x : grid) values.push_back(support_function(rc, t, x, ctx));

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const RealTarget& u = values[i];
    const RealTarget& v = values[i + 1];
    // Skip the pair straddling the origin; that point was handled above.
    if (grid[i].sign() < 0 && grid[i + 1].sign() > 0) continue;
    if (u.value.is_zero()) {
      out.zeros.push_back(grid[i].with_precision(ctx.bits));
      continue;
    }
    if (u.value.sign() == v.value.sign() || v.value.is_zero()) continue;
    if (abs(u.value) <= u.noise || abs(v.value) <= v.noise) {
      out.inconclusive.emplace_back(grid[i], grid[i + 1]);
      continue;
    }
    out.zeros.push_back(bracketed_root(f, grid[i], grid[i + 1], ctx));
  }
  if (!grid.empty() && values.back().value.is_zero()) out.zeros.push_back(grid.back().with_precision(ctx.bits));
  std::sort(out.zeros.begin(), out.zeros.end(), [](const Real& x, const Real& y) { return x < y; });
  return out;
}

MassEstimate mass_at(const RecurrenceCoefficients& rc, const Real& x0, const PrecisionContext& ctx) {
  const std::size_t L = rc.length();
  const Bits bits = rc.bits();
  const auto pq = eval_pq(rc, x0.with_precision(bits), L);
  std::vector<Real> partial{Real::zero(bits)};
  std::vector<double> ns, logn, logt;
  for (std::size_t n = 0; n <= L; ++n) {
    Real term = pq.p[n] * pq.p[n];
    // Pairs of terms, since p_n(x0) may vanish on alternate n.
    if (n >= 1 && n + kClassifyWindow > L) {
      ns.push_back(static_cast<double>(n));
      logn.push_back(std::log(static_cast<double>(n)));
      logt.push_back(log2_of(term + pq.p[n - 1] * pq.p[n - 1]) * std::log(2.0));
    }
    partial.push_back(partial.back() + term);
  }
  if (ns.size() >= 4 && std::isfinite(logt.back())) {
    const double slope = fit_slope(ns, logt);
    const double exponent = -fit_slope(logn, logt);
    if (std::exp(slope) >= 1.0 || (std::exp(slope) >= kRatioThreshold && exponent <= 1.0)) {
      throw DivergenceError("mass_at: sum p_n(x0)^2 does not converge at x0=" + x0.to_string(17) +
                            " (fitted ratio " + std::to_string(std::exp(slope)) + ")");
    }
  }
  LimitEstimate sum = accelerated_limit(partial);
  if (!sum.error.is_finite()) throw InconclusiveError("mass_at: tail of sum p_n(x0)^2 could not be estimated");
  MassEstimate out;
  out.mass = 1 / sum.value;
  out.error = sum.error / (sum.value * sum.value);
  out.terms = L + 1;
  // accelerated_limit returns the plain partial sum when the tail is geometric.
  out.extrapolated = sum.value != partial.back();
  (void)ctx;
  return out;
}

ExtReal parameter_of_point(const RecurrenceCoefficients& rc, const Real& x0, const PrecisionContext& ctx) {
  if (x0.is_zero()) return ExtReal::infinity(ctx.bits);
  NevanlinnaQuadruple<Real> nq = nevanlinna_eval(rc, x0.with_precision(rc.bits()), ctx);
  const long eff_bits = std::min<long>(static_cast<long>(rc.bits() - rc.lost_bits()), static_cast<long>(x0.precision()));
  Real floor = nq.tail_bound + ldexp(nq.magnitude, -eff_bits / 2);
  if (abs(nq.D) <= floor) {
    if (abs(nq.B) <= floor) {
      throw InconclusiveError("parameter_of_point: B and D both vanish within noise at x0=" + x0.to_string(17));
    }
    return ExtReal::infinity(ctx.bits);
  }
  // A huge ratio may only mean x0 was rounded off a zero of D: D then
  // changes sign within the rounding interval of x0.
  if (abs(nq.D) < ldexp(abs(nq.B), -eff_bits / 4)) {
    const Real delta = ldexp(abs(x0), 8 - static_cast<long>(x0.precision()));
    const Real x = x0.with_precision(rc.bits());
    Real lo = nevanlinna_eval(rc, x - delta, ctx).D;
    Real hi = nevanlinna_eval(rc, x + delta, ctx).D;
    if (lo.sign() * hi.sign() <= 0) return ExtReal::infinity(ctx.bits);
  }
  return ExtReal((-nq.B / nq.D).with_precision(ctx.bits));
}

StieltjesCheck stieltjes_transform_check(const RecurrenceCoefficients& rc, const ExtReal& t, const Complex& z,
                                         const DiscreteMeasure& measure, const PrecisionContext& ctx) {
  const Bits bits = rc.bits();
  Complex zz(z.re.with_precision(bits), z.im.with_precision(bits));
  NevanlinnaQuadruple<Complex> nq = nevanlinna_eval(rc, zz, ctx);
  StieltjesCheck out;
  if (t.infinite) {
    out.nevanlinna_side = -(nq.C / nq.D);
  } else {
    Real tt = t.value.with_precision(bits);
    out.nevanlinna_side = -((nq.A + nq.C * tt) / (nq.B + nq.D * tt));
  }
  Complex lhs(Real::zero(bits), Real::zero(bits));
  for (std::size_t i = 0; i < measure.size(); ++i) {
    lhs += Complex(measure.mass(i).with_precision(bits), Real::zero(bits)) / (measure.atom(i).with_precision(bits) - zz);
  }
  out.measure_side = lhs;
  out.residual = abs(out.measure_side - out.nevanlinna_side);
  Real im = abs(zz.im);
  out.tail_bound = nq.tail_bound + (im.is_zero() ? Real::infinity(bits) : measure.tail_mass_bound().with_precision(bits) / im);
  return out;
}

}  // namespace nextremal
