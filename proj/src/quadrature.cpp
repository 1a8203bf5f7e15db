#include "nextremal/quadrature.hpp"

#include "nextremal/errors.hpp"

namespace nextremal {

namespace {

constexpr int kMaxLevels = 12;
constexpr double kMaxT = 7.0;

// A change of variables x = x(t) over the whole real t-line with its
// Jacobian; `weight == 0` or a non-finite node marks the edge of the
// representable range.
struct Node {
  Real x;
  Real weight;
};

class Transform {
 public:
  Transform(const Real& a, const std::optional<Real>& b, const QuadratureHint& hint, Bits bits)
      : a_(a.with_precision(bits)), bits_(bits), half_pi_(ldexp(Real::pi(bits), -1)) {
    if (b) {
      kind_ = Kind::finite;
      b_ = b->with_precision(bits);
      half_ = ldexp(b_ - a_, -1);
    } else if (hint.substitution == Substitution::log) {
      if (!a_.is_zero()) throw DomainError("log substitution needs lower limit 0");
      kind_ = Kind::log;
      center_ = Real(hint.center, bits);
      scale_ = Real(hint.scale, bits);
    } else {
      kind_ = Kind::exp_sinh;
    }
  }

  Node at(const Real& t) const {
    Real s = half_pi_ * sinh(t);
    Real ds = half_pi_ * cosh(t);
    switch (kind_) {
      case Kind::finite: {
        // Distance to the nearer endpoint, computed without cancellation.
        Real e = exp(ldexp(abs(s), 1));
        Real gap = ldexp(half_, 1) / (e + 1);
        Real x = s.sign() >= 0 ? b_ - gap : a_ + gap;
        Real c = cosh(s);
        return {x, half_ * ds / (c * c)};
      }
      case Kind::exp_sinh: {
        Real e = exp(s);
        return {a_ + e, e * ds};
      }
      case Kind::log: {
        Real u = center_ + scale_ * sinh(s);
        Real x = exp(u);
        return {x, x * scale_ * cosh(s) * ds};
      }
    }
    return {Real::zero(bits_), Real::zero(bits_)};
  }

 private:
  enum class Kind { finite, exp_sinh, log };
  Kind kind_ = Kind::finite;
  Real a_, b_, half_;
  Real center_, scale_;
  Bits bits_;
  Real half_pi_;
};

// Sum of f(x(t)) x'(t) over t = start + k * step, k = 0, 1, ... moving
// away from the origin, stopped once contributions are negligible.
Real directional_sum(const std::function<Real(const Real&)>& f, const Transform& tr, const Real& start,
                     const Real& step, const Real& reference, const Real& eps) {
  Real sum = Real::zero(start.precision());
  int small_run = 0;
  for (Real t = start; abs(t) <= kMaxT; t += step) {
    Node node = tr.at(t);
    if (!node.x.is_finite() || node.weight.is_zero() || !node.weight.is_finite()) break;
    Real v = f(node.x);
    if (!v.is_finite()) break;
    Real c = v * node.weight;
    sum += c;
    Real scale = abs(reference) + abs(sum);
    if (abs(t) > 1 && abs(c) <= eps * scale) {
      if (++small_run >= 3) break;
    } else {
      small_run = 0;
    }
  }
  return sum;
}

}  // namespace

QuadratureResult quadrature(const std::function<Real(const Real&)>& f, const Real& a,
                            const std::optional<Real>& b, const PrecisionContext& ctx,
                            const QuadratureHint& hint) {
  const Bits bits = ctx.bits;
  const Transform tr(a, b, hint, bits);
  const Real tol = ctx.tolerance();
  const Real eps = ldexp(Real(1, bits), -static_cast<long>(bits));

  QuadratureResult out;
  Real h(1, bits);
  Real zero = Real::zero(bits);
  Node center = tr.at(zero);
  Real sum = f(center.x) * center.weight;
  sum += directional_sum(f, tr, h, h, sum, eps);
  sum += directional_sum(f, tr, -h, -h, sum, eps);
  Real estimate = sum * h;
  out.value = estimate;
  out.error_estimate = Real::infinity(bits);

  for (int level = 1; level <= kMaxLevels; ++level) {
    Real step = h;  // spacing between new odd nodes
    h = ldexp(h, -1);
    Real odd = directional_sum(f, tr, h, step, sum, eps);
    odd += directional_sum(f, tr, -h, -step, sum, eps);
    sum += odd;
    Real refined = sum * h;
    Real diff = abs(refined - estimate);
    out.value = refined;
    out.error_estimate = diff;
    out.levels = level;
    estimate = std::move(refined);
    Real mag = abs(estimate);
    if (level >= 3 && (diff <= tol * mag || (mag <= tol && diff <= tol))) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace nextremal
