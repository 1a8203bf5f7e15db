#include "nextremal/roots.hpp"

#include "nextremal/errors.hpp"

namespace nextremal {

Real bracketed_root(const std::function<Real(const Real&)>& f, const Real& lo, const Real& hi,
                    const PrecisionContext& ctx) {
  const Bits bits = ctx.bits;
  Real a = lo.with_precision(bits);
  Real b = hi.with_precision(bits);
  if (b < a) swap(a, b);
  Real fa = f(a);
  Real fb = f(b);
  if (fa.is_zero()) return a;
  if (fb.is_zero()) return b;
  if (fa.sign() == fb.sign()) {
    throw InvalidBracketError("f has the same sign at both ends of [" + a.to_string(17) + ", " +
                              b.to_string(17) + "]");
  }

  const Real rel = ldexp(Real(1, bits), 8 - static_cast<long>(bits));
  // Illinois halves the retained endpoint's value after two stalls on the
  // same side; bisection takes over when a step fails to halve the width.
  int side = 0;
  Real width = b - a;
  const long max_iter = 4 * static_cast<long>(bits) + 4096;
  for (long iter = 0; iter < max_iter; ++iter) {
    Real x = abs(a) > abs(b) ? abs(a) : abs(b);
    Real scale = x < 1 ? Real(1, bits) : x;
    if (b - a <= rel * scale) break;

    Real c = (a * fb - b * fa) / (fb - fa);
    if (!(c > a && c < b)) c = ldexp(a + b, -1);
    Real fc = f(c);
    if (fc.is_zero()) return c;
    if (fc.sign() == fb.sign()) {
      b = std::move(c);
      fb = std::move(fc);
      if (side == -1) fa = ldexp(fa, -1);
      side = -1;
    } else {
      a = std::move(c);
      fa = std::move(fc);
      if (side == 1) fb = ldexp(fb, -1);
      side = 1;
    }
    Real new_width = b - a;
    if (new_width > ldexp(width, -1)) {
      Real m = ldexp(a + b, -1);
      Real fm = f(m);
      if (fm.is_zero()) return m;
      if (fm.sign() == fb.sign()) {
        b = std::move(m);
        fb = std::move(fm);
      } else {
        a = std::move(m);
        fa = std::move(fm);
      }
      side = 0;
      new_width = b - a;
    }
    width = std::move(new_width);
  }
  // The endpoint with the smaller residual is the better estimate.
  return abs(fa) <= abs(fb) ? a : b;
}

}  // namespace nextremal
