#include "nextremal/real.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include "nextremal/errors.hpp"

namespace nextremal {

namespace {

using UnaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

Real unary(const Real& x, UnaryFn fn) {
  Real r = Real::zero(x.precision());
  fn(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

}  // namespace

Real Real::parse(std::string_view text, Bits bits) {
  Real r = Real::zero(bits);
  std::string s(text);
  // mpfr_set_str returns 0 only when the whole string was consumed.
  if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw DomainError("cannot parse real number from '" + s + "'");
  }
  return r;
}

Real Real::pi(Bits bits) {
  Real r = Real::zero(bits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real Real::infinity(Bits bits, int sign) {
  Real r = Real::zero(bits);
  mpfr_set_inf(r.v_, sign);
  return r;
}

std::string Real::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v_)) return "0";
  if (digits <= 0) {
    // Enough decimal digits to recover every bit of the mantissa.
    digits = static_cast<int>(mpfr_get_str_ndigits(10, precision()));
  }
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string out;
  std::size_t pos = 0;
  if (mant[0] == '-') {
    out.push_back('-');
    pos = 1;
  }
  out.push_back(mant[pos]);
  std::string rest = mant.substr(pos + 1);
  while (!rest.empty() && rest.back() == '0') rest.pop_back();
  if (!rest.empty()) {
    out.push_back('.');
    out += rest;
  }
  long e = static_cast<long>(exp10) - 1;
  if (e != 0) {
    out += "e" + std::to_string(e);
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Real& x) {
  auto p = os.precision();
  return os << x.to_string(p > 0 ? static_cast<int>(p) : 0);
}

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real log(const Real& x) { return unary(x, mpfr_log); }
Real log2(const Real& x) { return unary(x, mpfr_log2); }
Real sinh(const Real& x) { return unary(x, mpfr_sinh); }
Real cosh(const Real& x) { return unary(x, mpfr_cosh); }
Real tanh(const Real& x) { return unary(x, mpfr_tanh); }
Real sin(const Real& x) { return unary(x, mpfr_sin); }
Real cos(const Real& x) { return unary(x, mpfr_cos); }
Real gamma(const Real& x) { return unary(x, mpfr_gamma); }

Real floor(const Real& x) {
  Real r = Real::zero(x.precision());
  mpfr_floor(r.raw(), x.raw());
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r = Real::zero(std::max(x.precision(), y.precision()));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r = Real::zero(x.precision());
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

Real hypot(const Real& x, const Real& y) {
  Real r = Real::zero(std::max(x.precision(), y.precision()));
  mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r = Real::zero(x.precision());
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }
const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

Real epsilon(Bits bits) { return ldexp(Real(1, bits), -static_cast<long>(bits)); }

}  // namespace nextremal
