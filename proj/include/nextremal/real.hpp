#pragma once

// RAII value type over mpfr_t with explicit per-value binary precision.
//
// Binary operations produce a result at the larger of the operand
// precisions; operations with machine scalars keep the precision of the
// Real operand. There is no process-wide default precision.

#include <mpfr.h>

#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

namespace nextremal {

using Bits = mpfr_prec_t;

class Real {
 public:
  Real() : Real(Bits{64}, Uninit{}) { mpfr_set_zero(v_, 1); }
  /// Zero at the given precision.
  static Real zero(Bits bits) {
    Real r(bits, Uninit{});
    mpfr_set_zero(r.v_, 1);
    return r;
  }
  template <std::signed_integral I>
  Real(I value, Bits bits) {
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, static_cast<long>(value), MPFR_RNDN);
  }
  template <std::unsigned_integral U>
  Real(U value, Bits bits) {
    mpfr_init2(v_, bits);
    mpfr_set_ui(v_, static_cast<unsigned long>(value), MPFR_RNDN);
  }
  Real(double value, Bits bits) {
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, value, MPFR_RNDN);
  }
  /// Parses a decimal (or "inf"/"nan") string; throws DomainError on junk.
  static Real parse(std::string_view text, Bits bits);
  static Real pi(Bits bits);
  static Real infinity(Bits bits, int sign = 1);

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  Bits precision() const { return mpfr_get_prec(v_); }
  /// Copy rounded (or exactly widened) to the given precision.
  Real with_precision(Bits bits) const {
    Real r(bits, Uninit{});
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  /// Decimal scientific string. digits == 0 means enough digits to
  /// round-trip at this precision.
  std::string to_string(int digits = 0) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  /// Binary exponent e with 0.5 <= |x|/2^e < 1 (undefined for zero).
  long exponent2() const { return mpfr_get_exp(v_); }

  /// this -= x * y with a single rounding.
  void sub_product(const Real& x, const Real& y) {
    mpfr_fms(v_, x.v_, y.v_, v_, MPFR_RNDN);
    mpfr_neg(v_, v_, MPFR_RNDN);
  }
  /// this += x * y with a single rounding.
  void add_product(const Real& x, const Real& y) { mpfr_fma(v_, x.v_, y.v_, v_, MPFR_RNDN); }

  Real operator-() const {
    Real r(precision(), Uninit{});
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& o) { return assign_op(o, mpfr_add); }
  Real& operator-=(const Real& o) { return assign_op(o, mpfr_sub); }
  Real& operator*=(const Real& o) { return assign_op(o, mpfr_mul); }
  Real& operator/=(const Real& o) { return assign_op(o, mpfr_div); }

  template <std::integral I>
  Real& operator+=(I o) { return *this += Real(o, precision()); }
  template <std::integral I>
  Real& operator-=(I o) { return *this -= Real(o, precision()); }
  template <std::integral I>
  Real& operator*=(I o) {
    if constexpr (std::signed_integral<I>) {
      mpfr_mul_si(v_, v_, static_cast<long>(o), MPFR_RNDN);
    } else {
      mpfr_mul_ui(v_, v_, static_cast<unsigned long>(o), MPFR_RNDN);
    }
    return *this;
  }
  template <std::integral I>
  Real& operator/=(I o) {
    if constexpr (std::signed_integral<I>) {
      mpfr_div_si(v_, v_, static_cast<long>(o), MPFR_RNDN);
    } else {
      mpfr_div_ui(v_, v_, static_cast<unsigned long>(o), MPFR_RNDN);
    }
    return *this;
  }

  friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }

  template <std::integral I>
  friend Real operator+(const Real& a, I b) { return a + Real(b, a.precision()); }
  template <std::integral I>
  friend Real operator+(I a, const Real& b) { return Real(a, b.precision()) + b; }
  template <std::integral I>
  friend Real operator-(const Real& a, I b) { return a - Real(b, a.precision()); }
  template <std::integral I>
  friend Real operator-(I a, const Real& b) { return Real(a, b.precision()) - b; }
  template <std::integral I>
  friend Real operator*(Real a, I b) { return a *= b; }
  template <std::integral I>
  friend Real operator*(I a, Real b) { return b *= a; }
  template <std::integral I>
  friend Real operator/(Real a, I b) { return a /= b; }
  template <std::integral I>
  friend Real operator/(I a, const Real& b) { return Real(a, b.precision()) / b; }

  friend int compare(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

  template <std::integral I>
  friend bool operator==(const Real& a, I b) { return cmp_scalar(a, b) == 0; }
  template <std::integral I>
  friend bool operator<(const Real& a, I b) { return cmp_scalar(a, b) < 0; }
  template <std::integral I>
  friend bool operator<=(const Real& a, I b) { return cmp_scalar(a, b) <= 0; }
  template <std::integral I>
  friend bool operator>(const Real& a, I b) { return cmp_scalar(a, b) > 0; }
  template <std::integral I>
  friend bool operator>=(const Real& a, I b) { return cmp_scalar(a, b) >= 0; }
  friend bool operator==(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) == 0; }
  friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

  friend void swap(Real& a, Real& b) noexcept { mpfr_swap(a.v_, b.v_); }

 private:
  struct Uninit {};
  Real(Bits bits, Uninit) { mpfr_init2(v_, bits); }

  using BinaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

  static Real binary(const Real& a, const Real& b, BinaryFn fn) {
    Real r(a.precision() > b.precision() ? a.precision() : b.precision(), Uninit{});
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  Real& assign_op(const Real& o, BinaryFn fn) {
    if (o.precision() > precision()) {
      mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    }
    fn(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  template <std::integral I>
  static int cmp_scalar(const Real& a, I b) {
    if constexpr (std::signed_integral<I>) {
      return mpfr_cmp_si(a.v_, static_cast<long>(b));
    } else {
      return mpfr_cmp_ui(a.v_, static_cast<unsigned long>(b));
    }
  }

  mpfr_t v_;
};

std::ostream& operator<<(std::ostream& os, const Real& x);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real tanh(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real floor(const Real& x);
Real gamma(const Real& x);
Real hypot(const Real& x, const Real& y);
/// x * 2^e, exact.
Real ldexp(const Real& x, long e);
const Real& min(const Real& a, const Real& b);
const Real& max(const Real& a, const Real& b);

/// 2^{-bits}: the unit of relative precision used for tolerances.
Real epsilon(Bits bits);

}  // namespace nextremal
