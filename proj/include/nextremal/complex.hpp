#pragma once

#include <string>

#include "nextremal/real.hpp"

namespace nextremal {

/// Complex number over Real. std::complex is unspecified for class types.
struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(Real real, Real imag) : re(std::move(real)), im(std::move(imag)) {}
  explicit Complex(Real real) : re(std::move(real)), im(Real::zero(re.precision())) {}

  Bits precision() const { return std::max(re.precision(), im.precision()); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const Real& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator/=(const Real& s) {
    re /= s;
    im /= s;
    return *this;
  }

  Complex operator-() const { return {-re, -im}; }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator*(Complex a, const Real& s) { return a *= s; }
  friend Complex operator*(const Real& s, Complex a) { return a *= s; }
  friend Complex operator/(Complex a, const Real& s) { return a /= s; }
  friend Complex operator+(Complex a, const Real& s) {
    a.re += s;
    return a;
  }
  friend Complex operator-(Complex a, const Real& s) {
    a.re -= s;
    return a;
  }
  friend Complex operator-(const Real& s, const Complex& a) { return {s - a.re, -a.im}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  friend Complex operator/(const Real& s, const Complex& b) { return Complex(s) / b; }
};

inline Real abs(const Complex& z) { return hypot(z.re, z.im); }
inline Complex conj(const Complex& z) { return {z.re, -z.im}; }
inline Real real_part(const Real& x) { return x; }
inline Real real_part(const Complex& z) { return z.re; }
inline std::string to_string(const Complex& z, int digits = 0) {
  return z.re.to_string(digits) + (z.im.sign() < 0 ? "" : "+") + z.im.to_string(digits) + "i";
}

/// Lift a Real into the scalar type T (Real or Complex).
template <class T>
T lift(const Real& x);
template <>
inline Real lift<Real>(const Real& x) { return x; }
template <>
inline Complex lift<Complex>(const Real& x) { return Complex(x); }

}  // namespace nextremal
