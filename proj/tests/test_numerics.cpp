#include <doctest.h>

#include <cmath>

#include "nextremal/complex.hpp"
#include "nextremal/errors.hpp"
#include "nextremal/precision.hpp"
#include "nextremal/quadrature.hpp"
#include "nextremal/roots.hpp"
#include "nextremal/series.hpp"

using namespace nextremal;

namespace {

Real rel_err(const Real& got, const Real& want) { return abs(got - want) / abs(want); }

}  // namespace

TEST_CASE("real arithmetic keeps the wider precision") {
  Real a(1, 128), b(3, 512);
  Real c = a / b;
  CHECK(c.precision() == 512);
  CHECK(abs(c * 3 - 1) < ldexp(Real(1, 512), -500));
}

TEST_CASE("real round-trips through its decimal string") {
  Real x = Real::pi(256) / 7;
  Real y = Real::parse(x.to_string(), 256);
  CHECK(x == y);
  CHECK_THROWS_AS(Real::parse("not a number", 64), DomainError);
}

TEST_CASE("gamma satisfies the reflection identity at 1/4") {
  const Bits bits = 256;
  Real quarter = Real(1, bits) / 4;
  Real lhs = gamma(quarter) * gamma(1 - quarter);
  Real rhs = Real::pi(bits) / sin(Real::pi(bits) / 4);
  CHECK(rel_err(lhs, rhs) < ldexp(Real(1, bits), -240));
}

TEST_CASE("complex division inverts multiplication") {
  const Bits bits = 128;
  Complex z(Real(3, bits), Real(-4, bits));
  Complex w(Real(0.5, bits), Real(2, bits));
  Complex back = (z * w) / w;
  CHECK(abs(back - z) < ldexp(Real(1, bits), -120));
  CHECK(abs(z) == 5);
}

TEST_CASE("precision context validation") {
  PrecisionContext ctx;
  CHECK_NOTHROW(ctx.validate());
  ctx.bits = 32;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx = {};
  ctx.tail_tol = 2.0;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx = {};
  CHECK(ctx.with_bits(20000).bits_ceiling == 20000);
  CHECK(ctx.tolerance() <= 1e-29);
}

TEST_CASE("geometric series sums with a tail bound") {
  PrecisionContext ctx;
  auto r = sum_series([](std::size_t k) { return pow(Real(0.5, 256), static_cast<long>(k)); }, ctx);
  CHECK(r.converged);
  CHECK(abs(r.value - 2) <= r.tail_bound + ldexp(Real(1, 256), -240));
  CHECK(r.tail_bound < Real(1e-29, 256) * 2);
}

TEST_CASE("exp(1) as a series") {
  PrecisionContext ctx;
  Real term(1, 256);
  auto r = sum_series(
      [&](std::size_t k) {
        if (k > 0) term /= static_cast<long>(k);
        return term;
      },
      ctx);
  CHECK(r.converged);
  CHECK(rel_err(r.value, exp(Real(1, 256))) < Real(1e-29, 256));
}

TEST_CASE("non-decaying series is reported, not thrown") {
  PrecisionContext ctx;
  ctx.max_terms = 64;
  auto r = sum_series([](std::size_t) { return Real(1, 128); }, ctx);
  CHECK_FALSE(r.converged);
  CHECK(r.terms_used == 64);
}

TEST_CASE("finite series stops on exact zeros") {
  PrecisionContext ctx;
  auto r = sum_series([](std::size_t k) { return Real(k < 3 ? 1 : 0, 64); }, ctx);
  CHECK(r.converged);
  CHECK(r.value == 3);
  CHECK(r.tail_bound.is_zero());
}

TEST_CASE("complex series") {
  PrecisionContext ctx;
  const Complex half_i(Real::zero(256), Real(0.5, 256));
  Complex power(Real(1, 256), Real::zero(256));
  auto r = sum_series(
      [&](std::size_t k) {
        if (k > 0) power *= half_i;
        return power;
      },
      ctx);
  // 1 / (1 - i/2) = (4 + 2i) / 5
  Complex want(Real(4, 256) / 5, Real(2, 256) / 5);
  CHECK(r.converged);
  CHECK(abs(r.value - want) < Real(1e-29, 256));
}

TEST_CASE("richardson removes 1/n terms") {
  std::vector<std::size_t> ns;
  std::vector<Real> vals;
  for (std::size_t n = 10; n <= 60; n += 10) {
    Real h = Real(1, 256) / static_cast<long>(n);
    ns.push_back(n);
    vals.push_back(2 + 3 * h - 5 * h * h + h * h * h);
  }
  LimitEstimate e = richardson_limit(ns, vals);
  CHECK(abs(e.value - 2) < Real(1e-40, 256));
}

TEST_CASE("accelerated limit of an algebraic tail") {
  // partial sums of 1/k^2 converge to pi^2/6 like 1/n.
  std::vector<Real> partial{Real::zero(256)};
  for (long k = 1; k <= 200; ++k) partial.push_back(partial.back() + Real(1, 256) / (k * k));
  LimitEstimate e = accelerated_limit(partial);
  Real want = Real::pi(256) * Real::pi(256) / 6;
  CHECK(abs(e.value - want) < Real(1e-12, 256));
  CHECK(abs(e.value - want) <= e.error * 100);
}

TEST_CASE("accelerated limit of a geometric tail") {
  std::vector<Real> partial{Real::zero(128)};
  for (long k = 0; k < 60; ++k) partial.push_back(partial.back() + pow(Real(0.25, 128), k));
  LimitEstimate e = accelerated_limit(partial);
  CHECK(abs(e.value - Real(4, 128) / 3) < Real(1e-30, 128));
}

TEST_CASE("bracketed root of cos in [1, 2]") {
  PrecisionContext ctx;
  Real r = bracketed_root([](const Real& x) { return cos(x); }, Real(1, 256), Real(2, 256), ctx);
  CHECK(rel_err(r, Real::pi(256) / 2) < ldexp(Real(1, 256), -240));
}

TEST_CASE("bracketed root rejects a bracket without sign change") {
  PrecisionContext ctx;
  CHECK_THROWS_AS(bracketed_root([](const Real& x) { return x * x + 1; }, Real(-1, 64), Real(1, 64), ctx),
                  InvalidBracketError);
  Real r = bracketed_root([](const Real& x) { return x - 1; }, Real(1, 64), Real(3, 64), ctx);
  CHECK(r == 1);
}

TEST_CASE("tanh-sinh on a finite interval") {
  PrecisionContext ctx;
  ctx.bits = 128;
  ctx.tail_tol = 1e-25;
  // int_0^1 4/(1+x^2) = pi
  auto r = quadrature([](const Real& x) { return 4 / (1 + x * x); }, Real::zero(128), Real(1, 128), ctx);
  CHECK(r.converged);
  CHECK(rel_err(r.value, Real::pi(128)) < Real(1e-24, 128));
}

TEST_CASE("endpoint singularity") {
  PrecisionContext ctx;
  ctx.bits = 128;
  ctx.tail_tol = 1e-20;
  // int_0^1 x^{-1/2} = 2
  auto r = quadrature([](const Real& x) { return 1 / sqrt(x); }, Real::zero(128), Real(1, 128), ctx);
  CHECK(rel_err(r.value, Real(2, 128)) < Real(1e-20, 128));
}

TEST_CASE("half-line with exp-sinh") {
  PrecisionContext ctx;
  ctx.bits = 128;
  ctx.tail_tol = 1e-25;
  auto r = quadrature([](const Real& x) { return exp(-x); }, Real::zero(128), std::nullopt, ctx);
  CHECK(r.converged);
  CHECK(rel_err(r.value, Real(1, 128)) < Real(1e-24, 128));
}

TEST_CASE("log-normal integrand with the log substitution") {
  PrecisionContext ctx;
  ctx.bits = 128;
  ctx.tail_tol = 1e-20;
  // int_0^inf exp(-log(x)^2/2) / (x sqrt(2 pi)) = 1
  const Real norm = sqrt(2 * Real::pi(128));
  auto r = quadrature(
      [&](const Real& x) {
        Real l = log(x);
        return exp(-l * l / 2) / (x * norm);
      },
      Real::zero(128), std::nullopt, ctx, {Substitution::log, 0.0, 1.0});
  CHECK(rel_err(r.value, Real(1, 128)) < Real(1e-20, 128));
}
