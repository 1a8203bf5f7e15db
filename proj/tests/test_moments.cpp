#include <doctest.h>

#include "nextremal/errors.hpp"
#include "nextremal/moments.hpp"

using namespace nextremal;

namespace {

const Bits kBits = 256;

// Standard normal: s_{2k} = (2k-1)!!, odd moments vanish.
std::vector<Real> gaussian(std::size_t count, Bits bits) {
  std::vector<Real> s;
  Real even(1, bits);
  for (std::size_t n = 0; n < count; ++n) {
    if (n % 2) {
      s.push_back(Real::zero(bits));
    } else {
      if (n > 0) even *= static_cast<long>(n - 1);
      s.push_back(even);
    }
  }
  return s;
}

MomentSequence gaussian_sequence(std::size_t count) {
  return MomentSequence(gaussian, count, kBits, MomentSource::closed_form);
}

}  // namespace

TEST_CASE("sequence accessors and normalization") {
  MomentSequence s({Real(2, kBits), Real(4, kBits), Real(10, kBits)}, MomentSource::from_measure);
  CHECK_FALSE(s.normalized());
  CHECK_FALSE(s.regenerable());
  MomentSequence n = normalize(s);
  CHECK(n.normalized());
  CHECK(n[2] == 5);
  CHECK_THROWS_AS(s.values_at(5, kBits), LengthError);
  CHECK_THROWS_AS(normalize(MomentSequence({Real(-1, kBits)}, MomentSource::transformed)), DomainError);
  CHECK(to_string(MomentSource::closed_form) != to_string(MomentSource::transformed));
}

TEST_CASE("regenerable sequences recompute at a new precision") {
  MomentSequence s = gaussian_sequence(10);
  CHECK(s.regenerable());
  auto wide = s.values_at(12, 512);
  CHECK(wide.size() == 12);
  CHECK(wide[10].precision() == 512);
  CHECK(wide[10] == 945);
}

TEST_CASE("Hankel test accepts a measure with infinite support") {
  PrecisionContext ctx;
  HankelCheck h = hankel_positive_definite(gaussian_sequence(21), 10, ctx);
  CHECK(h.positive_definite);
  CHECK(h.failing_index == 11);
}

TEST_CASE("Hankel test rejects a negative second moment") {
  PrecisionContext ctx;
  ctx.bits_ceiling = 512;
  MomentSequence s({Real(1, kBits), Real::zero(kBits), Real(-1, kBits)}, MomentSource::transformed);
  HankelCheck h = hankel_positive_definite(s, 1, ctx);
  CHECK_FALSE(h.positive_definite);
  CHECK(h.failing_index == 1);
}

TEST_CASE("Gaussian recurrence has a_n = sqrt(n+1), b_n = 0") {
  PrecisionContext ctx;
  RecurrenceCoefficients rc = recurrence_from_moments(gaussian_sequence(43), 20, ctx);
  REQUIRE(rc.length() == 21);
  for (std::size_t n = 0; n <= 20; ++n) {
    CHECK(abs(rc.a(n) - sqrt(Real(static_cast<long>(n + 1), kBits))) < Real(1e-60, kBits));
    CHECK(abs(rc.b(n)) < Real(1e-60, kBits));
  }
  CHECK(rc.truncated(5).length() == 5);
}

TEST_CASE("orthonormal polynomials are normalized Hermite polynomials") {
  const std::size_t len = 8;
  std::vector<Real> a, b;
  for (std::size_t n = 0; n < len; ++n) {
    a.push_back(sqrt(Real(static_cast<long>(n + 1), kBits)));
    b.push_back(Real::zero(kBits));
  }
  RecurrenceCoefficients rc(a, b);
  Real x(1.5, kBits);
  auto pq = eval_pq(rc, x, 3);
  CHECK(pq.p[0] == 1);
  CHECK(abs(pq.p[2] - (x * x - 1) / sqrt(Real(2, kBits))) < Real(1e-70, kBits));
  CHECK(abs(pq.p[3] - (x * x * x - 3 * x) / sqrt(Real(6, kBits))) < Real(1e-70, kBits));
  CHECK(pq.q[0] == 0);
  CHECK(pq.q[1] == 1);
  CHECK_THROWS_AS(eval_pq(rc, x, len + 1), LengthError);

  Complex z(Real(0.5, kBits), Real(1, kBits));
  auto cz = eval_pq(rc, z, 2);
  // p_2(z) = (z^2 - 1)/sqrt 2 = (-1.75 + i)/sqrt 2
  CHECK(abs(cz.p[2].re + Real(1.75, kBits) / sqrt(Real(2, kBits))) < Real(1e-70, kBits));
}

TEST_CASE("Jacobi operator reproduces the moments") {
  PrecisionContext ctx;
  RecurrenceCoefficients rc = recurrence_from_moments(gaussian_sequence(33), 15, ctx);
  auto back = moments_from_recurrence(rc, 16);
  auto want = gaussian(16, kBits);
  for (std::size_t n = 0; n < 16; ++n) CHECK(abs(back[n] - want[n]) <= Real(1e-50, kBits) * max(Real(1, kBits), want[n]));

  std::vector<Real> e0{Real(1, kBits)};
  auto je = jacobi_apply(rc, e0);
  REQUIRE(je.size() >= 2);
  CHECK(abs(je[1] - 1) < Real(1e-60, kBits));
}

TEST_CASE("moments survive a JSON round trip") {
  MomentSequence s({Real(1, kBits), Real::pi(kBits), Real(1, kBits) / 3}, MomentSource::closed_form);
  MomentSequence back = moments_from_json(moments_to_json(s), kBits);
  REQUIRE(back.size() == 3);
  for (std::size_t n = 0; n < 3; ++n) CHECK(back[n] == s[n]);
  CHECK_THROWS(moments_from_json("{\"not\": \"an array\"}", kBits));
}
