#include <doctest.h>

#include "nextremal/errors.hpp"
#include "nextremal/qcalc.hpp"

using namespace nextremal;

namespace {

const Bits kBits = 256;

QParameter q_of(const char* v) { return QParameter(Real::parse(v, kBits)); }

// Euler's pentagonal series for (q;q)_inf, independent of the product form.
Real pentagonal(const Real& q) {
  Real sum(1, kBits);
  for (long k = 1; k < 200; ++k) {
    long sign = k % 2 ? -1 : 1;
    sum += sign * (pow(q, k * (3 * k - 1) / 2) + pow(q, k * (3 * k + 1) / 2));
  }
  return sum;
}

// Pascal rule [n,k] = [n-1,k-1] + q^k [n-1,k].
Real pascal(long n, long k, const Real& q) {
  if (k == 0 || k == n) return Real(1, kBits);
  return pascal(n - 1, k - 1, q) + pow(q, k) * pascal(n - 1, k, q);
}

}  // namespace

TEST_CASE("q parameter range") {
  CHECK_THROWS_AS(q_of("0.0"), DomainError);
  CHECK_THROWS_AS(q_of("1.0"), DomainError);
  CHECK_THROWS_AS(QParameter::parse("1.5", 64), DomainError);
  CHECK(QParameter::parse("0.25", 64).value() == 0.25);
  CHECK(q_of("0.5").log2_inverse() == doctest::Approx(1.0));
}

TEST_CASE("finite q-Pochhammer symbols") {
  QParameter q = q_of("0.5");
  CHECK(qpochhammer(Real(3, kBits), q, 0) == 1);
  // (q;q)_2 = (1 - 1/2)(1 - 1/4)
  CHECK(qpochhammer(Real(0.5, kBits), q, 2) == 0.375);
}

TEST_CASE("infinite product matches the pentagonal series") {
  for (const char* v : {"0.3", "0.5", "0.8"}) {
    QParameter q = q_of(v);
    Real prod = qpochhammer(q.value(), q, infinite_order);
    CHECK(abs(prod - pentagonal(q.value())) < Real(1e-70, kBits));
  }
  // frozen: mpmath qp(0.3) at 40 digits
  CHECK(abs(qpochhammer(Real::parse("0.3", kBits), q_of("0.3"), infinite_order) -
            Real::parse("0.6126481542132565241176520746193612428442", kBits)) < Real(1e-38, kBits));
}

TEST_CASE("complex q-Pochhammer reduces to the real one on the axis") {
  QParameter q = q_of("0.5");
  Complex z(Real(0.75, kBits), Real::zero(kBits));
  Complex c = qpochhammer(z, q, infinite_order);
  CHECK(abs(c.re - qpochhammer(Real(0.75, kBits), q, infinite_order)) < Real(1e-70, kBits));
  CHECK(c.im.is_zero());
}

TEST_CASE("Gaussian binomials agree with the Pascal rule") {
  QParameter q = q_of("0.3");
  for (long n = 0; n <= 8; ++n) {
    for (long k = 0; k <= n; ++k) {
      CHECK(abs(gauss_binomial(n, k, q) - pascal(n, k, q.value())) < Real(1e-70, kBits));
    }
  }
  CHECK(gauss_binomial(4, 2, q_of("0.5")) == 2.1875);
  CHECK_THROWS_AS(gauss_binomial(3, 4, q), DomainError);
  CHECK_THROWS_AS(gauss_binomial(3, -1, q), DomainError);
}

TEST_CASE("Phi at small argument and guard bits") {
  PrecisionContext ctx;
  QParameter q = q_of("0.5");
  CHECK(ramanujan_phi(Real::zero(kBits), q, ctx).value == 1);
  CHECK(phi_guard_bits(Real(1e12, 64), q) > phi_guard_bits(Real(10, 64), q));
}

TEST_CASE("first zeros of Phi at q = 1/2") {
  PrecisionContext ctx;
  PhiZeroTable t = phi_zeros(q_of("0.5"), 4, ctx);
  REQUIRE(t.count() == 4);
  // frozen: mpmath findroot on the Phi series, 40 digits
  const char* want[] = {"1.248219163911908876269501045205122540929", "6.512040947419149255050069543826535923189",
                        "29.02983037783066661260465896107273879339", "122.0621952040489170390799850239210112643"};
  for (int i = 0; i < 4; ++i) {
    Real w = Real::parse(want[i], kBits);
    CHECK(abs(t.zeros[i] - w) / w < Real(1e-37, kBits));
  }
}

TEST_CASE("Phi vanishes at its tabulated zeros") {
  PrecisionContext ctx;
  QParameter q = q_of("0.3");
  PhiZeroTable t = phi_zeros(q, 6, ctx);
  for (const Real& x : t.zeros) {
    Real left = ramanujan_phi(x * (1 - Real(1e-20, kBits)), q, ctx).value;
    Real right = ramanujan_phi(x * (1 + Real(1e-20, kBits)), q, ctx).value;
    CHECK(left.sign() * right.sign() < 0);
  }
}

TEST_CASE("phi_zeros rejects a zero count") {
  PrecisionContext ctx;
  CHECK_THROWS_AS(phi_zeros(q_of("0.5"), 0, ctx), DomainError);
}
