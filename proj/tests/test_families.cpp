#include <doctest.h>

#include "nextremal/errors.hpp"
#include "nextremal/families.hpp"
#include "nextremal/quadrature.hpp"

using namespace nextremal;

namespace {

const Bits kBits = 256;

Real parse(const char* s) { return Real::parse(s, kBits); }
bool rel_close(const Real& a, const Real& b, double tol) { return abs(a - b) <= Real(tol, kBits) * abs(b); }

QParameter q_of(const char* v) { return QParameter(Real::parse(v, kBits)); }

}  // namespace

// Frozen values below come from mpmath at 40 digits.

TEST_CASE("quartic constants") {
  QuarticConstants c = quartic_constants(kBits);
  CHECK(rel_close(c.K0, parse("1.854074677301371918433850347195260046218"), 1e-38));
  CHECK(rel_close(c.normalizer, parse("3.655572648355709002999732980381466692894"), 1e-38));
}

TEST_CASE("quartic Friedrichs solution") {
  PrecisionContext ctx;
  DiscreteMeasure m = quartic_friedrichs(40, ctx);
  CHECK(m.atom(1) == 81);
  CHECK(rel_close(m.mass(1), parse("0.005560674623527474730792430807452479674045"), 1e-38));
  Real inv = Real::zero(kBits);
  for (std::size_t i = 0; i < m.size(); ++i) inv += m.mass(i) / m.atom(i);
  CHECK(rel_close(inv, parse("0.994490650964903746574944106907860430716"), 1e-35));
}

TEST_CASE("quartic solutions share the moments of the generator") {
  PrecisionContext ctx;
  auto s = quartic_moments()(7, kBits);
  CHECK(abs(s[0] - 1) < Real(1e-60, kBits));
  DiscreteMeasure f = quartic_friedrichs(40, ctx);
  DiscreteMeasure k = quartic_krein(40, ctx);
  CHECK(k.atom(0) == 0);
  for (std::size_t n = 0; n < 7; ++n) {
    CHECK(rel_close(moment(f, n).value, s[n], 1e-30));
    CHECK(rel_close(moment(k, n).value, s[n], 1e-30));
  }
  DiscreteMeasure c = quartic_mu_c(Real::zero(kBits), 10, ctx);
  CHECK(c.atom(0) == 1);
}

TEST_CASE("Al-Salam-Carlitz parameters and F") {
  CHECK_THROWS_AS(AscParameters(Real(0.9, kBits), q_of("0.5")), DomainError);
  CHECK_THROWS_AS(AscParameters(Real(2.5, kBits), q_of("0.5")), DomainError);
  AscParameters p(Real(1.5, kBits), q_of("0.5"));
  PrecisionContext ctx;
  CHECK(rel_close(asc_F(p, ctx), parse("1.182592052331139441871683475528599483096"), 1e-35));
  CHECK(asc_bits(p, 10, 100) % 64 == 0);
}

TEST_CASE("Al-Salam-Carlitz solutions reproduce the moments") {
  AscParameters p(Real(1.5, kBits), q_of("0.5"));
  PrecisionContext ctx;
  auto s = asc_moments(p)(6, kBits);
  CHECK(abs(s[0] - 1) < Real(1e-60, kBits));
  DiscreteMeasure f = asc_friedrichs(p, 80, ctx);
  DiscreteMeasure k = asc_krein(p, 80, ctx);
  CHECK(k.atom(0) == 0);
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK(rel_close(moment(f, n).value, s[n], 1e-25));
    CHECK(rel_close(moment(k, n).value, s[n], 1e-25));
  }
  Real inv = Real::zero(kBits);
  for (std::size_t i = 0; i < f.size(); ++i) inv += f.mass(i) / f.atom(i);
  CHECK(rel_close(inv, asc_F(p, ctx), 1e-25));
}

TEST_CASE("Stieltjes-Wigert closed forms") {
  QParameter q = q_of("0.5");
  CHECK(sw_moment(3, q) == 64);
  CHECK(rel_close(sw_density(Real(2, kBits), q), parse("0.2197043168283597920867870138462011332135"), 1e-38));
  CHECK(rel_close(sw_p(3, Real(2, kBits), q), parse("0.2025231468252456322176864823777498955533"), 1e-35));
  CHECK(rel_close(sw_p(10, parse("1.3"), q), parse("-0.00178654945317120080087949186600605767791"), 1e-30));
}

TEST_CASE("third moment of the log-normal density") {
  QParameter q = q_of("0.5");
  PrecisionContext ctx;
  ctx.bits = 128;
  ctx.tail_tol = 1e-25;
  auto r = quadrature([&](const Real& x) { return x * x * x * sw_density(x, q); }, Real::zero(128), std::nullopt, ctx,
                      {Substitution::log, 3.5 * 0.6931471805599453, 1.0});
  CHECK(rel_close(r.value, Real(64, kBits), 1e-20));
}

TEST_CASE("orthonormal polynomials against the recovered recurrence") {
  QParameter q = q_of("0.5");
  PrecisionContext ctx;
  ctx.bits = 512;
  RecurrenceCoefficients rc = sw_recurrence(q, 12, ctx);
  Real x(0.7, 512);
  auto pq = eval_pq(rc, x, 11);
  for (std::size_t n = 0; n <= 11; ++n) {
    CHECK(abs(pq.p[n] - sw_p(n, x, QParameter(Real(0.5, 512)))) < Real(1e-100, 512));
  }
}

TEST_CASE("smallest zeros of p_n approach xi_1 from above") {
  QParameter q = q_of("0.5");
  PrecisionContext ctx;
  Real xi1 = parse("1.248219163911908876269501045205122540929");
  Real prev = sw_p_smallest_zero(5, q, ctx);
  for (std::size_t n : {10, 20}) {
    Real z = sw_p_smallest_zero(n, q, ctx);
    CHECK(z < prev);
    CHECK(z > xi1);
    prev = z;
  }
}

TEST_CASE("N-extremal solutions at q = 1/2") {
  QParameter q = q_of("0.5");
  PrecisionContext ctx;
  DiscreteMeasure one = sw_nextremal(SwSolution::t_one, q, 30, ctx);
  Real mass = Real::zero(kBits), inv = Real::zero(kBits);
  for (std::size_t i = 0; i < one.size(); ++i) {
    mass += one.mass(i);
    inv += one.mass(i) / one.atom(i);
  }
  CHECK(abs(mass - 1) < Real(1e-12, kBits));
  CHECK(abs(inv - 1) < Real(1e-12, kBits));
  DiscreteMeasure k = sw_nextremal(SwSolution::krein, q, 30, ctx);
  CHECK(k.atom(0) == 0);
  CHECK(to_string(SwSolution::t_one) == "t_one");
}

TEST_CASE("family selection") {
  CHECK(parse_family("sw") == Family::stieltjes_wigert);
  CHECK(parse_family("asc") == Family::al_salam_carlitz);
  CHECK(parse_family("quartic") == Family::quartic);
  CHECK_THROWS_AS(parse_family("hermite"), UsageError);
  FamilyHandle h;
  CHECK_THROWS_AS(h.validate(), DomainError);  // no q
  h.q = q_of("0.5");
  CHECK_NOTHROW(h.validate());
  h.family = Family::al_salam_carlitz;
  CHECK_THROWS_AS(h.validate(), DomainError);  // no a
  h.a = Real(1.5, kBits);
  CHECK_NOTHROW(h.validate());
  CHECK(h.asc().a == 1.5);
  CHECK_FALSE(h.describe().empty());
}
