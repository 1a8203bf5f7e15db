#include <doctest.h>

#include "nextremal/errors.hpp"
#include "nextremal/families.hpp"
#include "nextremal/nevanlinna.hpp"

using namespace nextremal;

namespace {

const Bits kBits = 256;

RecurrenceCoefficients hermite(std::size_t len) {
  std::vector<Real> a, b;
  for (std::size_t n = 0; n < len; ++n) {
    a.push_back(sqrt(Real(static_cast<long>(n + 1), kBits)));
    b.push_back(Real::zero(kBits));
  }
  return RecurrenceCoefficients(a, b);
}

const RecurrenceCoefficients& sw_half() {
  static const RecurrenceCoefficients rc = [] {
    PrecisionContext ctx;
    ctx.bits = 1024;
    return sw_recurrence(QParameter(Real(0.5, 1024)), 60, ctx);
  }();
  return rc;
}

// frozen: mpmath, 40 digits
const char* kXi1 = "1.248219163911908876269501045205122540929";
const char* kFriedrichs = "0.7112119049133975787211002780707692199111";

}  // namespace

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::determinate) == "determinate");
  CHECK(to_string(Verdict::indeterminate) == "indeterminate");
  CHECK(to_string(StieltjesClass::det_s) != to_string(StieltjesClass::indet_s));
}

TEST_CASE("Hermite recurrence is determinate") {
  PrecisionContext ctx;
  DeterminacyVerdict v = classify(hermite(200), ctx);
  CHECK(v.verdict == Verdict::determinate);
  CHECK(v.window_partial_sums.size() == kClassifyWindow);
}

TEST_CASE("Stieltjes-Wigert recurrence is indeterminate and indet(S)") {
  PrecisionContext ctx;
  DeterminacyVerdict v = classify(sw_half(), ctx);
  CHECK(v.verdict == Verdict::indeterminate);
  CHECK(v.ratio == doctest::Approx(0.5).epsilon(0.05));
  CHECK(v.margin > 10.0);
}

TEST_CASE("Nevanlinna matrix has determinant one") {
  PrecisionContext ctx;
  Complex z(Real(0.3, kBits), Real(1.2, kBits));
  auto abcd = nevanlinna_eval(sw_half(), z, ctx);
  Complex det = abcd.A * abcd.D - abcd.B * abcd.C;
  CHECK(abs(det - Real(1, kBits)) < Real(1e-20, kBits));
  CHECK_FALSE(abcd.extrapolated);

  auto at0 = nevanlinna_eval(sw_half(), Real::zero(kBits), ctx);
  CHECK(at0.A.is_zero());
  CHECK(at0.B == -1);
  CHECK(at0.C == 1);
  CHECK(at0.D.is_zero());
}

TEST_CASE("Nevanlinna series of a determinate problem are inconclusive") {
  PrecisionContext ctx;
  CHECK_THROWS_AS(nevanlinna_eval(hermite(100), Real(0.5, kBits), ctx), InconclusiveError);
}

TEST_CASE("Friedrichs parameter of Stieltjes-Wigert") {
  PrecisionContext ctx;
  auto f = friedrichs_parameter(sw_half(), ctx);
  REQUIRE(f.converged);
  REQUIRE_FALSE(f.F.infinite);
  CHECK(abs(f.F.value - Real::parse(kFriedrichs, kBits)) < Real(1e-10, kBits));
}

TEST_CASE("mass at the first Friedrichs atom equals 1/sum p_n^2") {
  PrecisionContext ctx;
  Real x = Real::parse(kXi1, kBits);
  MassEstimate m = mass_at(sw_half(), x, ctx);
  CHECK(m.mass > 0);
  CHECK(m.mass < 1);
  auto pq = eval_pq(sw_half(), x, 59);
  Real sum = Real::zero(kBits);
  for (const Real& p : pq.p) sum += p * p;
  CHECK(abs(m.mass - 1 / sum) < Real(1e-20, kBits));
  CHECK_THROWS_AS(mass_at(hermite(100), Real::zero(kBits), ctx), DivergenceError);
}

TEST_CASE("parameter of a support point") {
  PrecisionContext ctx;
  ExtReal t = parameter_of_point(sw_half(), Real::parse(kXi1, kBits), ctx);
  REQUIRE_FALSE(t.infinite);
  CHECK(abs(t.value - Real::parse(kFriedrichs, kBits)) < Real(1e-10, kBits));
  // q xi_1 supports mu_1
  ExtReal one = parameter_of_point(sw_half(), Real::parse(kXi1, kBits) / 2, ctx);
  REQUIRE_FALSE(one.infinite);
  CHECK(abs(one.value - 1) < Real(1e-10, kBits));
}

TEST_CASE("support of the Friedrichs solution") {
  PrecisionContext ctx;
  const ExtReal F(Real::parse(kFriedrichs, kBits));
  SupportScan s = nextremal_support(sw_half(), F, Real(0.5, kBits), Real(40, kBits), ctx, Real(1.05, kBits));
  REQUIRE(s.zeros.size() == 3);
  CHECK(abs(s.zeros[0] - Real::parse(kXi1, kBits)) < Real(1e-9, kBits));
  CHECK(abs(s.zeros[2] - Real::parse("29.02983037783066661260465896107273879339", kBits)) < Real(1e-7, kBits));
  CHECK(s.inconclusive.empty());
}
