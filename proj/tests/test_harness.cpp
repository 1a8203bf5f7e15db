#include <doctest.h>

#include <algorithm>

#include <json.hpp>

#include "nextremal/errors.hpp"
#include "nextremal/harness.hpp"

using namespace nextremal;

namespace {

FamilyHandle sw(double q) {
  FamilyHandle h;
  h.family = Family::stieltjes_wigert;
  h.q = QParameter(Real(q, 256));
  return h;
}

}  // namespace

TEST_CASE("theorem ids and support table") {
  CHECK(theorem_ids().size() == 8);
  for (const auto& id : theorem_ids()) CHECK(supports(id, Family::stieltjes_wigert));
  CHECK(supports("E1.10", Family::quartic));
  CHECK_FALSE(supports("T3.1", Family::quartic));
  CHECK_FALSE(supports("P3.2i", Family::al_salam_carlitz));
}

TEST_CASE("usage errors") {
  PrecisionContext ctx;
  CHECK_THROWS_AS(verify("T9.9", sw(0.5), ctx), UsageError);
  FamilyHandle quartic;
  quartic.family = Family::quartic;
  CHECK_THROWS_AS(verify("T3.1", quartic, ctx), UsageError);
}

TEST_CASE("family model caches") {
  FamilyModel model(sw(0.5), PrecisionContext{});
  CHECK(model.default_t().has_value());
  const DiscreteMeasure& f1 = model.friedrichs();
  const DiscreteMeasure& f2 = model.friedrichs();
  CHECK(&f1 == &f2);
  CHECK(abs(model.friedrichs_value() - Real::parse("0.7112119049133975787211002780707692199111", 256)) <
        Real(1e-35, 256));
  DiscreteMeasure k = model.solution(ExtReal::infinity(256));
  CHECK(k.atom(0) == 0);
}

TEST_CASE("worked example passes and serializes") {
  PrecisionContext ctx;
  VerificationReport r = verify("E1.10", sw(0.5), ctx);
  CHECK(r.overall == Status::pass);
  CHECK_FALSE(r.runtime_seconds.has_value());
  for (const Check& c : r.checks) CHECK_MESSAGE(c.status == Status::pass, c.description);

  auto j = nlohmann::json::parse(report_to_json(r));
  CHECK(j["theorem_id"] == "E1.10");
  CHECK(j["overall"] == "pass");
  CHECK_FALSE(j.contains("runtime_seconds"));
  CHECK(j["checks"].size() == r.checks.size());

  std::string csv = report_to_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.checks.size() + 1));
}

TEST_CASE("identical runs give identical reports") {
  PrecisionContext ctx;
  auto a = report_to_json(verify("P3.2i", sw(0.5), ctx));
  auto b = report_to_json(verify("P3.2i", sw(0.5), ctx));
  CHECK(a == b);
}

TEST_CASE("runtime is reported only on request") {
  VerifyOptions opts;
  opts.include_runtime = true;
  VerificationReport r = verify("P3.2i", sw(0.5), PrecisionContext{}, opts);
  REQUIRE(r.runtime_seconds.has_value());
  CHECK(*r.runtime_seconds >= 0.0);
}

TEST_CASE("status names") {
  CHECK(to_string(Status::pass) == "pass");
  CHECK(to_string(Status::fail) == "fail");
  CHECK(to_string(Status::inconclusive) == "inconclusive");
}
