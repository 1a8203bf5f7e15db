#include <doctest.h>

#include "nextremal/errors.hpp"
#include "nextremal/families.hpp"
#include "nextremal/measures.hpp"

using namespace nextremal;

namespace {

const Bits kBits = 256;

Real r(double v) { return Real(v, kBits); }

DiscreteMeasure three_atoms() { return DiscreteMeasure::finite({r(1), r(2), r(4)}, {r(0.5), r(0.25), r(0.25)}, "three"); }

const DiscreteMeasure& sw_friedrichs() {
  static const DiscreteMeasure m = [] {
    PrecisionContext ctx;
    return sw_nextremal(SwSolution::friedrichs, QParameter(r(0.5)), 50, ctx);
  }();
  return m;
}

}  // namespace

TEST_CASE("moments of a finite measure") {
  DiscreteMeasure m = three_atoms();
  CHECK(m.is_finite());
  CHECK(m.stored_mass() == 1);
  CHECK(moment(m, 2).value == 5.5);
  CHECK(moment(m, 2).bound.is_zero());
  CHECK(xi(m) == 1);
  CHECK_THROWS_AS(xi(DiscreteMeasure::finite({}, {}, "empty")), DomainError);
}

TEST_CASE("unknown tail degree throws") {
  DiscreteMeasure m({r(1)}, {r(0.5)}, {r(0.5), r(1)}, "partial");
  CHECK_FALSE(m.is_finite());
  CHECK(m.tail_mass_bound() == 0.5);
  CHECK(moment(m, 1).bound == 1);
  CHECK_FALSE(m.tail_moment_bound(2).has_value());
  CHECK_THROWS_AS(moment(m, 2), TailError);
}

TEST_CASE("translation shifts atoms only") {
  DiscreteMeasure t = translate(three_atoms(), r(-1));
  CHECK(t.atom(0) == 0);
  CHECK(t.mass(2) == 0.25);
  CHECK(moment(t, 1).value == 1);
}

TEST_CASE("densities") {
  DiscreteMeasure m = three_atoms();
  DiscreteMeasure inv = apply_density(m, inverse_x());
  CHECK(inv.mass(0) == 0.5);
  CHECK(inv.mass(2) == 0.0625);

  DiscreteMeasure shifted = apply_density(m, x_minus_c(r(1)));
  CHECK(shifted.size() == 2);  // the atom at c is dropped
  CHECK(shifted.atom(0) == 2);

  CHECK_THROWS_AS(apply_density(m, x_minus_c(r(3))), DomainError);

  DiscreteMeasure cube = apply_density(m, x_pow(3));
  CHECK(cube.mass(2) == 16);

  DiscreteMeasure damped = apply_density(m, inv_one_plus_x2_pow(r(1)));
  CHECK(damped.mass(0) == 0.25);
  CHECK(apply_density(m, one_plus_x2_pow(r(0.5))).mass(1) > 0.55);

  DiscreteMeasure with_zero = DiscreteMeasure::finite({r(0), r(1)}, {r(1), r(1)}, "z");
  CHECK_THROWS_AS(apply_density(with_zero, inverse_x()), DomainError);
  CHECK(apply_density(with_zero, inverse_x(true)).size() == 1);
  CHECK(describe(inverse_x()) != describe(x_pow(1)));
}

TEST_CASE("shifted and tilde moment sequences") {
  MomentSequence s({r(1), r(2), r(5)}, MomentSource::closed_form);
  MomentSequence sh = shifted_moment_sequence(s, r(0.75));
  REQUIRE(sh.size() == 4);
  CHECK(sh[0] == 0.75);
  CHECK(sh[3] == 5);
  CHECK_THROWS_AS(shifted_moment_sequence(s, r(0)), DomainError);
  MomentSequence ti = tilde_moment_sequence(s, r(1));
  REQUIRE(ti.size() == 2);
  CHECK(ti[0] == 1);
  CHECK(ti[1] == 3);
}

TEST_CASE("Krein completion adds the missing mass at zero") {
  DiscreteMeasure m = three_atoms();
  DiscreteMeasure k = krein_completion(m, r(2), r(1.5));
  CHECK(k.size() == 4);
  CHECK(k.atom(0) == 0);
  CHECK(k.mass(0) == 0.5);
  CHECK_THROWS_AS(krein_completion(m, r(1), r(1.5)), DomainError);
  CHECK_THROWS_AS(krein_completion(k, r(2), r(1.5)), ConflictError);
}

TEST_CASE("serialization round trips") {
  DiscreteMeasure m = DiscreteMeasure::finite({r(1) / 3, Real::pi(kBits)}, {r(0.5), r(0.5)}, "pair");
  DiscreteMeasure back = measure_from_json(measure_to_json(m, kBits), kBits);
  REQUIRE(back.size() == 2);
  CHECK(back.atom(0) == m.atom(0));
  CHECK(back.mass(1) == m.mass(1));
  CHECK(back.label() == "pair");
  std::string csv = measure_to_csv(m);
  CHECK(csv.rfind("atom,mass\n", 0) == 0);
  CHECK_THROWS(measure_from_json("[1,2", kBits));
}

TEST_CASE("moment_sequence of stored atoms") {
  MomentSequence s = moment_sequence(three_atoms(), 4);
  CHECK(s[3] == 0.5 + 2 + 16);
  auto wide = s.values_at(4, 512);
  CHECK(wide[3] == 18.5);
}

TEST_CASE("classification of transformed measures") {
  PrecisionContext ctx;
  const DiscreteMeasure& mf = sw_friedrichs();
  DeterminacyVerdict v = classify_measure(mf, 40, ctx);
  CHECK(v.verdict == Verdict::indeterminate);
  DeterminacyVerdict inv = classify_measure(apply_density(mf, inverse_x()), 40, ctx);
  CHECK(inv.verdict == Verdict::determinate);
  CHECK(inv.margin >= 10.0);
}

TEST_CASE("density index of the Friedrichs solution is one") {
  PrecisionContext ctx;
  DensityIndex d = density_index(sw_friedrichs(), 3, ctx);
  REQUIRE(d.index.has_value());
  CHECK(*d.index == 1);
  CHECK(d.consistent);
}

TEST_CASE("bracket for the damping exponent is ordered") {
  PrecisionContext ctx;
  ABracket b = estimate_a_bracket(sw_friedrichs(), {0.0, 0.5, 1.0}, ctx);
  CHECK(b.lo <= b.hi);
  CHECK(b.grid.size() == 3);
}
