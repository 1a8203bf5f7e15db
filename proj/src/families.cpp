#include "nextremal/families.hpp"

#include <cmath>

#include "nextremal/errors.hpp"
#include "nextremal/roots.hpp"
#include "nextremal/series.hpp"

namespace nextremal {

namespace {

// Context for sums that must resolve every bit of the working precision.
PrecisionContext exact_sum_context(Bits bits) {
  PrecisionContext c;
  c.bits = bits;
  c.bits_ceiling = bits;
  c.max_terms = std::size_t{1} << 16;
  c.tail_tol = 1e-300;
  return c;
}

// j pi / sinh(j pi)
Real quartic_weight(long j, const Real& pi) {
  Real x = pi * j;
  return x / sinh(x);
}

// sum_{k >= first} mass(k) atom(k)^n for n < degrees.
template <class MassFn, class AtomFn>
std::vector<Real> series_tail(MassFn mass, AtomFn atom, std::size_t first, std::size_t degrees, Bits bits) {
  std::vector<Real> out;
  const PrecisionContext c = exact_sum_context(bits);
  for (std::size_t n = 0; n < degrees; ++n) {
    auto r = sum_series([&](std::size_t j) { return mass(first + j) * pow(atom(first + j), static_cast<long>(n)); }, c);
    // A tail that did not settle is unknown; stop the bounds here.
    if (!r.converged) break;
    out.push_back(abs(r.value) + r.tail_bound);
  }
  return out;
}

}  // namespace

QuarticConstants quartic_constants(Bits bits) {
  Real quarter = Real(1, bits) / 4;
  Real g = gamma(quarter);
  Real pi = Real::pi(bits);
  Real K0 = g * g / (4 * sqrt(pi));
  return {K0, 4 * pi / (K0 * K0)};
}

DiscreteMeasure quartic_friedrichs(std::size_t count, const PrecisionContext& ctx) {
  if (count < 1) throw DomainError("quartic_friedrichs needs count >= 1");
  const Bits bits = ctx.bits;
  const QuarticConstants qc = quartic_constants(bits);
  const Real pi = Real::pi(bits);
  auto mass = [&](std::size_t k) { return qc.normalizer * quartic_weight(2 * static_cast<long>(k) + 1, pi); };
  auto atom = [&](std::size_t k) { return pow(Real(2 * k + 1, bits), 4L); };
  std::vector<Real> atoms, masses;
  for (std::size_t k = 0; k < count; ++k) {
    atoms.push_back(atom(k));
    masses.push_back(mass(k));
  }
  return DiscreteMeasure(std::move(atoms), std::move(masses), series_tail(mass, atom, count, kFamilyTailDegrees, bits),
                         "quartic mu_F");
}

DiscreteMeasure quartic_krein(std::size_t count, const PrecisionContext& ctx) {
  if (count < 1) throw DomainError("quartic_krein needs count >= 1");
  const Bits bits = ctx.bits;
  const QuarticConstants qc = quartic_constants(bits);
  const Real pi = Real::pi(bits);
  auto mass = [&](std::size_t k) {
    return k == 0 ? qc.normalizer / 4 : qc.normalizer * quartic_weight(2 * static_cast<long>(k), pi);
  };
  auto atom = [&](std::size_t k) { return pow(Real(2 * k, bits), 4L); };
  std::vector<Real> atoms, masses;
  for (std::size_t k = 0; k < count; ++k) {
    atoms.push_back(atom(k));
    masses.push_back(mass(k));
  }
  return DiscreteMeasure(std::move(atoms), std::move(masses), series_tail(mass, atom, count, kFamilyTailDegrees, bits),
                         "quartic mu_K");
}

DiscreteMeasure quartic_mu_c(const Real& c, std::size_t count, const PrecisionContext& ctx) {
  if (count < 1) throw DomainError("quartic_mu_c needs count >= 1");
  const Bits bits = ctx.bits;
  const Real pi = Real::pi(bits);
  const Real cc = c.with_precision(bits);
  auto mass = [&](std::size_t k) {
    Real j(2 * k + 1, bits);
    return quartic_weight(2 * static_cast<long>(k) + 1, pi) * pow(j, cc);
  };
  auto atom = [&](std::size_t k) { return pow(Real(2 * k + 1, bits), 4L); };
  std::vector<Real> atoms, masses;
  for (std::size_t k = 0; k < count; ++k) {
    atoms.push_back(atom(k));
    masses.push_back(mass(k));
  }
  return DiscreteMeasure(std::move(atoms), std::move(masses), series_tail(mass, atom, count, kFamilyTailDegrees, bits),
                         "quartic mu_c, c=" + c.to_string(12));
}

MomentGenerator quartic_moments() {
  return [](std::size_t count, Bits bits) {
    const QuarticConstants qc = quartic_constants(bits);
    const Real pi = Real::pi(bits);
    const PrecisionContext c = exact_sum_context(bits);
    // Per atom: weight * atom^n for the current degree n, and the atom.
    std::vector<Real> weighted, atoms;
    std::vector<Real> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
      auto r = sum_series(
          [&](std::size_t k) {
            if (k == weighted.size()) {
              long j = 2 * static_cast<long>(k) + 1;
              atoms.push_back(pow(Real(j, bits), 4L));
              weighted.push_back(quartic_weight(j, pi) * pow(atoms.back(), static_cast<long>(n)));
            }
            return weighted[k];
          },
          c);
      out.push_back(qc.normalizer * r.value);
      for (std::size_t k = 0; k < weighted.size(); ++k) weighted[k] *= atoms[k];
    }
    return out;
  };
}

AscParameters::AscParameters(Real a_value, QParameter q_value) : a(std::move(a_value)), q(std::move(q_value)) {
  if (!(a > 1) || !(a * q.value() < 1)) {
    throw DomainError("Al-Salam-Carlitz needs 1 < a < 1/q, got a=" + a.to_string(17) + " q=" + q.value().to_string(17));
  }
}

Bits asc_bits(const AscParameters& p, std::size_t count, Bits requested) {
  double need = static_cast<double>(count) * p.q.log2_inverse() + 64.0;
  Bits b = std::max<Bits>(requested, static_cast<Bits>(std::ceil(need)));
  return (b + 63) / 64 * 64;
}

namespace {

// Masses w_k with w_0 = (c q;q)_inf and
// w_k = w_{k-1} c^{-1}... expressed through the ratio callback.
struct AscSeries {
  Real first;
  std::function<Real(std::size_t)> ratio;  // w_k / w_{k-1}, k >= 1
};

std::vector<Real> asc_weights(const AscSeries& s, std::size_t count) {
  std::vector<Real> w{s.first};
  for (std::size_t k = 1; k < count; ++k) w.push_back(w.back() * s.ratio(k));
  return w;
}

AscSeries asc_friedrichs_series(const AscParameters& p, Bits bits) {
  const Real q = p.q.at(bits);
  const Real a = p.a.with_precision(bits);
  QParameter qq(q);
  Real first = qpochhammer(q / a, qq, infinite_order);
  return {first, [q, a](std::size_t k) {
            Real qk = pow(q, static_cast<long>(k));
            return pow(q, 2 * static_cast<long>(k) - 1) / (a * (1 - qk / a) * (1 - qk));
          }};
}

AscSeries asc_krein_series(const AscParameters& p, Bits bits) {
  const Real q = p.q.at(bits);
  const Real a = p.a.with_precision(bits);
  QParameter qq(q);
  Real first = qpochhammer(a * q, qq, infinite_order);
  return {first, [q, a](std::size_t k) {
            Real qk = pow(q, static_cast<long>(k));
            return a * pow(q, 2 * static_cast<long>(k) - 1) / ((1 - a * qk) * (1 - qk));
          }};
}

DiscreteMeasure asc_measure(const AscSeries& series, const std::function<Real(std::size_t)>& atom, std::size_t count,
                            Bits bits, std::string label) {
  std::vector<Real> w = asc_weights(series, count);
  std::vector<Real> atoms;
  for (std::size_t k = 0; k < count; ++k) atoms.push_back(atom(k));
  // Continue the weight recurrence beyond the stored atoms for the tail.
  std::vector<Real> tail;
  {
    const PrecisionContext c = exact_sum_context(bits);
    for (std::size_t n = 0; n < kFamilyTailDegrees; ++n) {
      Real wk = w.back();
      auto r = sum_series(
          [&](std::size_t j) {
            wk *= series.ratio(count + j);
            return wk * pow(atom(count + j), static_cast<long>(n));
          },
          c);
      if (!r.converged) break;
      tail.push_back(abs(r.value) + r.tail_bound);
    }
  }
  // Reverse atoms so they increase: q^{-k} grows with k, so they already do.
  return DiscreteMeasure(std::move(atoms), std::move(w), std::move(tail), std::move(label));
}

}  // namespace

DiscreteMeasure asc_friedrichs(const AscParameters& p, std::size_t count, const PrecisionContext& ctx) {
  if (count < 1) throw DomainError("asc_friedrichs needs count >= 1");
  const Bits bits = asc_bits(p, count + 64, ctx.bits);
  const Real q = p.q.at(bits);
  const Real a = p.a.with_precision(bits);
  auto atom = [&](std::size_t k) { return a / pow(q, static_cast<long>(k)) - 1; };
  return asc_measure(asc_friedrichs_series(p, bits), atom, count, bits, "Al-Salam-Carlitz mu_F");
}

DiscreteMeasure asc_krein(const AscParameters& p, std::size_t count, const PrecisionContext& ctx) {
  if (count < 1) throw DomainError("asc_krein needs count >= 1");
  const Bits bits = asc_bits(p, count + 64, ctx.bits);
  const Real q = p.q.at(bits);
  auto atom = [&](std::size_t k) { return 1 / pow(q, static_cast<long>(k)) - 1; };
  return asc_measure(asc_krein_series(p, bits), atom, count, bits, "Al-Salam-Carlitz mu_K");
}

Real asc_F(const AscParameters& p, const PrecisionContext& ctx) {
  const Bits bits = ctx.bits;
  const Real q = p.q.at(bits);
  const Real a = p.a.with_precision(bits);
  QParameter qq(q);
  Real poch(1, bits);  // (q;q)_k
  Real qk(1, bits);    // q^k
  auto r = sum_series(
      [&](std::size_t k) {
        if (k > 0) {
          qk *= q;
          poch *= 1 - qk;
        }
        return qk / ((a - qk) * poch);
      },
      exact_sum_context(bits));
  return qpochhammer(q, qq, infinite_order) * r.value;
}

MomentGenerator asc_moments(const AscParameters& p) {
  return [p](std::size_t count, Bits bits) {
    const Bits work = asc_bits(p, 2 * count + 64, bits);
    const AscSeries series = asc_krein_series(p, work);
    const Real q = p.q.at(work);
    const PrecisionContext c = exact_sum_context(work);
    std::vector<Real> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
      Real w = series.first;
      Real x = Real::zero(work);  // q^{-k} - 1
      auto r = sum_series(
          [&](std::size_t k) {
            if (k > 0) {
              w *= series.ratio(k);
              x = 1 / pow(q, static_cast<long>(k)) - 1;
            }
            return n == 0 ? w : w * pow(x, static_cast<long>(n));
          },
          c);
      out.push_back(r.value.with_precision(bits));
    }
    return out;
  };
}

Real sw_density(const Real& x, const QParameter& q) {
  if (!(x > 0)) throw DomainError("the Stieltjes-Wigert density needs x > 0");
  const Bits bits = std::max(x.precision(), q.value().precision());
  const Real qb = q.at(bits);
  const Real L = -log(qb);
  const Real lx = log(x.with_precision(bits));
  Real pref = pow(qb, Real(0.125, bits)) / sqrt(2 * Real::pi(bits) * L);
  return pref / sqrt(x.with_precision(bits)) * exp(-(lx * lx) / (2 * L));
}

Real sw_moment(std::size_t n, const QParameter& q) {
  const long e = static_cast<long>(n * (n + 1) / 2);
  return pow(q.value(), -e);
}

Real sw_p(std::size_t n, const Real& x, const QParameter& q) {
  const Bits out_bits = std::max(x.precision(), q.value().precision());
  const Bits bits = out_bits + phi_guard_bits(x, q) + 16;
  const Real qb = q.at(bits);
  const Real xb = x.with_precision(bits);
  const long nn = static_cast<long>(n);
  Real term(1, bits);
  Real sum(1, bits);
  for (long k = 1; k <= nn; ++k) {
    term *= -xb;
    term *= pow(qb, 2 * k - 1) * (1 - pow(qb, nn - k + 1)) / (1 - pow(qb, k));
    sum += term;
  }
  QParameter qq(qb);
  Real pref = sqrt(pow(qb, nn) / qpochhammer(qb, qq, n));
  if (n % 2 == 1) pref = -pref;
  return (pref * sum).with_precision(out_bits);
}

Real sw_p_smallest_zero(std::size_t n, const QParameter& q, const PrecisionContext& ctx) {
  if (n < 1) throw DomainError("p_0 has no zeros");
  const Bits bits = ctx.bits;
  const Real qb = q.at(bits);
  auto f = [&](const Real& x) { return sw_p(n, x, QParameter(qb)); };
  // Every zero is positive; sample geometrically from well below the first.
  const Real step = pow(qb, Real(-1.0 / 16.0, bits));
  Real x = ldexp(Real(1, bits), -30);
  Real fx = f(x);
  for (int i = 0; i < 100000; ++i) {
    Real x2 = x * step;
    Real f2 = f(x2);
    if (f2.is_zero()) return x2;
    if (f2.sign() != fx.sign()) return bracketed_root(f, x, x2, ctx);
    x = std::move(x2);
    fx = std::move(f2);
  }
  throw InconclusiveError("sw_p_smallest_zero: no sign change found");
}

MomentGenerator sw_moments(const QParameter& q) {
  return [q](std::size_t count, Bits bits) {
    const Real qb = q.at(bits);
    std::vector<Real> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) out.push_back(pow(qb, -static_cast<long>(n * (n + 1) / 2)));
    return out;
  };
}

RecurrenceCoefficients sw_recurrence(const QParameter& q, std::size_t length, const PrecisionContext& ctx) {
  MomentSequence s(sw_moments(q), 2 * length + 1, ctx.bits, MomentSource::closed_form);
  return recurrence_from_moments(s, length - 1, ctx);
}

std::string to_string(SwSolution s) {
  switch (s) {
    case SwSolution::friedrichs:
      return "friedrichs";
    case SwSolution::t_one:
      return "t_one";
    case SwSolution::krein:
      return "krein";
  }
  return "unknown";
}

SwWorkspace sw_workspace(const QParameter& q, std::size_t count, const Real& x_max, Bits requested) {
  Bits bits = requested + phi_guard_bits(x_max, q) + 64;
  bits = (bits + 63) / 64 * 64;
  return {2 * count + 80, bits};
}

DiscreteMeasure sw_nextremal(SwSolution which, const PhiZeroTable& zeros, const RecurrenceCoefficients& rc,
                             const PrecisionContext& ctx) {
  const Bits bits = ctx.bits;
  const Real q = zeros.q.at(bits);
  std::vector<Real> atoms;
  std::string label;
  switch (which) {
    case SwSolution::friedrichs:
      for (const Real& x : zeros.zeros) atoms.push_back(x.with_precision(bits));
      label = "Stieltjes-Wigert mu_F";
      break;
    case SwSolution::t_one:
      for (const Real& x : zeros.zeros) atoms.push_back(q * x.with_precision(bits));
      label = "Stieltjes-Wigert mu_1";
      break;
    case SwSolution::krein:
      atoms.push_back(Real::zero(bits));
      for (const Real& x : zeros.zeros) atoms.push_back(x.with_precision(bits) / q);
      label = "Stieltjes-Wigert mu_K";
      break;
  }
  std::vector<Real> masses;
  for (const Real& x : atoms) masses.push_back(mass_at(rc, x, ctx).mass.with_precision(bits));

  // Heuristic tail: continue the last mass ratio and atom ratio geometrically.
  std::vector<Real> tail;
  const std::size_t m = atoms.size();
  if (m >= 2 && atoms[m - 2] > 0) {
    Real mass_ratio = masses[m - 1] / masses[m - 2];
    Real atom_ratio = atoms[m - 1] / atoms[m - 2];
    Real term = masses[m - 1];
    for (std::size_t n = 0; n < kFamilyTailDegrees; ++n) {
      Real r = mass_ratio * pow(atom_ratio, static_cast<long>(n));
      if (!(r < 0.5)) break;
      tail.push_back(term * r / (1 - r));
      term *= atoms[m - 1];
    }
  }
  return DiscreteMeasure(std::move(atoms), std::move(masses), std::move(tail), std::move(label));
}

DiscreteMeasure sw_nextremal(SwSolution which, const QParameter& q, std::size_t count, const PrecisionContext& ctx) {
  PhiZeroTable zeros = phi_zeros(q, count, ctx);
  const Real x_max = zeros.zeros.back() / q.at(ctx.bits);
  SwWorkspace ws = sw_workspace(q, count, x_max, ctx.bits);
  RecurrenceCoefficients rc = sw_recurrence(q, ws.length, ctx.with_bits(ws.bits));
  return sw_nextremal(which, zeros, rc, ctx);
}

std::string to_string(Family f) {
  switch (f) {
    case Family::quartic:
      return "quartic";
    case Family::al_salam_carlitz:
      return "al_salam_carlitz";
    case Family::stieltjes_wigert:
      return "stieltjes_wigert";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "quartic") return Family::quartic;
  if (name == "al_salam_carlitz" || name == "asc") return Family::al_salam_carlitz;
  if (name == "stieltjes_wigert" || name == "sw") return Family::stieltjes_wigert;
  throw UsageError("unknown family '" + name + "' (expected quartic, al_salam_carlitz or stieltjes_wigert)");
}

void FamilyHandle::validate() const {
  if (atom_count < 1) throw DomainError("atom_count must be positive");
  switch (family) {
    case Family::quartic:
      if (a || q) throw DomainError("the quartic family takes no parameters");
      break;
    case Family::al_salam_carlitz:
      if (!a || !q) throw DomainError("Al-Salam-Carlitz needs a and q");
      (void)asc();
      break;
    case Family::stieltjes_wigert:
      if (!q) throw DomainError("Stieltjes-Wigert needs q");
      if (a) throw DomainError("Stieltjes-Wigert takes no parameter a");
      break;
  }
}

AscParameters FamilyHandle::asc() const {
  if (!a || !q) throw DomainError("Al-Salam-Carlitz needs a and q");
  return AscParameters(*a, *q);
}

std::string FamilyHandle::describe() const {
  std::string s = to_string(family);
  if (q) s += " q=" + q->value().to_string(17);
  if (a) s += " a=" + a->to_string(17);
  return s;
}

}  // namespace nextremal
