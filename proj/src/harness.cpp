#include "nextremal/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "nextremal/errors.hpp"
#include "nextremal/series.hpp"

namespace nextremal {

namespace {

constexpr std::size_t kAscRecurrenceLength = 80;
constexpr std::size_t kQuarticRecurrenceLength = 152;
constexpr Bits kQuarticRecurrenceBits = 2048;
// Classification needs kMeasureRecurrenceLength recovered coefficients that
// still look like the untruncated measure. Quartic moments of degree n are
// carried by atoms near k = 4n/pi, so that family needs many more atoms.
constexpr std::size_t kVerifyAtoms = 50;
constexpr std::size_t kQuarticVerifyAtoms = 160;
constexpr std::size_t kPointChecks = 8;
// The quartic recurrence resolves B and D only up to about 1e4.
constexpr std::size_t kQuarticPointChecks = 5;
constexpr std::size_t kMomentChecks = 7;

bool is_stieltjes_wigert(const FamilyHandle& h) { return h.family == Family::stieltjes_wigert; }

}  // namespace

FamilyModel::FamilyModel(FamilyHandle handle, PrecisionContext ctx) : handle_(std::move(handle)), ctx_(ctx) {
  handle_.validate();
  ctx_.validate();
}

MomentSequence FamilyModel::moments(std::size_t count) const {
  switch (handle_.family) {
    case Family::quartic:
      return MomentSequence(quartic_moments(), count, ctx_.bits, MomentSource::closed_form);
    case Family::al_salam_carlitz:
      return MomentSequence(asc_moments(handle_.asc()), count, ctx_.bits, MomentSource::closed_form);
    case Family::stieltjes_wigert:
      break;
  }
  return MomentSequence(sw_moments(*handle_.q), count, ctx_.bits, MomentSource::closed_form);
}

const PhiZeroTable& FamilyModel::sw_zeros() {
  if (!zeros_) zeros_ = phi_zeros(*handle_.q, handle_.atom_count, ctx_);
  return *zeros_;
}

const RecurrenceCoefficients& FamilyModel::recurrence() {
  if (rc_) return *rc_;
  switch (handle_.family) {
    case Family::quartic: {
      const Bits bits = std::max(ctx_.bits, kQuarticRecurrenceBits);
      MomentSequence s(quartic_moments(), 2 * kQuarticRecurrenceLength + 1, bits, MomentSource::closed_form);
      rc_ = recurrence_from_moments(s, kQuarticRecurrenceLength - 1, ctx_.with_bits(bits));
      break;
    }
    case Family::al_salam_carlitz:
      rc_ = recurrence_from_moments(moments(2 * kAscRecurrenceLength + 1), kAscRecurrenceLength - 1, ctx_);
      break;
    case Family::stieltjes_wigert: {
      const QParameter& q = *handle_.q;
      const Real x_max = sw_zeros().zeros.back() / q.at(ctx_.bits);
      const SwWorkspace ws = sw_workspace(q, handle_.atom_count, x_max, ctx_.bits);
      rc_ = sw_recurrence(q, ws.length, ctx_.with_bits(ws.bits));
      break;
    }
  }
  return *rc_;
}

Real FamilyModel::friedrichs_value() {
  if (F_) return *F_;
  const Bits bits = ctx_.bits;
  switch (handle_.family) {
    case Family::quartic: {
      // int dmu_F / x, summed over the atoms (2k+1)^4.
      const QuarticConstants qc = quartic_constants(bits);
      const Real pi = Real::pi(bits);
      PrecisionContext c = ctx_;
      c.tail_tol = 1e-300;
      auto r = sum_series(
          [&](std::size_t k) {
            Real j(2 * static_cast<long>(k) + 1, bits);
            Real x = pi * j;
            return x / sinh(x) / pow(j, 4L);
          },
          c);
      F_ = qc.normalizer * r.value;
      break;
    }
    case Family::al_salam_carlitz:
      F_ = asc_F(handle_.asc(), ctx_);
      break;
    case Family::stieltjes_wigert: {
      const Real q = handle_.q->at(bits);
      F_ = 1 - qpochhammer(q, QParameter(q), infinite_order);
      break;
    }
  }
  return *F_;
}

std::optional<Real> FamilyModel::default_t() const {
  if (is_stieltjes_wigert(handle_)) return Real(1, ctx_.bits);
  return std::nullopt;
}

const DiscreteMeasure& FamilyModel::friedrichs() {
  if (friedrichs_) return *friedrichs_;
  const std::size_t n = handle_.atom_count;
  switch (handle_.family) {
    case Family::quartic:
      friedrichs_ = quartic_friedrichs(n, ctx_);
      break;
    case Family::al_salam_carlitz:
      friedrichs_ = asc_friedrichs(handle_.asc(), n, ctx_);
      break;
    case Family::stieltjes_wigert:
      friedrichs_ = sw_nextremal(SwSolution::friedrichs, sw_zeros(), recurrence(), ctx_);
      break;
  }
  return *friedrichs_;
}

const DiscreteMeasure& FamilyModel::krein() {
  if (krein_) return *krein_;
  const std::size_t n = handle_.atom_count;
  switch (handle_.family) {
    case Family::quartic:
      krein_ = quartic_krein(n, ctx_);
      break;
    case Family::al_salam_carlitz:
      krein_ = asc_krein(handle_.asc(), n, ctx_);
      break;
    case Family::stieltjes_wigert:
      krein_ = sw_nextremal(SwSolution::krein, sw_zeros(), recurrence(), ctx_);
      break;
  }
  return *krein_;
}

DiscreteMeasure FamilyModel::solution(const ExtReal& t) {
  if (t.infinite) return krein();
  const Real F = friedrichs_value();
  const Real tol = ctx_.tolerance() * max(Real(1, ctx_.bits), abs(F));
  if (abs(t.value - F) <= tol) return friedrichs();
  if (is_stieltjes_wigert(handle_) && t.value == 1) {
    if (!t_one_) t_one_ = sw_nextremal(SwSolution::t_one, sw_zeros(), recurrence(), ctx_);
    return *t_one_;
  }
  // Zeros of B + tD up to the extent of the stored Krein atoms; below F(s)
  // one atom is negative.
  const DiscreteMeasure& K = krein();
  const Real hi = K.atom(K.size() - 1);
  const Real lo = t.value < F ? -hi : Real::zero(ctx_.bits);
  const RecurrenceCoefficients& rc = recurrence();
  std::optional<Real> factor;
  if (handle_.family != Family::quartic) factor = Real(1.05, ctx_.bits);
  SupportScan scan = nextremal_support(rc, t, lo, hi, ctx_, factor);
  if (!scan.inconclusive.empty()) throw InconclusiveError("support scan for t=" + t.to_string(12) + " hit noise");
  std::vector<Real> atoms, masses;
  for (const Real& x : scan.zeros) {
    if (atoms.size() == handle_.atom_count) break;
    masses.push_back(mass_at(rc, x, ctx_).mass.with_precision(ctx_.bits));
    atoms.push_back(x.with_precision(ctx_.bits));
  }
  return DiscreteMeasure(std::move(atoms), std::move(masses), {}, "mu_t, t=" + t.to_string(17));
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids{"T3.1", "C3.2", "T3.4", "T3.5", "T3.6/C3.7", "P1.6", "E1.10", "P3.2i"};
  return ids;
}

bool supports(const std::string& id, Family family) {
  if (family == Family::stieltjes_wigert) return true;
  // The other families offer no finite-t solution besides F(s).
  return id == "C3.2" || id == "T3.5" || id == "P1.6" || id == "E1.10";
}

namespace {

std::string fmt(const Real& x) { return x.to_string(17); }
std::string fmt(const ExtReal& x) { return x.to_string(17); }
std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

class CheckList {
 public:
  explicit CheckList(Bits bits) : bits_(bits) {}

  void add(std::string description, std::string expected, std::string observed, std::string tolerance, Status s) {
    checks_.push_back({std::move(description), std::move(expected), std::move(observed), std::move(tolerance), s});
  }

  void pass_if(std::string description, std::string expected, std::string observed, bool ok) {
    add(std::move(description), std::move(expected), std::move(observed), "exact", ok ? Status::pass : Status::fail);
  }

  /// |observed - expected| <= tol * max(1, |expected|) + slack.
  void close(std::string description, const Real& expected, const Real& observed, double tol,
             const Real& slack = Real::zero(64)) {
    Real diff = abs(observed - expected);
    Real bound = Real(tol, bits_) * max(Real(1, bits_), abs(expected)) + slack;
    add(std::move(description), fmt(expected), fmt(observed) + " (diff " + diff.to_string(3) + ")", fmt(tol),
        diff <= bound ? Status::pass : Status::fail);
  }

  void verdict(std::string description, Verdict expected, const DeterminacyVerdict& v) {
    std::string observed = to_string(v.verdict) + " (ratio " + fmt(v.ratio) + ", exponent " + fmt(v.power_exponent) +
                           ", margin " + fmt(v.margin) + ")";
    Status s = v.verdict == Verdict::inconclusive ? Status::inconclusive
               : v.verdict == expected            ? Status::pass
                                                  : Status::fail;
    add(std::move(description), to_string(expected), std::move(observed), "margin reported raw", s);
  }

  /// Runs a check body; numerical trouble becomes an inconclusive or a
  /// failed entry instead of aborting the report.
  void guarded(const std::string& description, const std::function<void()>& body) {
    try {
      body();
    } catch (const InconclusiveError& e) {
      add(description, "-", e.what(), "-", Status::inconclusive);
    } catch (const DivergenceError& e) {
      add(description, "-", e.what(), "-", Status::inconclusive);
    } catch (const TailError& e) {
      add(description, "-", e.what(), "-", Status::inconclusive);
    } catch (const Error& e) {
      add(description, "-", e.what(), "-", Status::fail);
    }
  }

  std::vector<Check> take() { return std::move(checks_); }

 private:
  Bits bits_;
  std::vector<Check> checks_;
};

Real inverse_moment(const DiscreteMeasure& m) {
  Real s = Real::zero(m.precision());
  for (std::size_t i = 0; i < m.size(); ++i) s += m.mass(i) / m.atom(i);
  return s;
}

/// The first n atoms of each strictly alternate.
bool interlace(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::vector<std::pair<Real, int>> merged;
  for (std::size_t i = 0; i < n; ++i) {
    merged.emplace_back(a.atom(i), 0);
    merged.emplace_back(b.atom(i), 1);
  }
  std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 1; i < merged.size(); ++i) {
    if (merged[i].second == merged[i - 1].second || merged[i].first == merged[i - 1].first) return false;
  }
  return true;
}

std::string atom_list(const DiscreteMeasure& m, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < std::min(n, m.size()); ++i) s += (i ? ", " : "") + m.atom(i).to_string(8);
  return s;
}

void moment_checks(CheckList& out, const std::string& what, const DiscreteMeasure& m,
                   const std::function<Real(std::size_t)>& expected, std::size_t count, double tol) {
  for (std::size_t n = 0; n < count; ++n) {
    out.guarded(what + " moment " + std::to_string(n), [&] {
      MomentValue v = moment(m, n);
      out.close(what + " moment " + std::to_string(n), expected(n), v.value, tol, v.bound);
    });
  }
}

Real require_t(FamilyModel& model, const VerifyOptions& o) {
  if (o.t) return *o.t;
  if (auto t = model.default_t()) return *t;
  throw UsageError("this theorem needs a finite t > F(s)");
}

void check_t_above_F(FamilyModel& model, const Real& t) {
  if (!(t > model.friedrichs_value())) {
    throw UsageError("t must exceed F(s) = " + fmt(model.friedrichs_value()) + ", got " + fmt(t));
  }
}

void verify_T31(FamilyModel& model, const VerifyOptions& o, CheckList& out) {
  const PrecisionContext& ctx = model.context();
  const Real t = require_t(model, o);
  check_t_above_F(model, t);
  const Real F = model.friedrichs_value();
  MomentSequence s = model.moments(kMomentChecks);
  const DiscreteMeasure mu_t = model.solution(ExtReal(t));
  const DiscreteMeasure& mu_F = model.friedrichs();
  for (auto [label, m, total] : {std::tuple{"x^-1 mu_t", &mu_t, t}, std::tuple{"x^-1 mu_F", &mu_F, F}}) {
    out.guarded(std::string(label) + " moments", [&, label = label, m = m, total = total] {
      DiscreteMeasure shifted = apply_density(*m, inverse_x());
      moment_checks(
          out, label, shifted, [&](std::size_t n) { return n == 0 ? total : s[n - 1]; }, kMomentChecks,
          o.moment_tol);
    });
  }
  out.guarded("classify x^-1 mu_F", [&] {
    out.verdict("classify x^-1 mu_F", Verdict::determinate,
                classify_measure(apply_density(mu_F, inverse_x()), kMeasureRecurrenceLength, ctx));
  });
  out.guarded("classify x^-1 mu_t", [&] {
    out.verdict("classify x^-1 mu_t", Verdict::indeterminate,
                classify_measure(apply_density(mu_t, inverse_x()), kMeasureRecurrenceLength, ctx));
  });
  out.guarded("Krein completion total mass", [&] {
    DiscreteMeasure tau = krein_completion(apply_density(mu_F, inverse_x()), t, F);
    out.close("Krein completion (t-F) delta_0 + x^-1 mu_F has total mass t", t, moment(tau, 0).value, o.moment_tol,
              tau.tail_mass_bound());
  });
}

void verify_C32(FamilyModel& model, const VerifyOptions& o, CheckList& out) {
  const PrecisionContext& ctx = model.context();
  MomentSequence s = model.moments(kMomentChecks + 1);
  const DiscreteMeasure& mu_F = model.friedrichs();
  const DiscreteMeasure& mu_K = model.krein();
  for (auto [label, m] : {std::pair{"x mu_F", &mu_F}, std::pair{"x mu_K", &mu_K}}) {
    out.guarded(std::string(label) + " moments", [&, label = label, m = m] {
      DiscreteMeasure xm = apply_density(*m, x_pow(1));
      moment_checks(out, label, xm, [&](std::size_t n) { return s[n + 1]; }, kMomentChecks, o.moment_tol);
    });
  }
  out.guarded("xi(x mu_K) > xi(x mu_F)", [&] {
    Real k = xi(apply_density(mu_K, x_pow(1)));
    Real f = xi(apply_density(mu_F, x_pow(1)));
    out.pass_if("x mu_K has the larger smallest atom (Friedrichs solution of the shifted problem)",
                "> " + fmt(f), fmt(k), k > f);
  });
  std::vector<std::tuple<std::string, DiscreteMeasure, int>> indexed{{"mu_F", mu_F, 1}, {"mu_K", mu_K, 2}};
  if (auto t = o.t ? o.t : model.default_t()) indexed.emplace_back("mu_t", model.solution(ExtReal(*t)), 0);
  for (const auto& [label, m, expected] : indexed) {
    out.guarded("density index " + label, [&] {
      DensityIndex d = density_index(m, 4, ctx);
      std::string observed = d.index ? std::to_string(*d.index) : "undetermined";
      Status st = !d.index || !d.consistent ? Status::inconclusive
                  : *d.index == expected    ? Status::pass
                                            : Status::fail;
      out.add("density index of " + label, std::to_string(expected), observed, "exact", st);
    });
  }
}

void verify_T34(FamilyModel& model, const VerifyOptions& o, CheckList& out) {
  const Real t = require_t(model, o);
  check_t_above_F(model, t);
  const Real F = model.friedrichs_value();
  const ExtReal t_prime = o.t_prime ? *o.t_prime : ExtReal(F);
  if (t_prime.infinite || t_prime.value < F || t_prime.value > t) throw UsageError("t' must lie in [F(s), t]");
  MomentSequence s = model.moments(kMomentChecks + 1);
  const DiscreteMeasure mu_t = model.solution(ExtReal(t));
  const DiscreteMeasure mu_tp = model.solution(t_prime);
  const Real c_t = xi(mu_t);
  const Real c_tp = xi(mu_tp);
  out.pass_if("c_t' >= c_t", ">= " + fmt(c_t), fmt(c_tp), c_tp >= c_t);
  auto tilde = [&](const Real& c) { return [&s, c](std::size_t n) { return s[n + 1] - c * s[n]; }; };
  out.guarded("nu_t' moments", [&] {
    moment_checks(out, "(x - c_t) mu_t'", apply_density(mu_tp, x_minus_c(c_t)), tilde(c_t), kMomentChecks,
                  o.moment_tol);
  });
  out.guarded("nu_t moments", [&] {
    DiscreteMeasure nu = apply_density(mu_t, x_minus_c(c_t));
    out.pass_if("nu_t drops the atom c_t", std::to_string(mu_t.size() - 1), std::to_string(nu.size()),
                nu.size() + 1 == mu_t.size());
    moment_checks(out, "(x - c_t) mu_t", nu, tilde(c_t), kMomentChecks, o.moment_tol);
  });
  out.guarded("determinate case t = F(s)", [&] {
    const DiscreteMeasure& mu_F = model.friedrichs();
    const Real xi1 = xi(mu_F);
    moment_checks(out, "(x - xi_1) mu_F", apply_density(mu_F, x_minus_c(xi1)), tilde(xi1), kMomentChecks,
                  o.moment_tol);
  });
}

void verify_T35(FamilyModel& model, const VerifyOptions& o, CheckList& out) {
  const PrecisionContext& ctx = model.context();
  const DensitySpec half = inv_one_plus_x2_pow(Real(0.5, ctx.bits));
  out.guarded("classify (1+x^2)^-1/2 mu_F", [&] {
    out.verdict("classify (1+x^2)^-1/2 mu_F", Verdict::determinate,
                classify_measure(apply_density(model.friedrichs(), half), kMeasureRecurrenceLength, ctx));
  });
  if (auto t = o.t ? o.t : model.default_t()) {
    out.guarded("classify (1+x^2)^-1/2 mu_t", [&] {
      DiscreteMeasure m = model.solution(ExtReal(*t));
      out.verdict("classify (1+x^2)^-1/2 mu_t, t=" + fmt(*t), Verdict::indeterminate,
                  classify_measure(apply_density(m, half), kMeasureRecurrenceLength, ctx));
    });
  }
  out.guarded("classify (1+x^2)^-1/2 mu_K", [&] {
    DeterminacyVerdict v = classify_measure(apply_density(model.krein(), half), kMeasureRecurrenceLength, ctx);
    out.verdict("classify (1+x^2)^-1/2 mu_K", Verdict::indeterminate, v);
    if (v.verdict == Verdict::indeterminate) {
      Status st = v.stieltjes == StieltjesClass::det_s ? Status::pass : Status::fail;
      out.add("(1+x^2)^-1/2 mu_K is det(S)", to_string(StieltjesClass::det_s), to_string(v.stieltjes), "exact", st);
    }
  });
}

void verify_T36(FamilyModel& model, const VerifyOptions& o, CheckList& out) {
  const PrecisionContext& ctx = model.context();
  const Real t = require_t(model, o);
  check_t_above_F(model, t);
  const DiscreteMeasure mu_t = model.solution(ExtReal(t));
  out.guarded("Friedrichs solution of the (1+x^2)^-1/2 problem", [&] {
    DiscreteMeasure sigma = apply_density(mu_t, inv_one_plus_x2_pow(Real(0.5, ctx.bits)));
    const std::size_t L = kMeasureRecurrenceLength;
    MomentSequence s = normalize(moment_sequence(sigma, 2 * L + 1));
    RecurrenceCoefficients rc = recurrence_from_moments(s, L - 1, ctx);
    StieltjesClassification fp = friedrichs_parameter(rc, ctx);
    if (!fp.converged || fp.F.infinite) throw InconclusiveError("F of the transformed problem did not converge");
    const Real mass = sigma.stored_mass();
    out.close("recovered F equals int dsigma/x of the normalized transformed measure", inverse_moment(sigma) / mass,
              fp.F.value, o.transform_tol, fp.error_bound);
    ExtReal at_xi = parameter_of_point(rc, xi(sigma), ctx);
    Status st = !at_xi.infinite && abs(at_xi.value - fp.F.value) <= Real(o.transform_tol, ctx.bits) * max(Real(1, ctx.bits), abs(fp.F.value))
                    ? Status::pass
                    : Status::fail;
    out.add("parameter of the smallest transformed atom is the recovered F", fmt(fp.F), fmt(at_xi), fmt(o.transform_tol),
            st);
  });
  out.guarded("xi maximality", [&] {
    const Real f = xi(model.friedrichs());
    const Real k = xi(model.krein());
    const Real c = xi(mu_t);
    out.pass_if("xi(mu_F) exceeds xi(mu_t) and xi(mu_K)", "max", fmt(f) + " vs " + fmt(c) + ", " + fmt(k),
                f > c && f > k);
  });
}

void point_checks(CheckList& out, FamilyModel& model, const std::string& label, const DiscreteMeasure& m,
                  const ExtReal& t, double tol) {
  const PrecisionContext& ctx = model.context();
  const RecurrenceCoefficients& rc = model.recurrence();
  const std::size_t n = model.handle().family == Family::quartic ? kQuarticPointChecks : kPointChecks;
  for (std::size_t i = 0; i < std::min(n, m.size()); ++i) {
    const std::string d = "-B/D at atom " + std::to_string(i) + " of " + label;
    out.guarded(d, [&] {
      ExtReal got = parameter_of_point(rc, m.atom(i), ctx);
      bool ok = t.infinite ? got.infinite
                           : !got.infinite && abs(got.value - t.value) <= Real(tol, ctx.bits) * max(Real(1, ctx.bits), abs(t.value));
      out.add(d, fmt(t), fmt(got), fmt(tol), ok ? Status::pass : Status::fail);
    });
  }
}

void verify_P16(FamilyModel& model, const VerifyOptions& o, CheckList& out) {
  const PrecisionContext& ctx = model.context();
  const Real F = model.friedrichs_value();
  const DiscreteMeasure& mu_F = model.friedrichs();
  const DiscreteMeasure& mu_K = model.krein();
  std::vector<std::pair<std::string, DiscreteMeasure>> sols{{"mu_F", mu_F}, {"mu_K", mu_K}};
  std::optional<Real> t = o.t ? o.t : model.default_t();
  if (t) {
    check_t_above_F(model, *t);
    sols.emplace_back("mu_t", model.solution(ExtReal(*t)));
  }
  for (std::size_t i = 0; i < sols.size(); ++i) {
    for (std::size_t j = i + 1; j < sols.size(); ++j) {
      const auto& [la, a] = sols[i];
      const auto& [lb, b] = sols[j];
      out.pass_if("supports of " + la + " and " + lb + " interlace", "interlacing",
                  atom_list(a, 4) + " | " + atom_list(b, 4), interlace(a, b));
    }
  }
  point_checks(out, model, "mu_F", mu_F, ExtReal(F), o.transform_tol);
  point_checks(out, model, "mu_K", mu_K, ExtReal::infinity(ctx.bits), o.transform_tol);
  if (t) point_checks(out, model, "mu_t", sols.back().second, ExtReal(*t), o.transform_tol);
  if (model.handle().family != Family::quartic) {
    out.guarded("support of mu_F from the zeros of B + F D", [&] {
      const std::size_t n = std::min(kPointChecks, mu_F.size() - 1);
      const Real hi = (mu_F.atom(n - 1) + mu_F.atom(n)) / 2;
      SupportScan scan = nextremal_support(model.recurrence(), ExtReal(F), Real::zero(ctx.bits), hi, ctx,
                                           Real(1.05, ctx.bits));
      bool ok = scan.inconclusive.empty() && scan.zeros.size() == n;
      Real worst = Real::zero(ctx.bits);
      for (std::size_t k = 0; ok && k < n; ++k) worst = max(worst, abs(scan.zeros[k] - mu_F.atom(k)) / mu_F.atom(k));
      ok = ok && worst <= o.transform_tol;
      out.add("first " + std::to_string(n) + " zeros of B + F D are the atoms of mu_F", std::to_string(n) + " atoms",
              std::to_string(scan.zeros.size()) + " zeros, max relative deviation " + worst.to_string(3),
              fmt(o.transform_tol), ok ? Status::pass : Status::fail);
    });
  }
}

void verify_E110(FamilyModel& model, const VerifyOptions& o, CheckList& out) {
  const PrecisionContext& ctx = model.context();
  const Real F = model.friedrichs_value();
  const DiscreteMeasure& mu_F = model.friedrichs();
  out.close("int dmu_F/x = F(s)", F, inverse_moment(mu_F), o.transform_tol, mu_F.tail_mass_bound() / xi(mu_F));
  if (auto t = o.t ? o.t : model.default_t()) {
    check_t_above_F(model, *t);
    out.guarded("int dmu_t/x = t", [&] {
      DiscreteMeasure mu_t = model.solution(ExtReal(*t));
      out.close("int dmu_t/x = t", *t, inverse_moment(mu_t), o.transform_tol, mu_t.tail_mass_bound() / xi(mu_t));
    });
  }
  out.guarded("mu_K charges 0", [&] {
    Real k = xi(model.krein());
    out.pass_if("mu_K charges 0 (int dmu_K/x = inf)", "0", fmt(k), k.is_zero());
  });
  out.guarded("recovered F(s)", [&] {
    StieltjesClassification fp = friedrichs_parameter(model.recurrence(), ctx);
    if (!fp.converged || fp.F.infinite) throw InconclusiveError("alpha(s) did not converge");
    out.close("F(s) = -1/alpha(s) from the recurrence", F, fp.F.value, ctx.limit_tol, fp.error_bound);
  });
  const Complex z(Real(1, ctx.bits), Real(1, ctx.bits));
  for (auto [label, t] : {std::pair{std::string("mu_F"), ExtReal(F)}, std::pair{std::string("mu_K"),
                                                                               ExtReal::infinity(ctx.bits)}}) {
    out.guarded("Stieltjes transform of " + label, [&, label = label, t = t] {
      const DiscreteMeasure& m = t.infinite ? model.krein() : model.friedrichs();
      StieltjesCheck c = stieltjes_transform_check(model.recurrence(), t, z, m, ctx);
      Real bound = Real(o.transform_tol, ctx.bits) * abs(c.measure_side) + c.tail_bound;
      out.add("Stieltjes transform of " + label + " at z = 1+i equals -(A+tC)/(B+tD)", to_string(c.nevanlinna_side, 17),
              to_string(c.measure_side, 17) + " (residual " + c.residual.to_string(3) + ")", fmt(o.transform_tol),
              c.residual <= bound ? Status::pass : Status::fail);
    });
  }
}

void verify_P32(FamilyModel& model, const VerifyOptions& o, CheckList& out) {
  const PrecisionContext& ctx = model.context();
  const QParameter& q = *model.handle().q;
  const Real xi1 = phi_zeros(q, 1, ctx).zeros.front();
  std::vector<Real> gaps;
  std::string observed;
  for (std::size_t n : {5, 10, 20, 40}) {
    Real x = sw_p_smallest_zero(n, q, ctx);
    gaps.push_back(x - xi1);
    observed += (observed.empty() ? "" : ", ") + ("n=" + std::to_string(n) + ": " + x.to_string(12));
  }
  bool above = std::all_of(gaps.begin(), gaps.end(), [](const Real& g) { return g > 0; });
  bool shrinking = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) shrinking = shrinking && gaps[i] < gaps[i - 1];
  out.pass_if("smallest zero of p_n approaches xi_1 monotonically", "x_n1 > xi_1 = " + xi1.to_string(12) +
                                                                        ", gap decreasing",
              observed, above && shrinking);
  (void)o;
  out.close("smallest zero of p_40 is within 1e-4 of xi_1", xi1, xi1 + gaps.back(), 1e-4);
}

}  // namespace

VerificationReport verify(const std::string& id, FamilyModel& model, const VerifyOptions& options) {
  const auto& ids = theorem_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw UsageError("unknown theorem id '" + id + "'");
  const FamilyHandle& h = model.handle();
  if (!supports(id, h.family)) throw UsageError(id + " needs a finite-t solution; use stieltjes_wigert");
  const PrecisionContext& ctx = model.context();
  const auto start = std::chrono::steady_clock::now();

  CheckList out(ctx.bits);
  if (id == "T3.1") verify_T31(model, options, out);
  if (id == "C3.2") verify_C32(model, options, out);
  if (id == "T3.4") verify_T34(model, options, out);
  if (id == "T3.5") verify_T35(model, options, out);
  if (id == "T3.6/C3.7") verify_T36(model, options, out);
  if (id == "P1.6") verify_P16(model, options, out);
  if (id == "E1.10") verify_E110(model, options, out);
  if (id == "P3.2i") verify_P32(model, options, out);

  VerificationReport r;
  r.theorem_id = id;
  r.family = h.describe();
  r.bits = ctx.bits;
  r.checks = out.take();
  const bool any_fail =
      std::any_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.status == Status::fail; });
  const bool all_pass =
      !r.checks.empty() &&
      std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.status == Status::pass; });
  r.overall = any_fail ? Status::fail : all_pass ? Status::pass : Status::inconclusive;

  auto num = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  r.config = {{"theorem", id},
              {"family", to_string(h.family)},
              {"q", h.q ? fmt(h.q->value()) : ""},
              {"a", h.a ? fmt(*h.a) : ""},
              {"atom_count", std::to_string(h.atom_count)},
              {"t", options.t ? fmt(*options.t) : ""},
              {"t_prime", options.t_prime ? fmt(*options.t_prime) : ""},
              {"bits", std::to_string(ctx.bits)},
              {"max_terms", std::to_string(ctx.max_terms)},
              {"tail_tol", num(ctx.tail_tol)},
              {"bits_ceiling", std::to_string(ctx.bits_ceiling)},
              {"limit_tol", num(ctx.limit_tol)},
              {"moment_tol", num(options.moment_tol)},
              {"transform_tol", num(options.transform_tol)}};
  if (options.include_runtime) {
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

VerificationReport verify(const std::string& id, const FamilyHandle& family, const PrecisionContext& ctx,
                          const VerifyOptions& options) {
  FamilyHandle h = family;
  h.atom_count = std::max(h.atom_count, h.family == Family::quartic ? kQuarticVerifyAtoms : kVerifyAtoms);
  FamilyModel model(h, ctx);
  return verify(id, model, options);
}

std::string report_to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["theorem_id"] = r.theorem_id;
  j["family"] = r.family;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) config[k] = v;
  j["config"] = config;
  j["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : r.checks) {
    j["checks"].push_back({{"description", c.description},
                           {"expected", c.expected},
                           {"observed", c.observed},
                           {"tolerance", c.tolerance},
                           {"status", to_string(c.status)}});
  }
  j["overall"] = to_string(r.overall);
  j["bits"] = r.bits;
  if (r.runtime_seconds) j["runtime_seconds"] = *r.runtime_seconds;
  return j.dump(2) + "\n";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string report_to_csv(const VerificationReport& r) {
  std::string out = "theorem_id,family,bits,overall,description,expected,observed,tolerance,status\n";
  for (const Check& c : r.checks) {
    out += csv_field(r.theorem_id) + "," + csv_field(r.family) + "," + std::to_string(r.bits) + "," +
           to_string(r.overall) + "," + csv_field(c.description) + "," + csv_field(c.expected) + "," +
           csv_field(c.observed) + "," + csv_field(c.tolerance) + "," + to_string(c.status) + "\n";
  }
  return out;
}

}  // namespace nextremal
