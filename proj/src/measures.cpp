#include "nextremal/measures.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "nextremal/errors.hpp"

namespace nextremal {

DiscreteMeasure::DiscreteMeasure(std::vector<Real> atoms, std::vector<Real> masses,
                                 std::vector<Real> tail_moment_bounds, std::string label)
    : atoms_(std::move(atoms)), masses_(std::move(masses)), tail_(std::move(tail_moment_bounds)),
      label_(std::move(label)) {
  if (atoms_.size() != masses_.size()) throw DomainError("measure needs one mass per atom");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(masses_[i] > 0)) throw DomainError("measure masses must be positive (index " + std::to_string(i) + ")");
    if (i > 0 && !(atoms_[i - 1] < atoms_[i])) {
      throw DomainError("measure atoms must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
  for (const Real& b : tail_) {
    if (b < 0 || b.is_nan()) throw DomainError("tail bounds must be nonnegative");
  }
}

DiscreteMeasure DiscreteMeasure::finite(std::vector<Real> atoms, std::vector<Real> masses, std::string label) {
  DiscreteMeasure m(std::move(atoms), std::move(masses), {}, std::move(label));
  m.finite_ = true;
  return m;
}

Bits DiscreteMeasure::precision() const {
  Bits b = 64;
  for (const Real& x : atoms_) b = std::max(b, x.precision());
  for (const Real& x : masses_) b = std::max(b, x.precision());
  return b;
}

Real DiscreteMeasure::tail_mass_bound() const {
  if (finite_) return Real::zero(precision());
  if (tail_.empty()) return Real::infinity(precision());
  return tail_.front();
}

std::optional<Real> DiscreteMeasure::tail_moment_bound(std::size_t n) const {
  if (finite_) return Real::zero(precision());
  if (n < tail_.size()) return tail_[n];
  return std::nullopt;
}

Real DiscreteMeasure::stored_mass() const {
  Real s = Real::zero(precision());
  for (const Real& m : masses_) s += m;
  return s;
}

DiscreteMeasure DiscreteMeasure::relabeled(std::string label) const {
  DiscreteMeasure m = *this;
  m.label_ = std::move(label);
  return m;
}

MomentValue moment(const DiscreteMeasure& m, std::size_t n) {
  std::optional<Real> bound = m.tail_moment_bound(n);
  if (!bound) {
    throw TailError("no tail bound for moment of degree " + std::to_string(n) + " of '" + m.label() + "'");
  }
  Real sum = Real::zero(m.precision());
  for (std::size_t i = 0; i < m.size(); ++i) sum.add_product(m.mass(i), pow(m.atom(i), static_cast<long>(n)));
  return {sum, *bound};
}

Real xi(const DiscreteMeasure& m) {
  if (m.empty()) throw DomainError("xi of an empty measure");
  return m.atom(0);
}

namespace {

// Builds a measure sharing the finiteness of `like`.
DiscreteMeasure rebuild(const DiscreteMeasure& like, std::vector<Real> atoms, std::vector<Real> masses,
                        std::vector<Real> tail, std::string label) {
  if (like.is_finite()) return DiscreteMeasure::finite(std::move(atoms), std::move(masses), std::move(label));
  return DiscreteMeasure(std::move(atoms), std::move(masses), std::move(tail), std::move(label));
}

}  // namespace

DiscreteMeasure translate(const DiscreteMeasure& m, const Real& a) {
  std::vector<Real> atoms;
  atoms.reserve(m.size());
  for (const Real& x : m.atoms()) atoms.push_back(x + a);
  std::vector<Real> tail;
  if (!m.is_finite() && !m.empty() && m.atoms().back() > 0) {
    // Omitted atoms x >= x_last > 0 satisfy |x + a| <= (1 + |a|/x_last) x.
    Real factor = 1 + abs(a) / m.atoms().back();
    for (std::size_t n = 0; n < m.tail_degrees(); ++n) tail.push_back(m.tail_moment_bounds()[n] * pow(factor, static_cast<long>(n)));
  } else if (!m.is_finite() && m.tail_degrees() > 0) {
    tail.push_back(m.tail_moment_bounds()[0]);
  }
  return rebuild(m, std::move(atoms), m.masses(), std::move(tail), m.label() + " shifted by " + a.to_string(12));
}

DensitySpec inverse_x(bool drop_zero) { return density::InverseX{drop_zero}; }

DensitySpec inv_one_plus_x2_pow(const Real& alpha) {
  if (alpha < 0 || alpha > 1) throw DomainError("(1+x^2)^{-alpha} needs alpha in [0, 1]");
  return density::OnePlusXSquaredPow{-alpha};
}

DensitySpec one_plus_x2_pow(const Real& delta) {
  if (delta < 0) throw DomainError("(1+x^2)^{delta} needs delta >= 0");
  return density::OnePlusXSquaredPow{delta};
}

DensitySpec x_minus_c(const Real& c) { return density::XMinusC{c}; }
DensitySpec x_pow(long k) { return density::XPowK{k}; }

std::string describe(const DensitySpec& d) {
  struct {
    std::string operator()(const density::InverseX&) const { return "x^-1"; }
    std::string operator()(const density::OnePlusXSquaredPow& p) const { return "(1+x^2)^" + p.exponent.to_string(6); }
    std::string operator()(const density::XMinusC& p) const { return "(x-" + p.c.to_string(12) + ")"; }
    std::string operator()(const density::XPowK& p) const { return "x^" + std::to_string(p.k); }
  } visitor;
  return std::visit(visitor, d);
}

namespace {

// Density value at x; nullopt means "drop this atom" (zero density).
struct DensityEval {
  const DensitySpec& spec;

  std::optional<Real> operator()(const Real& x) const {
    return std::visit([&](const auto& d) { return at(d, x); }, spec);
  }

  static std::optional<Real> at(const density::InverseX& d, const Real& x) {
    if (x.is_zero()) {
      if (d.drop_zero) return std::nullopt;
      throw DomainError("1/x is infinite at the atom 0; set drop_zero to discard it");
    }
    return 1 / x;
  }
  static std::optional<Real> at(const density::OnePlusXSquaredPow& d, const Real& x) {
    if (d.exponent.is_zero()) return Real(1, x.precision());
    return pow(1 + x * x, d.exponent);
  }
  static std::optional<Real> at(const density::XMinusC& d, const Real& x) {
    Real v = x - d.c;
    if (v.is_zero()) return std::nullopt;
    return v;
  }
  static std::optional<Real> at(const density::XPowK& d, const Real& x) {
    if (d.k == 0) return Real(1, x.precision());
    if (x.is_zero()) {
      if (d.k > 0) return std::nullopt;
      throw DomainError("x^" + std::to_string(d.k) + " is infinite at the atom 0");
    }
    return pow(x, d.k);
  }
};

// Bounds for the omitted tail after multiplying by the density, assuming
// the omitted atoms lie beyond the last stored one.
struct TailMap {
  const std::vector<Real>& tail;
  const Real& last;

  std::vector<Real> operator()(const density::InverseX&) const {
    std::vector<Real> out;
    if (!(last > 0)) return out;
    for (const Real& b : tail) out.push_back(b / last);
    return out;
  }
  std::vector<Real> operator()(const density::OnePlusXSquaredPow& d) const {
    std::vector<Real> out;
    if (d.exponent <= 0) {
      Real factor = d.exponent.is_zero() ? Real(1, last.precision()) : pow(1 + last * last, d.exponent);
      for (const Real& b : tail) out.push_back(b * factor);
      return out;
    }
    if (!(last >= 1)) return out;
    // (1+x^2)^d <= 2^d x^{2d} <= 2^d x^{ceil(2d)} for x >= 1.
    const std::size_t shift = static_cast<std::size_t>(std::ceil(2.0 * d.exponent.to_double()));
    Real factor = pow(Real(2, last.precision()), d.exponent);
    for (std::size_t n = 0; n + shift < tail.size(); ++n) out.push_back(tail[n + shift] * factor);
    return out;
  }
  std::vector<Real> operator()(const density::XMinusC& d) const {
    std::vector<Real> out;
    for (std::size_t n = 0; n + 1 < tail.size(); ++n) out.push_back(tail[n + 1] + abs(d.c) * tail[n]);
    return out;
  }
  std::vector<Real> operator()(const density::XPowK& d) const {
    std::vector<Real> out;
    if (d.k >= 0) {
      for (std::size_t n = 0; n + static_cast<std::size_t>(d.k) < tail.size(); ++n) out.push_back(tail[n + d.k]);
      return out;
    }
    if (!(last > 0)) return out;
    Real factor = pow(last, d.k);
    for (const Real& b : tail) out.push_back(b * factor);
    return out;
  }
};

}  // namespace

DiscreteMeasure apply_density(const DiscreteMeasure& m, const DensitySpec& d) {
  DensityEval eval{d};
  std::vector<Real> atoms, masses;
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::optional<Real> w = eval(m.atom(i));
    if (!w) continue;
    if (w->sign() < 0) {
      throw DomainError("density " + describe(d) + " is negative at the atom " + m.atom(i).to_string(17));
    }
    if (w->is_zero()) continue;
    atoms.push_back(m.atom(i));
    masses.push_back(m.mass(i) * *w);
  }
  std::vector<Real> tail;
  if (!m.is_finite() && !m.empty()) tail = std::visit(TailMap{m.tail_moment_bounds(), m.atoms().back()}, d);
  return rebuild(m, std::move(atoms), std::move(masses), std::move(tail), describe(d) + " " + m.label());
}

MomentSequence moment_sequence(const DiscreteMeasure& m, std::size_t count) {
  std::vector<Real> atoms = m.atoms(), masses = m.masses();
  MomentGenerator gen = [atoms, masses](std::size_t n, Bits bits) {
    std::vector<Real> out(n, Real::zero(bits));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      Real x = atoms[i].with_precision(bits);
      Real w = masses[i].with_precision(bits);
      for (std::size_t k = 0; k < n; ++k) {
        out[k] += w;
        w *= x;
      }
    }
    return out;
  };
  return MomentSequence(gen, count, m.precision(), MomentSource::from_measure);
}

MomentSequence shifted_moment_sequence(const MomentSequence& s, const Real& t) {
  if (!(t > 0)) throw DomainError("shifted moment sequence needs t > 0");
  std::vector<Real> v;
  v.reserve(s.size() + 1);
  v.push_back(t);
  for (const Real& x : s.values()) v.push_back(x);
  return MomentSequence(std::move(v), MomentSource::transformed);
}

MomentSequence tilde_moment_sequence(const MomentSequence& s, const Real& c) {
  std::vector<Real> v;
  for (std::size_t n = 0; n + 1 < s.size(); ++n) v.push_back(s[n + 1] - c * s[n]);
  return MomentSequence(std::move(v), MomentSource::transformed);
}

DiscreteMeasure krein_completion(const DiscreteMeasure& m, const Real& t, const Real& F) {
  if (!(t > F)) throw DomainError("krein_completion needs t > F");
  for (const Real& x : m.atoms()) {
    if (x.is_zero()) throw ConflictError("krein_completion: the measure already has an atom at 0");
    if (x < 0) throw DomainError("krein_completion needs positive atoms");
  }
  std::vector<Real> atoms{Real::zero(m.precision())};
  std::vector<Real> masses{t - F};
  atoms.insert(atoms.end(), m.atoms().begin(), m.atoms().end());
  masses.insert(masses.end(), m.masses().begin(), m.masses().end());
  return rebuild(m, std::move(atoms), std::move(masses), m.tail_moment_bounds(),
                 "(t-F) delta_0 + " + m.label());
}

DeterminacyVerdict classify_measure(const DiscreteMeasure& m, std::size_t length, const PrecisionContext& ctx) {
  try {
    MomentSequence s = normalize(moment_sequence(m, 2 * length + 1));
    RecurrenceCoefficients rc = recurrence_from_moments(s, length - 1, ctx);
    return classify(rc, ctx);
  } catch (const InconclusiveError& e) {
    DeterminacyVerdict v;
    v.note = e.what();
    return v;
  }
}

DensityIndex density_index(const DiscreteMeasure& m, int k_max, const PrecisionContext& ctx, std::size_t length) {
  for (const Real& x : m.atoms()) {
    if (x < 0) throw DomainError("density_index needs atoms >= 0");
  }
  DensityIndex out;
  const DiscreteMeasure damped = apply_density(m, inv_one_plus_x2_pow(Real(1, m.precision())));
  bool seen_indeterminate = false;
  for (int k = 0; k <= k_max; ++k) {
    DeterminacyVerdict v = classify_measure(apply_density(damped, x_pow(k)), length, ctx);
    if (v.verdict == Verdict::determinate && seen_indeterminate) out.consistent = false;
    if (v.verdict == Verdict::indeterminate) seen_indeterminate = true;
    out.verdicts.push_back(std::move(v));
  }
  // The index is decided once the first non-determinate verdict is an
  // indeterminate one.
  for (int k = 0; k <= k_max; ++k) {
    Verdict v = out.verdicts[k].verdict;
    if (v == Verdict::determinate) continue;
    if (v == Verdict::indeterminate && k > 0) out.index = k - 1;
    break;
  }
  return out;
}

ABracket estimate_a_bracket(const DiscreteMeasure& m, const std::vector<double>& grid, const PrecisionContext& ctx,
                            std::size_t length) {
  ABracket out;
  std::vector<double> alphas = grid;
  std::sort(alphas.begin(), alphas.end());
  for (double alpha : alphas) {
    DensitySpec d = inv_one_plus_x2_pow(Real(alpha, m.precision()));
    out.grid.emplace_back(alpha, classify_measure(apply_density(m, d), length, ctx).verdict);
  }
  out.lo = 0.0;
  for (const auto& [alpha, v] : out.grid) {
    if (v != Verdict::indeterminate) break;
    out.lo = alpha;
  }
  out.hi = 1.0;
  for (auto it = out.grid.rbegin(); it != out.grid.rend(); ++it) {
    if (it->second != Verdict::determinate) break;
    out.hi = it->first;
  }
  return out;
}

std::string measure_to_json(const DiscreteMeasure& m, Bits bits) {
  nlohmann::json j;
  j["label"] = m.label();
  j["atoms"] = nlohmann::json::array();
  j["masses"] = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    j["atoms"].push_back(m.atom(i).with_precision(bits).to_string());
    j["masses"].push_back(m.mass(i).with_precision(bits).to_string());
  }
  j["tail_mass_bound"] = m.tail_mass_bound().with_precision(bits).to_string();
  j["precision_bits"] = bits;
  if (!m.is_finite()) {
    j["tail_moment_bounds"] = nlohmann::json::array();
    for (const Real& b : m.tail_moment_bounds()) j["tail_moment_bounds"].push_back(b.with_precision(bits).to_string());
  }
  return j.dump(2);
}

DiscreteMeasure measure_from_json(std::string_view text, Bits bits) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("measure JSON: ") + e.what());
  }
  auto reals = [&](const char* key) {
    std::vector<Real> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw DomainError(std::string("measure JSON: '") + key + "' must be an array");
    for (const auto& item : j[key]) {
      if (!item.is_string()) throw DomainError(std::string("measure JSON: '") + key + "' entries must be strings");
      out.push_back(Real::parse(item.get<std::string>(), bits));
    }
    return out;
  };
  if (!j.contains("atoms") || !j.contains("masses")) throw DomainError("measure JSON needs 'atoms' and 'masses'");
  if (j.contains("precision_bits") && j["precision_bits"].is_number_integer()) {
    bits = std::max<Bits>(bits, j["precision_bits"].get<Bits>());
  }
  std::vector<Real> atoms = reals("atoms"), masses = reals("masses"), tail = reals("tail_moment_bounds");
  std::string label = j.value("label", std::string("imported"));
  Real mass_bound = Real::parse(j.value("tail_mass_bound", std::string("0")), bits);
  if (tail.empty()) {
    if (mass_bound.is_zero()) return DiscreteMeasure::finite(std::move(atoms), std::move(masses), label);
    tail.push_back(mass_bound);
  }
  return DiscreteMeasure(std::move(atoms), std::move(masses), std::move(tail), label);
}

std::string measure_to_csv(const DiscreteMeasure& m) {
  std::ostringstream os;
  os << "atom,mass\n";
  for (std::size_t i = 0; i < m.size(); ++i) os << m.atom(i).to_string() << ',' << m.mass(i).to_string() << '\n';
  return os.str();
}

}  // namespace nextremal
