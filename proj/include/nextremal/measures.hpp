#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nextremal/moments.hpp"
#include "nextremal/nevanlinna.hpp"
#include "nextremal/precision.hpp"

namespace nextremal {

/// Atoms x_0 < x_1 < ... with masses > 0, plus bounds on what the omitted
/// tail (atoms beyond the last stored one) contributes to each moment.
class DiscreteMeasure {
 public:
  /// tail_moment_bounds[n] bounds sum over omitted atoms of m |x|^n;
  /// entry 0 is the tail mass bound. Missing degrees are unknown.
  DiscreteMeasure(std::vector<Real> atoms, std::vector<Real> masses, std::vector<Real> tail_moment_bounds,
                  std::string label);
  /// A measure that is exactly the listed atoms.
  static DiscreteMeasure finite(std::vector<Real> atoms, std::vector<Real> masses, std::string label);

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Real& atom(std::size_t i) const { return atoms_[i]; }
  const Real& mass(std::size_t i) const { return masses_[i]; }
  const std::vector<Real>& atoms() const { return atoms_; }
  const std::vector<Real>& masses() const { return masses_; }
  const std::string& label() const { return label_; }
  bool is_finite() const { return finite_; }
  Real tail_mass_bound() const;
  /// Bound for degree n, or nullopt when unknown.
  std::optional<Real> tail_moment_bound(std::size_t n) const;
  /// Highest degree with a known tail bound (unbounded for finite measures).
  std::size_t tail_degrees() const { return tail_.size(); }
  const std::vector<Real>& tail_moment_bounds() const { return tail_; }
  Real stored_mass() const;
  Bits precision() const;

  DiscreteMeasure relabeled(std::string label) const;

 private:
  std::vector<Real> atoms_, masses_, tail_;
  std::string label_;
  bool finite_ = false;
};

struct MomentValue {
  Real value;
  Real bound;
};

/// sum m_i x_i^n with the tail bound. Throws TailError when the bound for
/// degree n is unknown.
MomentValue moment(const DiscreteMeasure& m, std::size_t n);

/// Smallest atom. Throws DomainError for an empty measure.
Real xi(const DiscreteMeasure& m);

/// Atoms shifted by a; masses unchanged.
DiscreteMeasure translate(const DiscreteMeasure& m, const Real& a);

namespace density {
/// 1/x. Atoms must be nonzero unless drop_zero is set.
struct InverseX {
  bool drop_zero = false;
};
/// (1+x^2)^exponent; exponent in [-1, 0] for the index tests, >= 0 for
/// growth weights.
struct OnePlusXSquaredPow {
  Real exponent;
};
/// x - c; atoms below c would get negative mass.
struct XMinusC {
  Real c;
};
/// x^k.
struct XPowK {
  long k = 0;
};
}  // namespace density

using DensitySpec = std::variant<density::InverseX, density::OnePlusXSquaredPow, density::XMinusC, density::XPowK>;

DensitySpec inverse_x(bool drop_zero = false);
/// (1+x^2)^{-alpha}, alpha in [0, 1].
DensitySpec inv_one_plus_x2_pow(const Real& alpha);
/// (1+x^2)^{delta}, delta >= 0.
DensitySpec one_plus_x2_pow(const Real& delta);
DensitySpec x_minus_c(const Real& c);
DensitySpec x_pow(long k);

std::string describe(const DensitySpec& d);

/// Multiplies each mass by the density at its atom. Atoms where the density
/// vanishes are removed; a negative density throws DomainError.
DiscreteMeasure apply_density(const DiscreteMeasure& m, const DensitySpec& d);

/// First `count` moments of the stored atoms (tail omitted), regenerable at
/// any precision.
MomentSequence moment_sequence(const DiscreteMeasure& m, std::size_t count);

/// (t, s_0, s_1, ...): the moments of x^{-1} d mu_t. Throws DomainError
/// unless t > 0.
MomentSequence shifted_moment_sequence(const MomentSequence& s, const Real& t);

/// s_{n+1} - c s_n, one entry shorter than s.
MomentSequence tilde_moment_sequence(const MomentSequence& s, const Real& c);

/// Adds an atom at 0 of mass t - F. Throws DomainError when t <= F or an
/// atom is negative and ConflictError when 0 is already an atom.
DiscreteMeasure krein_completion(const DiscreteMeasure& m, const Real& t, const Real& F);

/// Normalized moments of m -> recurrence of the given length -> classify.
/// Precision trouble in the recovery yields an inconclusive verdict.
DeterminacyVerdict classify_measure(const DiscreteMeasure& m, std::size_t length, const PrecisionContext& ctx);

inline constexpr std::size_t kMeasureRecurrenceLength = 40;

struct DensityIndex {
  /// Largest k with every verdict 0..k determinate and k+1 indeterminate;
  /// nullopt when an inconclusive verdict or k_max intervenes.
  std::optional<int> index;
  std::vector<DeterminacyVerdict> verdicts;
  /// False when a determinate verdict follows an indeterminate one.
  bool consistent = true;
};

/// Classifies (1+x^2)^{-1} x^k dm for k = 0..k_max.
DensityIndex density_index(const DiscreteMeasure& m, int k_max, const PrecisionContext& ctx,
                           std::size_t length = kMeasureRecurrenceLength);

struct ABracket {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::pair<double, Verdict>> grid;
};

/// [lo, hi] bracketing a(m) from verdicts of (1+x^2)^{-alpha} dm on the grid:
/// lo is the largest alpha below which every verdict is indeterminate, hi
/// the smallest alpha above which every verdict is determinate.
ABracket estimate_a_bracket(const DiscreteMeasure& m, const std::vector<double>& grid, const PrecisionContext& ctx,
                            std::size_t length = kMeasureRecurrenceLength);

std::string measure_to_json(const DiscreteMeasure& m, Bits bits);
DiscreteMeasure measure_from_json(std::string_view text, Bits bits);
std::string measure_to_csv(const DiscreteMeasure& m);

}  // namespace nextremal
