#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "nextremal/measures.hpp"
#include "nextremal/moments.hpp"
#include "nextremal/qcalc.hpp"

namespace nextremal {

// ---- quartic rates -------------------------------------------------------

struct QuarticConstants {
  /// Gamma(1/4)^2 / (4 sqrt(pi))
  Real K0;
  /// 4 pi / K0^2
  Real normalizer;
};

QuarticConstants quartic_constants(Bits bits);

/// Degrees with tail moment bounds attached to family measures by default.
inline constexpr std::size_t kFamilyTailDegrees = 24;

/// Atoms (2k+1)^4, k < count, masses normalizer (2k+1) pi / sinh((2k+1) pi).
DiscreteMeasure quartic_friedrichs(std::size_t count, const PrecisionContext& ctx);
/// normalizer/4 at 0, then atoms (2k)^4, 1 <= k < count, masses
/// normalizer 2k pi / sinh(2k pi).
DiscreteMeasure quartic_krein(std::size_t count, const PrecisionContext& ctx);
/// Unnormalized: atoms (2k+1)^4 with masses (2k+1)^{1+c} pi / sinh((2k+1) pi).
DiscreteMeasure quartic_mu_c(const Real& c, std::size_t count, const PrecisionContext& ctx);
/// Moments of the quartic problem, each summed until its tail is negligible.
MomentGenerator quartic_moments();

// ---- Al-Salam-Carlitz ----------------------------------------------------

/// 0 < q < 1 < a < 1/q.
struct AscParameters {
  Real a;
  QParameter q;

  AscParameters(Real a_value, QParameter q_value);
};

/// Precision needed to resolve atoms a q^{-k} - 1 for k < count.
Bits asc_bits(const AscParameters& p, std::size_t count, Bits requested);

/// Atoms a q^{-k} - 1 with masses (q/a;q)_inf a^{-k} q^{k^2} / ((q/a;q)_k (q;q)_k).
DiscreteMeasure asc_friedrichs(const AscParameters& p, std::size_t count, const PrecisionContext& ctx);
/// Atoms q^{-k} - 1 with masses (aq;q)_inf a^k q^{k^2} / ((aq;q)_k (q;q)_k).
DiscreteMeasure asc_krein(const AscParameters& p, std::size_t count, const PrecisionContext& ctx);
/// (q;q)_inf sum_k q^k / ((a - q^k)(q;q)_k).
Real asc_F(const AscParameters& p, const PrecisionContext& ctx);
MomentGenerator asc_moments(const AscParameters& p);

// ---- Stieltjes-Wigert ----------------------------------------------------

/// q^{1/8} / sqrt(2 pi log(1/q)) x^{-1/2} exp(-log(x)^2 / (2 log(1/q))), x > 0.
Real sw_density(const Real& x, const QParameter& q);
/// q^{-n(n+1)/2} at the precision of q.
Real sw_moment(std::size_t n, const QParameter& q);
/// Closed-form orthonormal polynomial
/// (-1)^n sqrt(q^n/(q;q)_n) sum_k [n,k]_q (-1)^k q^{k^2} x^k.
Real sw_p(std::size_t n, const Real& x, const QParameter& q);
/// Smallest zero of sw_p(n, ., q), n >= 1.
Real sw_p_smallest_zero(std::size_t n, const QParameter& q, const PrecisionContext& ctx);
MomentGenerator sw_moments(const QParameter& q);
/// Recurrence of the given length, recovered from the closed-form moments
/// at `bits`.
RecurrenceCoefficients sw_recurrence(const QParameter& q, std::size_t length, const PrecisionContext& ctx);

enum class SwSolution { friedrichs, t_one, krein };

std::string to_string(SwSolution s);

/// Recurrence length and precision that resolve sum p_n(x)^2 up to x.
struct SwWorkspace {
  std::size_t length;
  Bits bits;
};
SwWorkspace sw_workspace(const QParameter& q, std::size_t count, const Real& x_max, Bits requested);

/// N-extremal solutions built from the first `count` zeros xi_k of Phi:
/// atoms xi_k (friedrichs), q xi_k (t_one), 0 and xi_k/q (krein), masses
/// 1 / sum p_n(x)^2. Tail bounds are extrapolated from the last two atoms
/// (heuristic: the masses decay faster than any geometric sequence).
DiscreteMeasure sw_nextremal(SwSolution which, const QParameter& q, std::size_t count, const PrecisionContext& ctx);
/// Same, reusing a zero table and a recurrence sized by sw_workspace.
DiscreteMeasure sw_nextremal(SwSolution which, const PhiZeroTable& zeros, const RecurrenceCoefficients& rc,
                             const PrecisionContext& ctx);

// ---- family selection ----------------------------------------------------

enum class Family { quartic, al_salam_carlitz, stieltjes_wigert };

std::string to_string(Family f);
/// Accepts "quartic", "al_salam_carlitz"/"asc", "stieltjes_wigert"/"sw".
Family parse_family(const std::string& name);

struct FamilyHandle {
  Family family = Family::stieltjes_wigert;
  std::optional<Real> a;
  std::optional<QParameter> q;
  std::size_t atom_count = 30;

  /// Throws DomainError when the parameters do not fit the family.
  void validate() const;
  AscParameters asc() const;
  std::string describe() const;
};

}  // namespace nextremal
