#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nextremal/families.hpp"
#include "nextremal/nevanlinna.hpp"

namespace nextremal {

/// Lazily built objects of one family at one precision: moments, a
/// recurrence long enough for masses and supports, and the Friedrichs,
/// Krein and finite-t N-extremal solutions. Caches; not thread-safe.
class FamilyModel {
 public:
  FamilyModel(FamilyHandle handle, PrecisionContext ctx);

  const FamilyHandle& handle() const { return handle_; }
  const PrecisionContext& context() const { return ctx_; }

  /// Normalized moment sequence s_0..s_{count-1}.
  MomentSequence moments(std::size_t count) const;
  const RecurrenceCoefficients& recurrence();

  /// F(s) from its series form (no recurrence needed).
  Real friedrichs_value();
  /// The t of the finite-t solution offered for the Stieltjes theorems
  /// (t = 1 for Stieltjes-Wigert); nullopt when the family has none.
  std::optional<Real> default_t() const;

  const DiscreteMeasure& friedrichs();
  const DiscreteMeasure& krein();
  /// mu_t. F(s) and infinity map to the cached solutions; Stieltjes-Wigert
  /// t = 1 uses the zero table; other t scan B + tD on a geometric grid.
  DiscreteMeasure solution(const ExtReal& t);

 private:
  const PhiZeroTable& sw_zeros();

  FamilyHandle handle_;
  PrecisionContext ctx_;
  std::optional<RecurrenceCoefficients> rc_;
  std::optional<Real> F_;
  std::optional<DiscreteMeasure> friedrichs_, krein_, t_one_;
  std::optional<PhiZeroTable> zeros_;
};

enum class Status { pass, fail, inconclusive };
std::string to_string(Status s);

struct Check {
  std::string description;
  std::string expected;
  std::string observed;
  std::string tolerance;
  Status status = Status::fail;
};

struct VerifyOptions {
  /// t of the finite-t solution; defaults to FamilyModel::default_t.
  std::optional<Real> t;
  /// t' of the second solution in T3.4; defaults to F(s).
  std::optional<ExtReal> t_prime;
  double moment_tol = 1e-12;
  double transform_tol = 1e-10;
  /// Wall-clock time makes reports non-reproducible; off unless asked.
  bool include_runtime = false;
};

struct VerificationReport {
  std::string theorem_id;
  std::string family;
  /// Exact settings of the run, in a fixed order.
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Check> checks;
  Status overall = Status::inconclusive;
  std::optional<double> runtime_seconds;
  Bits bits = 0;
};

/// T3.1, C3.2, T3.4, T3.5, T3.6/C3.7, P1.6, E1.10, P3.2i.
const std::vector<std::string>& theorem_ids();
/// Whether the family has what the theorem's checks need.
bool supports(const std::string& theorem_id, Family family);

/// Throws UsageError for an unknown id or a family without the needed
/// solutions. Numerical trouble inside a check marks that check.
VerificationReport verify(const std::string& theorem_id, FamilyModel& model, const VerifyOptions& options = {});
VerificationReport verify(const std::string& theorem_id, const FamilyHandle& family, const PrecisionContext& ctx,
                          const VerifyOptions& options = {});

std::string report_to_json(const VerificationReport& r);
/// One row per check, the report fields repeated on each row.
std::string report_to_csv(const VerificationReport& r);

}  // namespace nextremal
