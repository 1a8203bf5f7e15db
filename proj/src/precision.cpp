#include "nextremal/precision.hpp"

#include <cmath>
#include <string>

#include "nextremal/errors.hpp"

namespace nextremal {

void PrecisionContext::validate() const {
  if (bits < 64) throw DomainError("bits must be >= 64, got " + std::to_string(bits));
  if (bits_ceiling < bits) throw DomainError("bits_ceiling must be >= bits");
  if (max_terms < 8) throw DomainError("max_terms must be >= 8");
  if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) throw DomainError("tail_tol must lie in (0, 1)");
  if (!(limit_tol > 0.0) || !(limit_tol < 1.0)) throw DomainError("limit_tol must lie in (0, 1)");
}

Real PrecisionContext::tolerance() const {
  Real requested(tail_tol, bits);
  Real floor = ldexp(Real(1, bits), 8 - static_cast<long>(bits));
  return requested < floor ? floor : requested;
}

}  // namespace nextremal
