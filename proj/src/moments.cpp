#include "nextremal/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "nextremal/errors.hpp"

namespace nextremal {

std::string to_string(MomentSource source) {
  switch (source) {
    case MomentSource::closed_form:
      return "closed-form";
    case MomentSource::from_measure:
      return "from-measure";
    case MomentSource::transformed:
      return "transformed";
  }
  return "unknown";
}

MomentSequence::MomentSequence(std::vector<Real> values, MomentSource source)
    : values_(std::move(values)), source_(source) {}

MomentSequence::MomentSequence(MomentGenerator generator, std::size_t count, Bits bits, MomentSource source)
    : values_(generator(count, bits)), source_(source), generator_(std::move(generator)) {}

std::vector<Real> MomentSequence::values_at(std::size_t count, Bits bits) const {
  if (generator_) return generator_(count, bits);
  if (count > values_.size()) {
    throw LengthError("moment sequence has " + std::to_string(values_.size()) + " entries, " +
                      std::to_string(count) + " requested");
  }
  std::vector<Real> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(values_[i].with_precision(bits));
  return out;
}

MomentSequence normalize(const MomentSequence& s) {
  if (s.size() == 0 || !(s[0] > 0)) throw DomainError("normalize needs s_0 > 0");
  auto scale = [](std::vector<Real> v) {
    Real s0 = v.front();
    for (Real& x : v) x /= s0;
    return v;
  };
  if (s.regenerable()) {
    MomentGenerator inner = s.generator();
    MomentGenerator gen = [inner, scale](std::size_t count, Bits bits) {
      return scale(inner(std::max<std::size_t>(count, 1), bits));
    };
    return MomentSequence(gen, s.size(), s[0].precision(), s.source());
  }
  return MomentSequence(scale(s.values()), s.source());
}

namespace {

struct Cholesky {
  std::vector<std::vector<Real>> L;  // row i holds L[i][0..i]
  std::size_t completed = 0;         // rows with a positive pivot
  std::size_t worst_index = 0;
  double min_pivot_log2 = 0.0;
};

// Factor the size x size Hankel matrix; stops at the first non-positive pivot.
Cholesky hankel_cholesky(const std::vector<Real>& s, std::size_t size) {
  Cholesky c;
  c.L.resize(size);
  for (std::size_t j = 0; j < size; ++j) {
    c.L[j].resize(j + 1);
    for (std::size_t k = 0; k < j; ++k) {
      Real acc = s[j + k];
      for (std::size_t l = 0; l < k; ++l) acc.sub_product(c.L[j][l], c.L[k][l]);
      c.L[j][k] = acc / c.L[k][k];
    }
    Real d = s[2 * j];
    for (std::size_t l = 0; l < j; ++l) d.sub_product(c.L[j][l], c.L[j][l]);
    if (!(d > 0)) {
      c.worst_index = j;
      c.min_pivot_log2 = -std::numeric_limits<double>::infinity();
      return c;
    }
    double ratio = log2(d / s[2 * j]).to_double();
    if (j == 0 || ratio < c.min_pivot_log2) {
      c.min_pivot_log2 = ratio;
      c.worst_index = j;
    }
    c.L[j][j] = sqrt(d);
    c.completed = j + 1;
  }
  return c;
}

}  // namespace

HankelCheck hankel_positive_definite(const MomentSequence& s, std::size_t m, const PrecisionContext& ctx) {
  const std::size_t size = m + 1;
  if (s.size() < 2 * m + 1 && !s.regenerable()) {
    throw LengthError("Hankel test of order " + std::to_string(m) + " needs " + std::to_string(2 * m + 1) +
                      " moments");
  }
  for (Bits bits = ctx.bits;; bits *= 2) {
    Cholesky c = hankel_cholesky(s.values_at(2 * m + 1, bits), size);
    const double floor = -static_cast<double>(bits) / 2.0;
    HankelCheck out;
    out.bits_used = bits;
    out.min_pivot_log2 = c.min_pivot_log2;
    if (c.completed == size && c.min_pivot_log2 >= floor) {
      out.positive_definite = true;
      out.failing_index = size;
      return out;
    }
    out.failing_index = c.worst_index;
    if (bits * 2 > ctx.bits_ceiling) {
      if (c.completed < size) return out;
      throw InconclusiveError("Hankel pivot " + std::to_string(c.worst_index) + " stays marginal (2^" +
                              std::to_string(c.min_pivot_log2) + " of its diagonal) at " +
                              std::to_string(bits) + " bits");
    }
  }
}

RecurrenceCoefficients::RecurrenceCoefficients(std::vector<Real> a, std::vector<Real> b, double lost_bits)
    : a_(std::move(a)), b_(std::move(b)), bits_(0), lost_bits_(lost_bits) {
  if (a_.size() != b_.size()) throw DomainError("recurrence needs as many a_n as b_n");
  for (std::size_t n = 0; n < a_.size(); ++n) {
    if (!(a_[n] > 0)) throw DomainError("a_" + std::to_string(n) + " must be positive");
    bits_ = std::max(bits_, a_[n].precision());
  }
  for (const Real& x : b_) bits_ = std::max(bits_, x.precision());
}

RecurrenceCoefficients RecurrenceCoefficients::truncated(std::size_t n) const {
  n = std::min(n, length());
  return RecurrenceCoefficients(std::vector<Real>(a_.begin(), a_.begin() + n),
                                std::vector<Real>(b_.begin(), b_.begin() + n), lost_bits_);
}

RecurrenceCoefficients recurrence_from_moments(const MomentSequence& s, std::size_t n_max,
                                               const PrecisionContext& ctx) {
  const std::size_t size = n_max + 2;
  const std::size_t needed = 2 * size - 1;
  if (s.size() < needed && !s.regenerable()) {
    throw LengthError("recovering " + std::to_string(n_max + 1) + " coefficients needs " + std::to_string(needed) +
                      " moments, have " + std::to_string(s.size()));
  }
  const double target = static_cast<double>(ctx.bits) / 2.0;
  for (Bits bits = ctx.bits;; bits *= 2) {
    Cholesky c = hankel_cholesky(s.values_at(needed, bits), size);
    const double lost = -2.0 * c.min_pivot_log2;
    const bool pivots_ok = c.completed == size && c.min_pivot_log2 >= -static_cast<double>(bits) / 2.0;
    if (pivots_ok && static_cast<double>(bits) - lost >= target) {
      std::vector<Real> a, b;
      a.reserve(n_max + 1);
      b.reserve(n_max + 1);
      const auto& L = c.L;
      for (std::size_t n = 0; n <= n_max; ++n) {
        a.push_back(L[n + 1][n + 1] / L[n][n]);
        Real bn = L[n + 1][n] / L[n][n];
        if (n > 0) bn -= L[n][n - 1] / L[n - 1][n - 1];
        b.push_back(std::move(bn));
      }
      return RecurrenceCoefficients(std::move(a), std::move(b), lost);
    }
    if (bits * 2 > ctx.bits_ceiling) {
      throw InconclusiveError("recurrence_from_moments: Hankel pivot " + std::to_string(c.worst_index) +
                              (c.completed < size ? " is non-positive" : " is too small") + " at " +
                              std::to_string(bits) + " bits (ceiling " + std::to_string(ctx.bits_ceiling) + ")");
    }
  }
}

template <class T>
PolynomialPair<T> eval_pq(const RecurrenceCoefficients& rc, const T& z, std::size_t N) {
  if (N > rc.length()) {
    throw LengthError("eval_pq: degree " + std::to_string(N) + " needs " + std::to_string(N) +
                      " coefficients, have " + std::to_string(rc.length()));
  }
  const Bits bits = rc.bits();
  PolynomialPair<T> out;
  out.p.reserve(N + 1);
  out.q.reserve(N + 1);
  out.p.push_back(lift<T>(Real(1, bits)));
  out.q.push_back(lift<T>(Real::zero(bits)));
  if (N == 0) return out;
  out.p.push_back((z - rc.b(0)) / rc.a(0));
  out.q.push_back(lift<T>(1 / rc.a(0)));
  for (std::size_t n = 1; n < N; ++n) {
    T shift = z - rc.b(n);
    out.p.push_back((shift * out.p[n] - rc.a(n - 1) * out.p[n - 1]) / rc.a(n));
    out.q.push_back((shift * out.q[n] - rc.a(n - 1) * out.q[n - 1]) / rc.a(n));
  }
  return out;
}

template PolynomialPair<Real> eval_pq<Real>(const RecurrenceCoefficients&, const Real&, std::size_t);
template PolynomialPair<Complex> eval_pq<Complex>(const RecurrenceCoefficients&, const Complex&, std::size_t);

std::vector<Real> jacobi_apply(const RecurrenceCoefficients& rc, const std::vector<Real>& c) {
  std::size_t support = c.size();
  while (support > 0 && c[support - 1].is_zero()) --support;
  if (support >= rc.length()) {
    throw LengthError("jacobi_apply: vector reaches index " + std::to_string(support - 1) + " but only " +
                      std::to_string(rc.length()) + " coefficients are stored");
  }
  std::vector<Real> out(support + 1, Real::zero(rc.bits()));
  for (std::size_t n = 0; n < support; ++n) {
    out[n].add_product(rc.b(n), c[n]);
    out[n + 1].add_product(rc.a(n), c[n]);
    if (n > 0) out[n - 1].add_product(rc.a(n - 1), c[n]);
  }
  return out;
}

std::vector<Real> moments_from_recurrence(const RecurrenceCoefficients& rc, std::size_t count) {
  auto dot = [](const std::vector<Real>& u, const std::vector<Real>& v) {
    Real acc = Real::zero(u.empty() ? 64 : u.front().precision());
    for (std::size_t i = 0; i < std::min(u.size(), v.size()); ++i) acc.add_product(u[i], v[i]);
    return acc;
  };
  std::vector<Real> out;
  out.reserve(count);
  std::vector<Real> v{Real(1, rc.bits())};  // J^k e_0
  for (std::size_t n = 0; n < count; n += 2) {
    out.push_back(dot(v, v));
    if (n + 1 >= count) break;
    std::vector<Real> w = jacobi_apply(rc, v);
    out.push_back(dot(w, v));
    v = std::move(w);
  }
  return out;
}

std::string moments_to_json(const MomentSequence& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Real& x : s.values()) arr.push_back(x.to_string());
  return arr.dump();
}

MomentSequence moments_from_json(std::string_view text, Bits bits) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("moment JSON: ") + e.what());
  }
  if (!arr.is_array()) throw DomainError("moment JSON must be an array of decimal strings");
  std::vector<Real> values;
  for (const auto& item : arr) {
    if (!item.is_string()) throw DomainError("moment JSON entries must be decimal strings");
    values.push_back(Real::parse(item.get<std::string>(), bits));
  }
  return MomentSequence(std::move(values), MomentSource::transformed);
}

}  // namespace nextremal
