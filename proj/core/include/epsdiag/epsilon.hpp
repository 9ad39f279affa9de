#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace epsdiag {

using Integer = mpz_class;
using Rational = mpq_class;
using Degree = std::uint64_t;

/// Exact polynomial in the fault probability e with integer coefficients.
///
/// Stored sparsely as (degree, coefficient) pairs in increasing degree with
/// no zero coefficients, so the zero polynomial has no terms and equality is
/// term-wise.
class EpsilonPoly {
 public:
  using Term = std::pair<Degree, Integer>;

  EpsilonPoly() = default;
  /// The constant c.
  EpsilonPoly(long c);  // NOLINT(google-explicit-constructor)
  static EpsilonPoly monomial(Integer coeff, Degree degree);
  /// Terms in any order; duplicates are summed, zeros dropped.
  static EpsilonPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Lowest degree with a nonzero coefficient; nullopt for zero.
  std::optional<Degree> lowest_degree() const;
  Integer coefficient(Degree d) const;
  /// Coefficient at lowest_degree(); 0 for the zero polynomial.
  Integer leading_coefficient() const;

  Rational evaluate(const Rational& e) const;

  EpsilonPoly& operator+=(const EpsilonPoly& o);
  EpsilonPoly& operator-=(const EpsilonPoly& o);
  EpsilonPoly& operator*=(const EpsilonPoly& o);
  friend EpsilonPoly operator+(EpsilonPoly a, const EpsilonPoly& b) { return a += b; }
  friend EpsilonPoly operator-(EpsilonPoly a, const EpsilonPoly& b) { return a -= b; }
  friend EpsilonPoly operator*(const EpsilonPoly& a, const EpsilonPoly& b);
  friend EpsilonPoly operator-(const EpsilonPoly& a);
  friend bool operator==(const EpsilonPoly&, const EpsilonPoly&) = default;

 private:
  void combine(const EpsilonPoly& o, int sign);
  std::vector<Term> terms_;
};

/// Terms "c*e^d" joined by " + " / " - " in increasing degree, e.g.
/// "2*e^3 - 3*e^4"; degree 0 prints as the bare constant, zero as "0".
std::string to_string(const EpsilonPoly& p);

/// e^(n-k) (1-e)^k: prior weight of one environment of cardinality k out of
/// n assumptions, each faulty with probability e.
EpsilonPoly env_weight(std::size_t n, std::size_t k);

/// (1 - e^d)^m.
EpsilonPoly survival_power(Degree d, std::size_t m);

class DivergesAtZero : public std::domain_error {
 public:
  DivergesAtZero() : std::domain_error("ratio diverges as e -> 0") {}
};

/// num/den with den != 0 and den's lowest coefficient positive, so the
/// ratio's sign near 0 is the sign of num's lowest coefficient. Not reduced
/// by polynomial gcd; equality cross-multiplies.
class EpsilonRatio {
 public:
  EpsilonRatio() : den_(1) {}
  EpsilonRatio(EpsilonPoly num, EpsilonPoly den);
  EpsilonRatio(const EpsilonPoly& p) : EpsilonRatio(p, EpsilonPoly(1)) {}  // NOLINT

  const EpsilonPoly& num() const { return num_; }
  const EpsilonPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  Rational evaluate(const Rational& e) const;

  friend EpsilonRatio operator*(const EpsilonRatio& a, const EpsilonRatio& b);
  friend bool operator==(const EpsilonRatio& a, const EpsilonRatio& b);

 private:
  EpsilonPoly num_;
  EpsilonPoly den_;
};

std::string to_string(const EpsilonRatio& r);

/// Value at e -> 0. Zero when num vanishes faster than den or is zero;
/// throws DivergesAtZero when den vanishes faster.
Rational limit_at_zero(const EpsilonRatio& r);

/// lowest_degree(num) - lowest_degree(den); nullopt when num is zero.
std::optional<std::int64_t> order_at_zero(const EpsilonRatio& r);

/// c such that r = c e^order + O(e^(order+1)); 0 for the zero ratio.
Rational leading_term(const EpsilonRatio& r);

/// Whether a(e) > b(e) for all sufficiently small e > 0. Equal ratios give
/// false.
bool eventually_greater(const EpsilonRatio& a, const EpsilonRatio& b);

}  // namespace epsdiag
