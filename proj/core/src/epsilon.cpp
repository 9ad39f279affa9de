#include "epsdiag/epsilon.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace epsdiag {

namespace {

Integer binomial(std::size_t n, std::size_t k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

// Sign of the polynomial for all small enough e > 0.
int sign_near_zero(const EpsilonPoly& p) {
  return p.is_zero() ? 0 : sgn(p.leading_coefficient());
}

Rational power(const Rational& base, Degree exp) {
  Rational out = 1;
  Rational b = base;
  while (exp != 0) {
    if ((exp & 1U) != 0) out *= b;
    b *= b;
    exp >>= 1U;
  }
  return out;
}

}  // namespace

EpsilonPoly::EpsilonPoly(long c) {
  if (c != 0) terms_.emplace_back(0, Integer(c));
}

EpsilonPoly EpsilonPoly::monomial(Integer coeff, Degree degree) {
  EpsilonPoly p;
  if (coeff != 0) p.terms_.emplace_back(degree, std::move(coeff));
  return p;
}

EpsilonPoly EpsilonPoly::from_terms(std::vector<Term> terms) {
  std::map<Degree, Integer> acc;
  for (auto& [d, c] : terms) acc[d] += c;
  EpsilonPoly p;
  for (auto& [d, c] : acc)
    if (c != 0) p.terms_.emplace_back(d, std::move(c));
  return p;
}

std::optional<Degree> EpsilonPoly::lowest_degree() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().first;
}

Integer EpsilonPoly::coefficient(Degree d) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), d,
                             [](const Term& t, Degree x) { return t.first < x; });
  if (it == terms_.end() || it->first != d) return 0;
  return it->second;
}

Integer EpsilonPoly::leading_coefficient() const {
  return terms_.empty() ? Integer(0) : terms_.front().second;
}

Rational EpsilonPoly::evaluate(const Rational& e) const {
  Rational sum = 0;
  for (const auto& [d, c] : terms_) sum += Rational(c) * power(e, d);
  return sum;
}

void EpsilonPoly::combine(const EpsilonPoly& o, int sign) {
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      merged.emplace_back(b->first, sign > 0 ? b->second : Integer(-b->second));
      ++b;
    } else {
      Integer c = sign > 0 ? Integer(a->second + b->second) : Integer(a->second - b->second);
      if (c != 0) merged.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
}

EpsilonPoly& EpsilonPoly::operator+=(const EpsilonPoly& o) {
  combine(o, +1);
  return *this;
}

EpsilonPoly& EpsilonPoly::operator-=(const EpsilonPoly& o) {
  combine(o, -1);
  return *this;
}

EpsilonPoly operator*(const EpsilonPoly& a, const EpsilonPoly& b) {
  std::vector<EpsilonPoly::Term> products;
  products.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [da, ca] : a.terms_)
    for (const auto& [db, cb] : b.terms_) products.emplace_back(da + db, ca * cb);
  return EpsilonPoly::from_terms(std::move(products));
}

EpsilonPoly& EpsilonPoly::operator*=(const EpsilonPoly& o) { return *this = *this * o; }

EpsilonPoly operator-(const EpsilonPoly& a) {
  EpsilonPoly out = a;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

std::string to_string(const EpsilonPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [d, c] : p.terms()) {
    const Integer mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    os << mag.get_str();
    if (d != 0) os << "*e^" << d;
    first = false;
  }
  return os.str();
}

EpsilonPoly env_weight(std::size_t n, std::size_t k) {
  if (k > n)
    throw std::domain_error("env_weight: cardinality " + std::to_string(k) + " exceeds " +
                            std::to_string(n));
  // e^(n-k) * sum_j C(k,j) (-e)^j
  std::vector<EpsilonPoly::Term> terms;
  for (std::size_t j = 0; j <= k; ++j) {
    Integer c = binomial(k, j);
    if (j % 2 == 1) c = -c;
    terms.emplace_back(n - k + j, std::move(c));
  }
  return EpsilonPoly::from_terms(std::move(terms));
}

EpsilonPoly survival_power(Degree d, std::size_t m) {
  std::vector<EpsilonPoly::Term> terms;
  for (std::size_t j = 0; j <= m; ++j) {
    Integer c = binomial(m, j);
    if (j % 2 == 1) c = -c;
    terms.emplace_back(d * j, std::move(c));
  }
  return EpsilonPoly::from_terms(std::move(terms));
}

EpsilonRatio::EpsilonRatio(EpsilonPoly num, EpsilonPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("EpsilonRatio with zero denominator");
  if (den_.leading_coefficient() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

Rational EpsilonRatio::evaluate(const Rational& e) const {
  const Rational d = den_.evaluate(e);
  if (d == 0) throw std::domain_error("denominator vanishes at e = " + e.get_str());
  return num_.evaluate(e) / d;
}

EpsilonRatio operator*(const EpsilonRatio& a, const EpsilonRatio& b) {
  return EpsilonRatio(a.num_ * b.num_, a.den_ * b.den_);
}

bool operator==(const EpsilonRatio& a, const EpsilonRatio& b) {
  return a.num_ * b.den_ == b.num_ * a.den_;
}

std::string to_string(const EpsilonRatio& r) {
  return "(" + to_string(r.num()) + ") / (" + to_string(r.den()) + ")";
}

Rational limit_at_zero(const EpsilonRatio& r) {
  if (r.is_zero()) return 0;
  const Degree dn = *r.num().lowest_degree();
  const Degree dd = *r.den().lowest_degree();
  if (dn < dd) throw DivergesAtZero();
  if (dn > dd) return 0;
  Rational out(r.num().leading_coefficient(), r.den().leading_coefficient());
  out.canonicalize();
  return out;
}

std::optional<std::int64_t> order_at_zero(const EpsilonRatio& r) {
  if (r.is_zero()) return std::nullopt;
  return static_cast<std::int64_t>(*r.num().lowest_degree()) -
         static_cast<std::int64_t>(*r.den().lowest_degree());
}

Rational leading_term(const EpsilonRatio& r) {
  if (r.is_zero()) return 0;
  Rational out(r.num().leading_coefficient(), r.den().leading_coefficient());
  out.canonicalize();
  return out;
}

bool eventually_greater(const EpsilonRatio& a, const EpsilonRatio& b) {
  // Both denominators are positive near 0, so compare the cross products.
  return sign_near_zero(a.num() * b.den() - b.num() * a.den()) > 0;
}

}  // namespace epsdiag
