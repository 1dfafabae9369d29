#include "gamx/exact_real.h"

#include <algorithm>
#include <sstream>

#include "gamx/errors.h"

namespace gamx {
namespace {

constexpr unsigned kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                                     53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

bool IsPerfectSquare(const Integer& n) { return mpz_perfect_square_p(n.get_mpz_t()) != 0; }

Integer ISqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// Writes n = s^2 * m with small square factors pulled out. Returns s.
Integer StripSmallSquares(Integer& n) {
  Integer s = 1;
  for (unsigned p : kSmallPrimes) {
    const unsigned long p2 = static_cast<unsigned long>(p) * p;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p2)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p2);
      s *= p;
    }
  }
  return s;
}

}  // namespace

QuadraticSurd QuadraticSurd::operator+(const QuadraticSurd& o) const {
  if (b == 0) return {a + o.a, o.b, o.radicand};
  if (o.b != 0 && o.radicand != radicand) Fail(ErrorKind::kValidation, "mixed radicands in surd arithmetic");
  return {a + o.a, b + o.b, radicand};
}

QuadraticSurd QuadraticSurd::operator-(const QuadraticSurd& o) const {
  return *this + QuadraticSurd(-o.a, -o.b, o.radicand);
}

QuadraticSurd QuadraticSurd::operator*(const QuadraticSurd& o) const {
  if (b == 0) return {a * o.a, a * o.b, o.radicand};
  if (o.b == 0) return {a * o.a, b * o.a, radicand};
  if (o.radicand != radicand) Fail(ErrorKind::kValidation, "mixed radicands in surd arithmetic");
  return {a * o.a + b * o.b * Rational(radicand), a * o.b + b * o.a, radicand};
}

ExactReal::ExactReal(const QuadraticSurd& s) : rational_(s.a) {
  if (s.b != 0) AddTerm(s.radicand, s.b);
}

ExactReal ExactReal::FromSurd(const Rational& p, const Rational& q, const Rational& d) {
  if (d < 0) Fail(ErrorKind::kDomain, "square root of a negative number");
  ExactReal out(p);
  if (q == 0 || d == 0) return out;
  // sqrt(num/den) = sqrt(num*den)/den
  Integer n = d.get_num() * d.get_den();
  out.AddTerm(n, q / Rational(d.get_den()));
  return out;
}

void ExactReal::AddTerm(Integer radicand, Rational coef) {
  if (coef == 0) return;
  Integer s = StripSmallSquares(radicand);
  coef *= Rational(s);
  if (IsPerfectSquare(radicand)) {
    rational_ += coef * Rational(ISqrt(radicand));
    return;
  }
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    Integer product = radicand * it->radicand;
    if (IsPerfectSquare(product)) {
      // sqrt(n) = sqrt(n*m)/m * sqrt(m)
      it->coef += coef * Ratio(ISqrt(product), it->radicand);
      if (it->coef == 0) terms_.erase(it);
      return;
    }
  }
  terms_.push_back({std::move(radicand), std::move(coef)});
}

QuadraticSurd ExactReal::AsSurd() const {
  if (terms_.empty()) return QuadraticSurd(rational_);
  if (terms_.size() > 1) Fail(ErrorKind::kValidation, "value has more than one radicand");
  return {rational_, terms_[0].coef, terms_[0].radicand};
}

std::pair<Rational, Rational> ExactReal::Enclose(unsigned bits) const {
  Rational lo = rational_;
  Rational hi = rational_;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
  const Rational ulp(Integer(1), scale);
  for (const Term& t : terms_) {
    Integer shifted = t.radicand * scale * scale;
    Rational root_lo(ISqrt(shifted), scale);
    root_lo.canonicalize();
    Rational root_hi = root_lo + ulp;
    if (t.coef > 0) {
      lo += t.coef * root_lo;
      hi += t.coef * root_hi;
    } else {
      lo += t.coef * root_hi;
      hi += t.coef * root_lo;
    }
  }
  return {lo, hi};
}

int ExactReal::sign() const {
  if (terms_.empty()) return sgn(rational_);
  // Linear independence makes a non-empty term list a non-zero value.
  for (unsigned bits = 64; bits <= (1u << 20); bits *= 2) {
    auto [lo, hi] = Enclose(bits);
    if (lo > 0) return 1;
    if (hi < 0) return -1;
  }
  Fail(ErrorKind::kPrecision, "sign refinement did not converge");
}

ExactReal ExactReal::operator-() const {
  ExactReal out(*this);
  out.rational_ = -out.rational_;
  for (Term& t : out.terms_) t.coef = -t.coef;
  return out;
}

ExactReal& ExactReal::operator+=(const ExactReal& o) {
  rational_ += o.rational_;
  for (const Term& t : o.terms_) AddTerm(t.radicand, t.coef);
  return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& o) { return *this += -o; }

ExactReal& ExactReal::operator*=(const Rational& r) {
  if (r == 0) {
    rational_ = 0;
    terms_.clear();
    return *this;
  }
  rational_ *= r;
  for (Term& t : terms_) t.coef *= r;
  return *this;
}

double ExactReal::ToDouble() const {
  if (terms_.empty()) return rational_.get_d();
  auto [lo, hi] = Enclose(80);
  return Rational((lo + hi) / 2).get_d();
}

std::string ExactReal::ToString() const {
  std::ostringstream out;
  out << gamx::ToString(rational_);
  for (const Term& t : terms_) {
    out << (t.coef < 0 ? " - " : " + ") << gamx::ToString(Abs(t.coef)) << "*sqrt(" << t.radicand.get_str()
        << ")";
  }
  return out.str();
}

Integer Floor(const ExactReal& value) {
  if (value.is_rational()) return Floor(value.rational_part());
  Integer f = Floor(value.Enclose(64).first);
  while (ExactReal(Rational(f + 1)) <= value) f += 1;
  while (ExactReal(Rational(f)) > value) f -= 1;
  return f;
}

Integer Ceil(const ExactReal& value) {
  Integer f = Floor(value);
  return ExactReal(Rational(f)) == value ? f : Integer(f + 1);
}

}  // namespace gamx
