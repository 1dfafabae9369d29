#ifndef GAMX_EXACT_REAL_H_
#define GAMX_EXACT_REAL_H_

#include <string>
#include <utility>
#include <vector>

#include "gamx/rational.h"

namespace gamx {

// a + b * sqrt(n) for a fixed positive integer radicand n. Closed under the
// field operations used when evaluating a polynomial at a quadratic root.
struct QuadraticSurd {
  Rational a;
  Rational b;
  Integer radicand = 1;

  QuadraticSurd() = default;
  QuadraticSurd(Rational a_, Rational b_, Integer n) : a(std::move(a_)), b(std::move(b_)), radicand(std::move(n)) {}
  explicit QuadraticSurd(const Rational& r) : a(r), b(0), radicand(1) {}

  QuadraticSurd operator+(const QuadraticSurd& o) const;
  QuadraticSurd operator-(const QuadraticSurd& o) const;
  QuadraticSurd operator*(const QuadraticSurd& o) const;
};

// Exact real of the form r + sum_k c_k * sqrt(n_k), where the n_k are
// positive non-square integers whose pairwise products are non-squares.
// Under that invariant {1, sqrt(n_1), ...} is linearly independent over Q, so
// the value is zero iff every coefficient is zero, and otherwise its sign is
// settled by interval refinement in finite time.
class ExactReal {
 public:
  struct Term {
    Integer radicand;
    Rational coef;
  };

  ExactReal() = default;
  ExactReal(const Rational& r) : rational_(r) {}  // NOLINT(runtime/explicit)
  ExactReal(long r) : rational_(r) {}             // NOLINT(runtime/explicit)
  explicit ExactReal(const QuadraticSurd& s);

  // (p + q*sqrt(d)) with rational d >= 0.
  static ExactReal FromSurd(const Rational& p, const Rational& q, const Rational& d);

  bool is_rational() const { return terms_.empty(); }
  const Rational& rational_part() const { return rational_; }
  const std::vector<Term>& terms() const { return terms_; }

  // Single-radicand view; only valid when terms().size() <= 1.
  QuadraticSurd AsSurd() const;

  int sign() const;

  ExactReal operator-() const;
  ExactReal& operator+=(const ExactReal& o);
  ExactReal& operator-=(const ExactReal& o);
  ExactReal& operator*=(const Rational& r);
  friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
  friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
  friend ExactReal operator*(ExactReal a, const Rational& r) { return a *= r; }

  friend bool operator==(const ExactReal& a, const ExactReal& b) { return (a - b).sign() == 0; }
  friend bool operator!=(const ExactReal& a, const ExactReal& b) { return !(a == b); }
  friend bool operator<(const ExactReal& a, const ExactReal& b) { return (a - b).sign() < 0; }
  friend bool operator>(const ExactReal& a, const ExactReal& b) { return b < a; }
  friend bool operator<=(const ExactReal& a, const ExactReal& b) { return !(b < a); }
  friend bool operator>=(const ExactReal& a, const ExactReal& b) { return !(a < b); }

  // Rational enclosure [lo, hi] of width at most about 2^-bits per term.
  std::pair<Rational, Rational> Enclose(unsigned bits) const;

  // A rational within 2^-bits-ish of the value (the lower enclosure bound).
  Rational Approximate(unsigned bits) const { return Enclose(bits).first; }

  double ToDouble() const;
  std::string ToString() const;

 private:
  void AddTerm(Integer radicand, Rational coef);

  Rational rational_;
  std::vector<Term> terms_;
};

// floor/ceil of an exact real (exact, via enclosure plus exact comparison).
Integer Floor(const ExactReal& value);
Integer Ceil(const ExactReal& value);

}  // namespace gamx

#endif  // GAMX_EXACT_REAL_H_
