#ifndef GAMX_POLYNOMIAL_H_
#define GAMX_POLYNOMIAL_H_

#include <string>
#include <vector>

#include "gamx/exact_real.h"
#include "gamx/rational.h"

namespace gamx {

// Univariate polynomial with rational coefficients, stored lowest degree
// first. Trailing zero coefficients are trimmed so degree() is exact.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> ascending);
  static Polynomial Constant(const Rational& c) { return Polynomial({c}); }
  // From the (a3, a2, a1, a0) order used in model documents.
  static Polynomial FromDescending(const std::vector<Rational>& descending);

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t power) const { return power < coeffs_.size() ? coeffs_[power] : Rational(0); }
  // Fixed-width descending coefficients, padded to `width` entries.
  std::vector<Rational> Descending(std::size_t width) const;

  Rational operator()(const Rational& x) const;
  QuadraticSurd operator()(const QuadraticSurd& x) const;

  Polynomial Derivative() const;
  Polynomial Antiderivative() const;
  // Exact integral over [lo, hi].
  Rational Integrate(const Rational& lo, const Rational& hi) const;
  // Exact sum of p(j) for integers j in [lo, hi] (empty if lo > hi). Degree <= 3.
  Rational SumOverIntegers(const Integer& lo, const Integer& hi) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& r) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  std::string ToString() const;

 private:
  void Trim();

  std::vector<Rational> coeffs_;
};

}  // namespace gamx

#endif  // GAMX_POLYNOMIAL_H_
