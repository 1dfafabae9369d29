#include "gamx/polynomial.h"

#include <sstream>

#include "gamx/errors.h"

namespace gamx {
namespace {

// Faulhaber polynomials F_p(n) = sum_{j=1}^{n} j^p. As polynomial identities
// F_p(n) - F_p(n-1) = n^p holds for every integer n, so F_p(hi) - F_p(lo-1)
// sums any integer range, negative bounds included.
Rational PowerSum(unsigned power, const Integer& n_int) {
  const Rational n(n_int);
  switch (power) {
    case 0: return n;
    case 1: return n * (n + 1) / 2;
    case 2: return n * (n + 1) * (2 * n + 1) / 6;
    case 3: {
      Rational t = n * (n + 1) / 2;
      return t * t;
    }
    default: Fail(ErrorKind::kValidation, "power sums are implemented up to degree 3");
  }
}

}  // namespace

Polynomial::Polynomial(std::vector<Rational> ascending) : coeffs_(std::move(ascending)) { Trim(); }

Polynomial Polynomial::FromDescending(const std::vector<Rational>& descending) {
  return Polynomial(std::vector<Rational>(descending.rbegin(), descending.rend()));
}

void Polynomial::Trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::vector<Rational> Polynomial::Descending(std::size_t width) const {
  std::vector<Rational> out(width);
  for (std::size_t p = 0; p < coeffs_.size() && p < width; ++p) out[width - 1 - p] = coeffs_[p];
  return out;
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

QuadraticSurd Polynomial::operator()(const QuadraticSurd& x) const {
  QuadraticSurd acc(Rational(0));
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + QuadraticSurd(*it);
  return acc;
}

Polynomial Polynomial::Derivative() const {
  std::vector<Rational> out;
  for (std::size_t p = 1; p < coeffs_.size(); ++p) out.push_back(coeffs_[p] * static_cast<long>(p));
  return Polynomial(std::move(out));
}

Polynomial Polynomial::Antiderivative() const {
  std::vector<Rational> out(coeffs_.size() + 1);
  for (std::size_t p = 0; p < coeffs_.size(); ++p) out[p + 1] = coeffs_[p] / static_cast<long>(p + 1);
  return Polynomial(std::move(out));
}

Rational Polynomial::Integrate(const Rational& lo, const Rational& hi) const {
  Polynomial anti = Antiderivative();
  return anti(hi) - anti(lo);
}

Rational Polynomial::SumOverIntegers(const Integer& lo, const Integer& hi) const {
  if (lo > hi) return 0;
  Rational total = 0;
  for (std::size_t p = 0; p < coeffs_.size(); ++p) {
    total += coeffs_[p] * (PowerSum(static_cast<unsigned>(p), hi) - PowerSum(static_cast<unsigned>(p), lo - 1));
  }
  return total;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Rational> out(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = coeff(p) + o.coeff(p);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Rational& r) const {
  std::vector<Rational> out = coeffs_;
  for (Rational& c : out) c *= r;
  return Polynomial(std::move(out));
}

std::string Polynomial::ToString() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t p = coeffs_.size(); p-- > 0;) {
    if (coeffs_[p] == 0) continue;
    if (!first) out << " + ";
    out << gamx::ToString(coeffs_[p]);
    if (p >= 1) out << "*w";
    if (p >= 2) out << "^" << p;
    first = false;
  }
  return out.str();
}

}  // namespace gamx
