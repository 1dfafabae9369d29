#ifndef GAMX_RATIONAL_H_
#define GAMX_RATIONAL_H_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gamx {

using Rational = mpq_class;
using Integer = mpz_class;

// num/den in lowest terms; den must be nonzero.
Rational Ratio(const Integer& num, const Integer& den);

// Parses "p/q", "p", or a plain decimal such as "-0.125". The decimal form is
// converted exactly (0.1 is 1/10, not the nearest double).
Rational ParseRational(std::string_view text);

// Canonical "p/q" (or "p" when the denominator is 1).
std::string ToString(const Rational& value);
std::string ToString(const Integer& value);

Integer Floor(const Rational& value);
Integer Ceil(const Rational& value);

// Round half to even.
Integer RoundHalfEven(const Rational& value);

bool IsInteger(const Rational& value);

double ToDouble(const Rational& value);

Rational Abs(const Rational& value);

// 10^digits.
Integer PowerOfTen(unsigned digits);

}  // namespace gamx

#endif  // GAMX_RATIONAL_H_
