#include "gamx/rational.h"

#include <cctype>
#include <string>

#include "gamx/errors.h"

namespace gamx {
namespace {

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer ParseInteger(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    body.remove_prefix(1);
  }
  if (!AllDigits(body)) {
    Fail(ErrorKind::kParse, "not a rational number: '" + std::string(text) + "'");
  }
  std::string normalized(text);
  if (normalized.front() == '+') normalized.erase(0, 1);
  return Integer(normalized, 10);
}

}  // namespace

Rational Ratio(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational ParseRational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.empty()) Fail(ErrorKind::kParse, "empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = ParseInteger(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!AllDigits(den_text)) {
      Fail(ErrorKind::kParse, "bad denominator in '" + std::string(text) + "'");
    }
    Integer den(std::string(den_text), 10);
    if (den == 0) Fail(ErrorKind::kParse, "zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
      whole.remove_prefix(1);
    }
    if ((!whole.empty() && !AllDigits(whole)) || (!frac.empty() && !AllDigits(frac)) ||
        (whole.empty() && frac.empty())) {
      Fail(ErrorKind::kParse, "not a rational number: '" + std::string(text) + "'");
    }
    Integer digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    Rational r(digits, PowerOfTen(static_cast<unsigned>(frac.size())));
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }

  return Rational(ParseInteger(text));
}

std::string ToString(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string ToString(const Integer& value) { return value.get_str(); }

Integer Floor(const Rational& value) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

Integer Ceil(const Rational& value) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

Integer RoundHalfEven(const Rational& value) {
  Integer lower = Floor(value);
  Rational frac = value - lower;
  static const Rational kHalf(1, 2);
  int cmp = mpq_cmp(frac.get_mpq_t(), kHalf.get_mpq_t());
  if (cmp < 0) return lower;
  if (cmp > 0) return lower + 1;
  return mpz_even_p(lower.get_mpz_t()) ? lower : Integer(lower + 1);
}

bool IsInteger(const Rational& value) { return value.get_den() == 1; }

double ToDouble(const Rational& value) { return value.get_d(); }

Rational Abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Integer PowerOfTen(unsigned digits) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, digits);
  return p;
}

}  // namespace gamx
