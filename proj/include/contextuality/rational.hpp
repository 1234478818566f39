#pragma once

// Exact arithmetic foundation. Every quantity in this library is a rational
// number; no floating point enters any polytope, LP, or measure computation.
// Backed by GMP through boost::multiprecision, which keeps values canonical
// (gcd-reduced, positive denominator) after every operation.

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace contextuality {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cross-check failure between two routes that must agree (closed form vs LP,
// derived system vs expected form). Distinct from bad user input.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline Integer numerator_of(const Rational& r) {
  return boost::multiprecision::numerator(r);
}

inline Integer denominator_of(const Rational& r) {
  return boost::multiprecision::denominator(r);
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }
inline Integer abs(const Integer& n) { return n < 0 ? Integer(-n) : n; }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Integer pow10(std::size_t k) {
  Integer p = 1;
  for (std::size_t i = 0; i < k; ++i) p *= 10;
  return p;
}

// Checked two-integer construction. Note boost's (int, int) rational
// constructor reads a negative built-in denominator as unsigned; going
// through Integer sidesteps that and yields the canonical form.
inline Rational make_rational(Integer num, Integer den) {
  if (den == 0) throw validation_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(std::move(num), std::move(den));
}

// Parses a plain decimal string ("0.049", ".049", "-0.778", "2") into the
// exact fraction over a power of ten. No exponent notation.
inline Rational parse_decimal(std::string_view s) {
  const std::string_view original = s;
  auto fail = [&]() -> Rational {
    throw validation_error("not a decimal number: '" + std::string(original) + "'");
  };
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  std::size_t frac_digits = 0;
  bool seen_point = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_point) return fail();
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      return fail();
    }
  }
  if (digits.empty()) return fail();
  // GMP reads a leading zero as an octal prefix; trim them first.
  const std::size_t first_nonzero = digits.find_first_not_of('0');
  Integer num =
      first_nonzero == std::string::npos ? Integer(0) : Integer(digits.substr(first_nonzero));
  if (negative) num = -num;
  return Rational(num, pow10(frac_digits));
}

// Exact value of a finite double via its binary representation.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw validation_error("non-finite double");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings make the mantissa integral for any IEEE-754 double.
  for (int i = 0; i < 53; ++i) mant *= 2.0;
  exp -= 53;
  Integer m(static_cast<long long>(mant));
  Rational r(m);
  if (exp >= 0) {
    r *= Rational(Integer(1) << exp);
  } else {
    r /= Rational(Integer(1) << -exp);
  }
  return r;
}

// "p/q" (or just "p" for integers); GMP's canonical form.
inline std::string to_fraction_string(const Rational& r) { return r.str(); }

// Fixed-point rendering with the requested number of fraction digits,
// rounding half away from zero. Deterministic across platforms.
inline std::string to_decimal_string(const Rational& r, int digits = 6) {
  if (digits < 0) digits = 0;
  const bool negative = r < 0;
  const Integer num = abs(numerator_of(r));
  const Integer den = denominator_of(r);
  const Integer scale = pow10(static_cast<std::size_t>(digits));
  Integer q, rem;
  boost::multiprecision::divide_qr(Integer(num * scale), den, q, rem);
  if (2 * rem >= den) ++q;
  std::string s = q.str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits))
      s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && q != 0) s.insert(0, "-");
  return s;
}

}  // namespace contextuality
