#include "hodge/exact.hpp"

#include <cmath>
#include <sstream>

namespace hodge {

std::string rational_str(const Rational& r) { return r.get_str(); }

std::string Complex::str() const {
  if (is_real()) return re_.get_str();
  std::ostringstream os;
  if (sgn(re_) != 0) {
    os << re_.get_str();
    if (sgn(im_) > 0) os << '+';
  }
  os << im_.get_str() << 'i';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Complex& c) { return os << c.str(); }

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw HodgeError("non-finite", "cannot convert non-finite double to rational");
  return Rational(v);
}

Rational rational_from_long_double(long double v) {
  if (!std::isfinite(v)) throw HodgeError("non-finite", "cannot convert non-finite value to rational");
  if (v == 0.0L) return Rational(0);
  int exp = 0;
  long double mant = std::frexp(v, &exp);  // v = mant * 2^exp, |mant| in [0.5,1)
  // 64 bits of mantissa fit exactly into an integer.
  long double scaled = std::ldexp(mant, 64);
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  mpz_class num(0);
  // Split into two 32-bit chunks to stay within unsigned long.
  long double hi = std::floor(scaled / 4294967296.0L);
  long double lo = scaled - hi * 4294967296.0L;
  num = static_cast<unsigned long>(hi);
  num <<= 32;
  num += static_cast<unsigned long>(lo);
  if (neg) num = -num;
  Rational r(num);
  int shift = exp - 64;
  if (shift > 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(shift));
  } else if (shift < 0) {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-shift));
  }
  r.canonicalize();
  return r;
}

Complex complex_from_double(std::complex<double> v) {
  return {rational_from_double(v.real()), rational_from_double(v.imag())};
}

Complex complex_from_long_double(long double re, long double im) {
  return {rational_from_long_double(re), rational_from_long_double(im)};
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw HodgeError("parse-error", "empty rational");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw HodgeError("parse-error", "malformed rational '" + s + "'");
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t decimals = s.size() - dot - 1;
    mpz_class den(1);
    for (std::size_t i = 0; i < decimals; ++i) den *= 10;
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw HodgeError("parse-error", "malformed rational '" + s + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw HodgeError("parse-error", "malformed rational '" + s + "'");
  if (sgn(r.get_den()) == 0) throw HodgeError("parse-error", "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

}  // namespace hodge
